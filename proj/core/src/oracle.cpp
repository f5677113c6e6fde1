#include <dsiht/oracle.hpp>

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace dsiht {
namespace {

double binomial(Index n, Index k)
{
    double out = 1.0;
    for (Index i = 1; i <= k; ++i) out = out * static_cast<double>(n - k + i) / static_cast<double>(i);
    return out;
}

void guard(const GroupStructure& groups, const ShapeSpec& shape)
{
    const double count = count_supports(groups, shape);
    if (count > kEnumerationLimit) throw EnumerationTooLarge(count, kEnumerationLimit);
}

class SupportWalker
{
public:
    SupportWalker(const GroupStructure& groups, const ShapeSpec& shape,
                  const std::function<void(std::span<const Index>)>& visit)
        : groups_(groups), shape_(shape), visit_(visit), used_(static_cast<std::size_t>(groups.m()), 0)
    {}

    void run() { descend(0); }

private:
    void descend(Index first)
    {
        visit_(current_);
        if (static_cast<Index>(current_.size()) >= shape_.budget()) return;
        for (Index i = first; i < groups_.p(); ++i) {
            const auto g = static_cast<std::size_t>(groups_.group_of(i));
            if (used_[g] == 0 && active_groups_ >= shape_.s) continue;
            if (used_[g]++ == 0) ++active_groups_;
            current_.push_back(i);
            descend(i + 1);
            current_.pop_back();
            if (--used_[g] == 0) --active_groups_;
        }
    }

    const GroupStructure& groups_;
    const ShapeSpec& shape_;
    const std::function<void(std::span<const Index>)>& visit_;
    std::vector<Index> current_;
    std::vector<Index> used_;
    Index active_groups_ = 0;
};

Matrix gather_columns(const Matrix& design, std::span<const Index> columns)
{
    Matrix out(design.rows(), static_cast<Index>(columns.size()));
    for (std::size_t c = 0; c < columns.size(); ++c) out.col(static_cast<Index>(c)) = design.col(columns[c]);
    return out;
}

} // namespace

void ShapeSpec::validate(const GroupStructure& groups) const
{
    if (s < 0 || s > groups.m()) {
        throw std::invalid_argument("shape s = " + std::to_string(s) + " outside [0, " + std::to_string(groups.m()) + "]");
    }
    if (s0 < 1 || s0 > groups.d()) {
        throw std::invalid_argument("shape s0 = " + std::to_string(s0) + " outside [1, "
                                    + std::to_string(groups.d()) + "]");
    }
}

bool ShapeSpec::admits(std::span<const Index> support, const GroupStructure& groups) const
{
    if (static_cast<Index>(support.size()) > budget()) return false;
    std::vector<Index> touched;
    for (const Index i : support) touched.push_back(groups.group_of(i));
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    return static_cast<Index>(touched.size()) <= s;
}

double count_supports(const GroupStructure& groups, const ShapeSpec& shape)
{
    shape.validate(groups);
    const Index budget = shape.budget();
    // ways[g][k]: choices over the groups seen so far with g nonempty groups and k elements.
    std::vector<std::vector<double>> ways(static_cast<std::size_t>(shape.s + 1),
                                          std::vector<double>(static_cast<std::size_t>(budget + 1), 0.0));
    ways[0][0] = 1.0;
    for (Index j = 0; j < groups.m(); ++j) {
        const Index size = groups.size(j);
        auto next = ways;
        for (Index g = 0; g < shape.s; ++g) {
            for (Index k = 0; k <= budget; ++k) {
                const double base = ways[static_cast<std::size_t>(g)][static_cast<std::size_t>(k)];
                if (base == 0.0) continue;
                for (Index e = 1; e <= size && k + e <= budget; ++e) {
                    next[static_cast<std::size_t>(g + 1)][static_cast<std::size_t>(k + e)] += base * binomial(size, e);
                }
            }
        }
        ways = std::move(next);
    }
    double total = 0.0;
    for (const auto& row : ways) {
        for (const double v : row) total += v;
    }
    return total;
}

void for_each_support(const GroupStructure& groups, const ShapeSpec& shape,
                      const std::function<void(std::span<const Index>)>& visit)
{
    guard(groups, shape);
    SupportWalker(groups, shape, visit).run();
}

std::vector<std::vector<Index>> enumerate_supports(const GroupStructure& groups, const ShapeSpec& shape)
{
    std::vector<std::vector<Index>> out;
    for_each_support(groups, shape, [&](std::span<const Index> support) {
        out.emplace_back(support.begin(), support.end());
    });
    return out;
}

bool is_maximal_support(std::span<const Index> support, const GroupStructure& groups, const ShapeSpec& shape)
{
    if (static_cast<Index>(support.size()) >= shape.budget()) return true;
    std::vector<Index> per_group(static_cast<std::size_t>(groups.m()), 0);
    Index active = 0;
    for (const Index i : support) {
        if (per_group[static_cast<std::size_t>(groups.group_of(i))]++ == 0) ++active;
    }
    for (Index j = 0; j < groups.m(); ++j) {
        const Index used = per_group[static_cast<std::size_t>(j)];
        if (used > 0 && used < groups.size(j)) return false;  // room inside an active group
        if (used == 0 && active < shape.s) return false;      // room for a new group
    }
    return true;
}

BestSubset best_subset_oracle(const Dataset& data, const GroupStructure& groups, const ShapeSpec& shape)
{
    if (data.p() != groups.p()) throw std::invalid_argument("design and group structure disagree on p");
    std::vector<Index> best_support;
    Vector best_solution;
    double best_rss = std::numeric_limits<double>::infinity();
    for_each_support(groups, shape, [&](std::span<const Index> support) {
        double rss = data.response.squaredNorm();
        Vector solution;
        if (!support.empty()) {
            const Matrix columns = gather_columns(data.design, support);
            Eigen::HouseholderQR<Matrix> qr(columns);
            solution = qr.solve(data.response);
            rss = (data.response - columns * solution).squaredNorm();
        }
        if (rss < best_rss) {
            best_rss = rss;
            best_support.assign(support.begin(), support.end());
            best_solution = std::move(solution);
        }
    });
    Vector values = Vector::Zero(data.p());
    for (std::size_t c = 0; c < best_support.size(); ++c) values(best_support[c]) = best_solution(static_cast<Index>(c));
    return {SparseCoefficients(std::move(values), groups), std::move(best_support), best_rss};
}

DsripConstants dsrip_constants(const Dataset& data, const GroupStructure& groups, const ShapeSpec& shape)
{
    if (data.p() != groups.p()) throw std::invalid_argument("design and group structure disagree on p");
    if (shape.s < 1) throw std::invalid_argument("restricted eigenvalues need s >= 1");
    DsripConstants out;
    out.lower = std::numeric_limits<double>::infinity();
    out.upper = 0.0;
    for_each_support(groups, shape, [&](std::span<const Index> support) {
        if (support.empty() || !is_maximal_support(support, groups, shape)) return;
        const Matrix columns = gather_columns(data.design, support);
        const Matrix gram = columns.transpose() * columns;
        Eigen::SelfAdjointEigenSolver<Matrix> solver(gram, Eigen::EigenvaluesOnly);
        const auto& eigen = solver.eigenvalues();
        out.lower = std::min(out.lower, std::max(0.0, eigen(0)));
        out.upper = std::max(out.upper, eigen(eigen.size() - 1));
    });
    out.ratio = out.upper > 0.0 ? 1.0 - out.lower / out.upper : 1.0;
    return out;
}

} // namespace dsiht
