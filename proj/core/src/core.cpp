#include <dsiht/core.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

namespace dsiht {

GroupStructure build_groups(std::span<const Index> group_sizes)
{
    if (group_sizes.empty()) {
        throw std::invalid_argument("group structure needs at least one group");
    }
    GroupStructure out;
    out.sizes_.assign(group_sizes.begin(), group_sizes.end());
    out.offsets_.reserve(group_sizes.size());
    Index offset = 0;
    for (std::size_t j = 0; j < group_sizes.size(); ++j) {
        const Index size = group_sizes[j];
        if (size < 1) {
            throw std::invalid_argument("group " + std::to_string(j) + " has non-positive size "
                                        + std::to_string(size));
        }
        out.offsets_.push_back(offset);
        out.group_of_.insert(out.group_of_.end(), static_cast<std::size_t>(size), static_cast<Index>(j));
        out.max_size_ = std::max(out.max_size_, size);
        offset += size;
    }
    return out;
}

GroupStructure equal_groups(Index m, Index d)
{
    if (m < 1 || d < 1) {
        throw std::invalid_argument("equal_groups needs m >= 1 and d >= 1");
    }
    std::vector<Index> sizes(static_cast<std::size_t>(m), d);
    return build_groups(sizes);
}

bool GroupLayout::is_identity() const
{
    for (std::size_t k = 0; k < column_order.size(); ++k) {
        if (column_order[k] != static_cast<Index>(k)) return false;
    }
    return true;
}

GroupLayout layout_from_sizes(std::span<const Index> group_sizes)
{
    auto groups = build_groups(group_sizes);
    std::vector<Index> order(static_cast<std::size_t>(groups.p()));
    std::iota(order.begin(), order.end(), Index{0});
    return {std::move(groups), std::move(order)};
}

GroupLayout layout_from_membership(std::span<const long long> membership)
{
    if (membership.empty()) {
        throw std::invalid_argument("membership list is empty");
    }
    std::map<long long, std::vector<Index>> by_label;
    for (std::size_t i = 0; i < membership.size(); ++i) {
        by_label[membership[i]].push_back(static_cast<Index>(i));
    }
    std::vector<Index> sizes;
    std::vector<Index> order;
    order.reserve(membership.size());
    for (const auto& [label, columns] : by_label) {
        sizes.push_back(static_cast<Index>(columns.size()));
        order.insert(order.end(), columns.begin(), columns.end());
    }
    return {build_groups(sizes), std::move(order)};
}

Matrix permute_columns(const Matrix& raw, const GroupLayout& layout)
{
    if (raw.cols() != layout.groups.p()) {
        throw std::invalid_argument("design has " + std::to_string(raw.cols()) + " columns but groups cover "
                                    + std::to_string(layout.groups.p()));
    }
    if (layout.is_identity()) return raw;
    Matrix out(raw.rows(), raw.cols());
    for (Index k = 0; k < raw.cols(); ++k) {
        out.col(k) = raw.col(layout.column_order[static_cast<std::size_t>(k)]);
    }
    return out;
}

Vector restore_order(const Vector& contiguous, const GroupLayout& layout)
{
    if (contiguous.size() != layout.groups.p()) {
        throw std::invalid_argument("vector length does not match group layout");
    }
    Vector out(contiguous.size());
    for (Index k = 0; k < contiguous.size(); ++k) {
        out(layout.column_order[static_cast<std::size_t>(k)]) = contiguous(k);
    }
    return out;
}

SparseCoefficients::SparseCoefficients(Vector values, const GroupStructure& groups)
    : values_(std::move(values))
{
    if (values_.size() != groups.p()) {
        throw std::invalid_argument("coefficient length " + std::to_string(values_.size())
                                    + " does not match p = " + std::to_string(groups.p()));
    }
    for (Index i = 0; i < values_.size(); ++i) {
        if (values_(i) != 0.0) {
            support_.push_back(i);
            const Index g = groups.group_of(i);
            if (group_support_.empty() || group_support_.back() != g) group_support_.push_back(g);
        }
    }
}

SparseCoefficients SparseCoefficients::zeros(const GroupStructure& groups)
{
    return SparseCoefficients(Vector::Zero(groups.p()), groups);
}

Dataset standardize(const Matrix& raw_design, const Vector& response, StandardizeOptions options)
{
    const Index n = raw_design.rows();
    const Index p = raw_design.cols();
    if (n < 1 || p < 1) {
        throw std::invalid_argument("design must have at least one row and one column");
    }
    if (response.size() != n) {
        throw std::invalid_argument("response length " + std::to_string(response.size())
                                    + " does not match n = " + std::to_string(n));
    }
    Dataset out;
    out.design = raw_design;
    out.response = response;
    out.column_means = Vector::Zero(p);
    out.column_scales.resize(p);
    out.centered = options.center;
    if (options.center) {
        out.column_means = raw_design.colwise().mean().transpose();
        out.design.rowwise() -= out.column_means.transpose();
        out.response_mean = response.mean();
        out.response.array() -= out.response_mean;
    }
    const double root_n = std::sqrt(static_cast<double>(n));
    for (Index j = 0; j < p; ++j) {
        const double norm = out.design.col(j).norm();
        if (!(norm > 0.0)) throw DegenerateColumnError(j);
        const double scale = root_n / norm;
        out.design.col(j) *= scale;
        out.column_scales(j) = scale;
    }
    return out;
}

Vector to_original_scale(const Vector& standardized, const Dataset& data)
{
    return standardized.cwiseProduct(data.column_scales);
}

double double_sparse_norm(Index groups_nonzero, Index elements_nonzero, Index s0)
{
    if (s0 < 1) throw std::invalid_argument("s0 must be >= 1");
    return std::max(static_cast<double>(groups_nonzero),
                    static_cast<double>(elements_nonzero) / static_cast<double>(s0));
}

double double_sparse_norm(const SparseCoefficients& beta, Index s0)
{
    return double_sparse_norm(beta.l0_groups(), beta.l0(), s0);
}

double omega_from_norm(double group_norm, Index s0, Index m, Index d)
{
    if (s0 < 1) throw std::invalid_argument("s0 must be >= 1");
    if (group_norm < 0.0) throw std::invalid_argument("group norm must be non-negative");
    if (group_norm == 0.0) return 0.0;
    if (group_norm > static_cast<double>(m)) {
        throw InvalidStateError("||beta||_G = " + std::to_string(group_norm) + " exceeds m = " + std::to_string(m));
    }
    return omega_extended(group_norm, s0, m, d);
}

double omega_extended(double group_norm, Index s0, Index m, Index d)
{
    if (group_norm <= 0.0) return 0.0;
    const double e = std::exp(1.0);
    return group_norm * std::log(e * static_cast<double>(m) / group_norm)
           + static_cast<double>(s0) * group_norm * std::log(e * static_cast<double>(d) / static_cast<double>(s0));
}

double omega(const SparseCoefficients& beta, Index s0, Index m, Index d)
{
    return omega_from_norm(double_sparse_norm(beta, s0), s0, m, d);
}

DeltaConstants delta_constants(std::optional<Index> s, Index s0, Index m, Index d)
{
    if (m < 1 || d < 1) throw std::invalid_argument("m and d must be >= 1");
    if (s0 < 1 || s0 > d) {
        throw std::invalid_argument("s0 = " + std::to_string(s0) + " outside [1, " + std::to_string(d) + "]");
    }
    const double inv_s0 = 1.0 / static_cast<double>(s0);
    const double within = 1.0 + std::log(static_cast<double>(d) / static_cast<double>(s0));
    DeltaConstants out;
    out.delta_prime = inv_s0 * (1.0 + std::log(static_cast<double>(m))) + within;
    if (s) {
        if (*s < 1 || *s > m) {
            throw std::invalid_argument("s = " + std::to_string(*s) + " outside [1, " + std::to_string(m) + "]");
        }
        out.delta = inv_s0 * (1.0 + std::log(static_cast<double>(m) / static_cast<double>(*s))) + within;
    }
    return out;
}

} // namespace dsiht
