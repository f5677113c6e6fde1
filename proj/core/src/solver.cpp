#include <dsiht/solver.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>

#include <dsiht/thresholding.hpp>

namespace dsiht {
namespace {

constexpr double kMinReciprocalCondition = 1e-12;

void check_shapes(const Dataset& data, const GroupStructure& groups)
{
    if (data.p() != groups.p()) {
        throw std::invalid_argument("design has " + std::to_string(data.p()) + " columns but groups cover "
                                    + std::to_string(groups.p()));
    }
    if (data.response.size() != data.n()) {
        throw std::invalid_argument("response length does not match design rows");
    }
}

Vector fitted_values(const SparseCoefficients& beta, const Dataset& data)
{
    Vector fitted = Vector::Zero(data.n());
    for (const Index i : beta.support()) fitted.noalias() += beta.values()(i) * data.design.col(i);
    return fitted;
}

Matrix gather_columns(const Matrix& design, std::span<const Index> columns)
{
    Matrix out(design.rows(), static_cast<Index>(columns.size()));
    for (std::size_t c = 0; c < columns.size(); ++c) out.col(static_cast<Index>(c)) = design.col(columns[c]);
    return out;
}

CompactIterate compact(const SparseCoefficients& beta)
{
    CompactIterate out;
    out.indices = beta.support();
    out.values.reserve(out.indices.size());
    for (const Index i : out.indices) out.values.push_back(beta.values()(i));
    return out;
}

} // namespace

void SolverConfig::validate() const
{
    if (!(kappa > 0.0 && kappa < 1.0)) throw std::invalid_argument("kappa must lie in (0, 1)");
    if (s0 < 1) throw std::invalid_argument("s0 must be >= 1");
    if (!(criterion_constant > 0.0)) throw std::invalid_argument("criterion constant must be positive");
    if (!(initial_noise_factor >= 0.0 && initial_signal_factor >= 0.0)) {
        throw std::invalid_argument("initial threshold factors must be non-negative");
    }
    if (!(phase_one_factor > 0.0 && phase_two_factor > 0.0)) {
        throw std::invalid_argument("phase guard factors must be positive");
    }
    if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
    if (projection_ridge && !(*projection_ridge >= 0.0)) {
        throw std::invalid_argument("projection ridge must be non-negative");
    }
}

double SolverConfig::ridge_for(Index n) const
{
    return projection_ridge.value_or(1e-10 * static_cast<double>(n));
}

SolverConfig SolverConfig::practical()
{
    SolverConfig config;
    config.phase_two_factor = 1.5;
    config.criterion_constant = 1.0;
    return config;
}

Vector CompactIterate::dense(Index p) const
{
    Vector out = Vector::Zero(p);
    for (std::size_t k = 0; k < indices.size(); ++k) out(indices[k]) = values[k];
    return out;
}

double FitResult::selected_criterion() const
{
    const auto& rec = trace.records.at(static_cast<std::size_t>(trace.selected));
    return rec.criterion.value_or(std::numeric_limits<double>::quiet_NaN());
}

double residual_sum_of_squares(const SparseCoefficients& beta, const Dataset& data)
{
    return (data.response - fitted_values(beta, data)).squaredNorm();
}

Vector gradient_step(const SparseCoefficients& beta, const Dataset& data)
{
    if (beta.size() != data.p() || data.response.size() != data.n()) {
        throw std::invalid_argument("gradient_step: dimension mismatch");
    }
    const Vector residual = data.response - fitted_values(beta, data);
    Vector landing = beta.values();
    landing.noalias() += data.design.transpose() * residual / static_cast<double>(data.n());
    return landing;
}

double initial_threshold(double sigma0, double max_abs_correlation, Index n, double delta_prime,
                         double noise_factor, double signal_factor)
{
    const double noise_term = noise_factor * sigma0 * std::sqrt(delta_prime / static_cast<double>(n));
    const double signal_term = signal_factor * max_abs_correlation;
    return std::max(noise_term, signal_term);
}

double initial_threshold(const Dataset& data, const GroupStructure& groups, const SolverConfig& config)
{
    check_shapes(data, groups);
    const auto n = static_cast<double>(data.n());
    const double sigma0 = data.response.norm() / std::sqrt(n);
    const double max_corr = (data.design.transpose() * data.response).cwiseAbs().maxCoeff() / n;
    const double delta_prime = delta_constants(std::nullopt, config.s0, groups.m(), groups.d()).delta_prime;
    return initial_threshold(sigma0, max_corr, data.n(), delta_prime, config.initial_noise_factor,
                             config.initial_signal_factor);
}

double initial_threshold(const Dataset& data, Index s0, const GroupStructure& groups)
{
    SolverConfig config;
    config.s0 = s0;
    return initial_threshold(data, groups, config);
}

ProjectionResult project_least_squares(const Dataset& data, const GroupStructure& groups,
                                       std::span<const Index> support, double ridge)
{
    check_shapes(data, groups);
    Vector values = Vector::Zero(data.p());
    bool fallback = false;
    if (!support.empty()) {
        const Matrix columns = gather_columns(data.design, support);
        Matrix gram = columns.transpose() * columns;
        const Vector rhs = columns.transpose() * data.response;
        Eigen::LLT<Matrix> llt(gram);
        if (llt.info() != Eigen::Success || !(llt.rcond() >= kMinReciprocalCondition)) {
            fallback = true;
            gram.diagonal().array() += ridge;
            llt.compute(gram);
        }
        Vector solution;
        if (llt.info() == Eigen::Success) {
            solution = llt.solve(rhs);
        } else {
            // Ridge too small to restore definiteness; LDLT handles semidefinite systems.
            solution = gram.ldlt().solve(rhs);
        }
        for (std::size_t c = 0; c < support.size(); ++c) values(support[c]) = solution(static_cast<Index>(c));
    }
    return {SparseCoefficients(std::move(values), groups), fallback};
}

ProjectionResult project_least_squares(const Dataset& data, const GroupStructure& groups,
                                       std::span<const Index> support)
{
    return project_least_squares(data, groups, support, 1e-10 * static_cast<double>(data.n()));
}

FitResult dsiht_fit(const Dataset& data, const GroupStructure& groups, const SolverConfig& config)
{
    config.validate();
    check_shapes(data, groups);
    if (config.s0 > groups.d()) {
        throw std::invalid_argument("s0 = " + std::to_string(config.s0) + " exceeds the largest group size "
                                    + std::to_string(groups.d()));
    }

    const Index n = data.n();
    const double root_n = std::sqrt(static_cast<double>(n));
    const double inv_n = 1.0 / static_cast<double>(n);
    const double delta_prime = delta_constants(std::nullopt, config.s0, groups.m(), groups.d()).delta_prime;
    const double root_kappa = std::sqrt(config.kappa);
    const double ridge = config.ridge_for(n);

    double lambda = initial_threshold(data, groups, config);

    SparseCoefficients beta = SparseCoefficients::zeros(groups);
    Vector residual = data.response;
    double rss = residual.squaredNorm();
    double sigma = std::sqrt(rss * inv_n);
    bool any_fallback = false;

    SolverTrace trace;
    auto record = [&](int t, double applied, bool fallback) {
        TraceRecord rec;
        rec.t = t;
        rec.lambda = lambda;
        rec.applied_threshold = applied;
        rec.sigma = sigma;
        rec.element_support_size = beta.l0();
        rec.group_support_size = beta.l0_groups();
        rec.rss = rss;
        rec.ridge_fallback = fallback;
        rec.iterate = compact(beta);
        trace.records.push_back(std::move(rec));
    };
    record(0, lambda, false);

    int t = 0;
    auto advance = [&]() {
        Vector landing = beta.values();
        landing.noalias() += data.design.transpose() * residual * inv_n;
        const auto candidate = double_sparse_threshold(landing, {lambda, config.s0}, groups);
        auto projected = project_least_squares(data, groups, candidate.support(), ridge);
        beta = std::move(projected.coefficients);
        any_fallback = any_fallback || projected.ridge_fallback;
        residual = data.response - fitted_values(beta, data);
        rss = residual.squaredNorm();
        sigma = std::sqrt(rss * inv_n);
        const double applied = lambda;
        lambda *= root_kappa;
        ++t;
        record(t, applied, projected.ridge_fallback);
    };

    double sigma_bar = 0.0;
    auto score = [&](TraceRecord& rec) {
        const double group_norm = double_sparse_norm(rec.group_support_size, rec.element_support_size, config.s0);
        const double complexity = omega_extended(group_norm, config.s0, groups.m(), groups.d());
        rec.criterion = rec.rss * inv_n + config.criterion_constant * sigma_bar * sigma_bar * complexity * inv_n;
    };

    if (lambda == 0.0) {
        trace.degenerate_response = true;
        score(trace.records.back());
    } else {
        while (lambda >= config.phase_one_factor * sigma / root_n * std::sqrt(delta_prime)) {
            if (t >= config.max_iterations) {
                trace.truncated = true;
                break;
            }
            advance();
        }
        trace.phase_boundary = t;
        sigma_bar = sigma;
        score(trace.records.back());
        if (!trace.truncated) {
            while (lambda >= config.phase_two_factor * sigma_bar / root_n) {
                if (t >= config.max_iterations) {
                    trace.truncated = true;
                    break;
                }
                advance();
                score(trace.records.back());
            }
        }
    }
    trace.horizon = t;

    int best = trace.phase_boundary;
    for (int k = trace.phase_boundary + 1; k <= trace.horizon; ++k) {
        if (*trace.records[static_cast<std::size_t>(k)].criterion
            < *trace.records[static_cast<std::size_t>(best)].criterion) {
            best = k;
        }
    }
    trace.selected = best;

    const auto& chosen = trace.records[static_cast<std::size_t>(best)];
    SparseCoefficients selected(chosen.iterate.dense(data.p()), groups);
    Vector original = to_original_scale(selected.values(), data);
    return FitResult{std::move(selected), std::move(original), std::move(trace), sigma_bar, config.s0, any_fallback};
}

} // namespace dsiht
