#pragma once

#include <optional>
#include <vector>

#include <dsiht/core.hpp>

namespace dsiht {

struct SolverConfig
{
    double kappa = 0.9;                  // threshold decay: lambda_{t+1} = sqrt(kappa) * lambda_t
    Index s0 = 1;
    double criterion_constant = 1000.0;  // weight of the complexity term in C_t
    double initial_noise_factor = 100.0 / 9.0;  // lambda_0 noise term multiplier
    double initial_signal_factor = 19.0 / 4.0;  // lambda_0 correlation term multiplier
    double phase_one_factor = 8.0;       // phase 1 runs while lambda_t >= f sigma_t sqrt(delta'/n)
    double phase_two_factor = 4.0;       // phase 2 runs while lambda_t >= f sigma_bar / sqrt(n)
    int max_iterations = 500;            // guard over both phases
    std::optional<double> projection_ridge;  // defaults to 1e-10 * n
    bool center = false;

    /// Throws std::invalid_argument describing the first violated constraint.
    void validate() const;
    double ridge_for(Index n) const;

    /// Constants tuned for moderate n, where the default guards stop phase 2
    /// before the signal enters: phase_two_factor = 1.5, criterion_constant = 1.
    static SolverConfig practical();
};

/// Nonzero entries of one iterate.
struct CompactIterate
{
    std::vector<Index> indices;
    std::vector<double> values;

    Vector dense(Index p) const;
};

struct TraceRecord
{
    int t = 0;
    double lambda = 0.0;          // lambda_t
    double applied_threshold = 0.0;  // threshold that produced this iterate (lambda_{t-1}; lambda_0 at t = 0)
    double sigma = 0.0;           // sigma_t = ||y - X beta_t|| / sqrt(n)
    Index element_support_size = 0;
    Index group_support_size = 0;
    double rss = 0.0;
    std::optional<double> criterion;  // C_t, present for t in [t_bar, T]
    bool ridge_fallback = false;
    CompactIterate iterate;
};

struct SolverTrace
{
    std::vector<TraceRecord> records;
    int phase_boundary = 0;  // t_bar
    int horizon = 0;         // T
    int selected = 0;        // t_tilde
    bool truncated = false;  // max_iterations hit
    bool degenerate_response = false;  // lambda_0 == 0
};

struct FitResult
{
    SparseCoefficients coefficients;       // standardized scale
    Vector coefficients_original_scale;    // coefficients * column_scales
    SolverTrace trace;
    double sigma_bar = 0.0;
    Index s0_used = 1;
    bool rank_deficient = false;           // some projection needed the ridge fallback

    /// Criterion value of the selected iterate.
    double selected_criterion() const;
};

/// H = beta + X^T (y - X beta) / n.
Vector gradient_step(const SparseCoefficients& beta, const Dataset& data);

/// lambda_0 = (100/9) sigma0 sqrt(delta'/n)  v  (19/4) ||X^T y / n||_inf, with sigma0 = ||y|| / sqrt(n).
/// The two multipliers come from `config`.
double initial_threshold(const Dataset& data, const GroupStructure& groups, const SolverConfig& config);
double initial_threshold(const Dataset& data, Index s0, const GroupStructure& groups);
double initial_threshold(double sigma0, double max_abs_correlation, Index n, double delta_prime,
                         double noise_factor = 100.0 / 9.0, double signal_factor = 19.0 / 4.0);

struct ProjectionResult
{
    SparseCoefficients coefficients;
    bool ridge_fallback = false;
};

/**
 * Least squares restricted to `support`. When X_S^T X_S is numerically
 * singular the system is solved with `ridge` added to the diagonal and the
 * result is flagged.
 */
ProjectionResult project_least_squares(const Dataset& data, const GroupStructure& groups,
                                       std::span<const Index> support, double ridge);
ProjectionResult project_least_squares(const Dataset& data, const GroupStructure& groups,
                                       std::span<const Index> support);

/// Double sparse IHT with debiasing projection and criterion-based stopping.
FitResult dsiht_fit(const Dataset& data, const GroupStructure& groups, const SolverConfig& config);

/// ||y - X beta||^2 computed over the support of beta.
double residual_sum_of_squares(const SparseCoefficients& beta, const Dataset& data);

} // namespace dsiht
