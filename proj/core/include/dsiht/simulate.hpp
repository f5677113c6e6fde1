#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <dsiht/adaptive.hpp>
#include <dsiht/core.hpp>

namespace dsiht {

enum class Signal
{
    Homogeneous,    // nonzeros drawn from {+1, -1}
    Heterogeneous,  // nonzeros drawn from N(0, 1)
};

std::string_view to_string(Signal signal);
Signal parse_signal(std::string_view text);

struct ExperimentScenario
{
    std::string id = "scenario";
    Index n = 0;
    Index m = 0;
    Index d = 0;
    Index s = 0;   // nonzero groups
    Index s0 = 0;  // nonzeros per chosen group
    double rho = 0.5;
    double snr = 1.0;
    Signal signal = Signal::Homogeneous;
    int replications = 1;
    std::uint64_t base_seed = 0;

    /// Names of fields violating their constraints; empty when valid.
    std::vector<std::string> invalid_fields() const;
    /// Throws std::invalid_argument listing every offending field.
    void validate() const;
};

struct MetricsRow
{
    int rep = 0;
    long long se = 0;   // |S_hat| - |S*|
    long long gse = 0;  // ||beta_hat||_{0,2} - ||beta*||_{0,2}
    double mcc = 0.0;
    double ee = 0.0;           // on the standardized scale the solver works in
    double ee_original = 0.0;  // on the raw design scale
    double runtime_seconds = 0.0;
    Index s0_selected = 0;
    bool ok = true;
    std::string error;
};

/// Rows i.i.d. N(0, Sigma) with Sigma_ij = rho^|i-j|, via x_j = rho x_{j-1} + sqrt(1 - rho^2) z_j.
Matrix gen_design(Index n, Index m, Index d, double rho, std::uint64_t seed);

/// s groups chosen uniformly without replacement, s0 uniform positions in each.
SparseCoefficients gen_coefficients(Index m, Index d, Index s, Index s0, Signal signal, std::uint64_t seed);

struct ResponseDraw
{
    Vector response;
    double sigma = 0.0;
};

/// beta^T Sigma beta for the AR(1) covariance, summed over the support only.
double ar1_quadratic_form(const SparseCoefficients& beta, double rho);

/// y = X beta + xi with sigma = sqrt(beta^T Sigma beta / snr).
ResponseDraw gen_response(const Matrix& raw_design, const SparseCoefficients& beta, double rho, double snr,
                          std::uint64_t seed);

/// SE, GSE, MCC and EE of `estimate` against `truth`. runtime is left at 0.
MetricsRow compute_metrics(const SparseCoefficients& estimate, const SparseCoefficients& truth);

/// sigma^2 s s0 Delta / (256 theta_max^2 n), the minimax lower bound on squared error.
double lower_bound_reference(Index s, Index s0, Index m, Index d, Index n, double sigma, double theta_max);

/// One seeded synthetic instance, standardized for fitting.
struct Replication
{
    GroupStructure groups;
    Dataset data;
    SparseCoefficients truth;              // raw scale
    SparseCoefficients truth_standardized; // beta*_j / c_j
    double sigma = 0.0;
    std::uint64_t seed = 0;
};

Replication make_replication(const ExperimentScenario& scenario, int rep);

struct ExperimentOptions
{
    std::optional<Index> forced_s0;                 // run dsiht_fit with this s0 instead of the grid
    std::optional<std::vector<Index>> s0_grid;
    IcKind ic_kind = IcKind::SparseGroupCriterion;
    unsigned workers = 1;                           // replications in flight; 0 = all cores
    bool timing = false;                            // measure wall-clock runtime per replication
};

/// Fits one replication the way run_experiment does.
AdaptiveResult fit_replication(const Replication& replication, const SolverConfig& config,
                               const ExperimentOptions& options);

struct MetricSummary
{
    double mean = 0.0;
    double sd = 0.0;
};

struct ExperimentAggregate
{
    int succeeded = 0;
    int failed = 0;
    MetricSummary se, gse, mcc, ee, ee_original, runtime_seconds;
};

struct ExperimentResult
{
    std::vector<MetricsRow> rows;
    ExperimentAggregate aggregate;
};

/// Mean and sample standard deviation over the successful rows, in row order.
ExperimentAggregate aggregate_rows(const std::vector<MetricsRow>& rows);

/**
 * Replication r uses seed base_seed + r. Failures are recorded in the row
 * (ok = false) and excluded from the aggregate.
 */
ExperimentResult run_experiment(const ExperimentScenario& scenario, const SolverConfig& config,
                                const ExperimentOptions& options = {});

} // namespace dsiht
