#include <dsiht/simulate.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <dsiht/parallel.hpp>
#include <dsiht/rng.hpp>

namespace dsiht {
namespace {

// First `count` entries of a uniform random permutation of 0..size-1, sorted.
std::vector<Index> sample_without_replacement(Rng& rng, Index size, Index count)
{
    std::vector<Index> pool(static_cast<std::size_t>(size));
    std::iota(pool.begin(), pool.end(), Index{0});
    for (Index k = 0; k < count; ++k) {
        const auto pick = k + static_cast<Index>(rng.below(static_cast<std::uint64_t>(size - k)));
        std::swap(pool[static_cast<std::size_t>(k)], pool[static_cast<std::size_t>(pick)]);
    }
    pool.resize(static_cast<std::size_t>(count));
    std::sort(pool.begin(), pool.end());
    return pool;
}

MetricSummary summarize(const std::vector<double>& values)
{
    MetricSummary out;
    if (values.empty()) return out;
    double sum = 0.0;
    for (const double v : values) sum += v;
    out.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double squares = 0.0;
        for (const double v : values) squares += (v - out.mean) * (v - out.mean);
        out.sd = std::sqrt(squares / static_cast<double>(values.size() - 1));
    }
    return out;
}

} // namespace

std::string_view to_string(Signal signal)
{
    return signal == Signal::Homogeneous ? "homogeneous" : "heterogeneous";
}

Signal parse_signal(std::string_view text)
{
    if (text == "homogeneous") return Signal::Homogeneous;
    if (text == "heterogeneous") return Signal::Heterogeneous;
    throw std::invalid_argument("unknown signal '" + std::string(text) + "' (expected homogeneous or heterogeneous)");
}

std::vector<std::string> ExperimentScenario::invalid_fields() const
{
    std::vector<std::string> bad;
    if (n < 1) bad.emplace_back("n");
    if (m < 1) bad.emplace_back("m");
    if (d < 1) bad.emplace_back("d");
    if (s < 1 || (m >= 1 && s > m)) bad.emplace_back("s");
    if (s0 < 1 || (d >= 1 && s0 > d)) bad.emplace_back("s0");
    if (!(rho >= 0.0 && rho < 1.0)) bad.emplace_back("rho");
    if (!(snr > 0.0)) bad.emplace_back("snr");
    if (replications < 1) bad.emplace_back("replications");
    return bad;
}

void ExperimentScenario::validate() const
{
    const auto bad = invalid_fields();
    if (bad.empty()) return;
    std::string message = "invalid scenario '" + id + "': offending fields";
    for (const auto& field : bad) message += " " + field;
    throw std::invalid_argument(message);
}

Matrix gen_design(Index n, Index m, Index d, double rho, std::uint64_t seed)
{
    if (!(rho >= 0.0 && rho < 1.0)) throw std::invalid_argument("rho must lie in [0, 1)");
    if (n < 1 || m < 1 || d < 1) throw std::invalid_argument("n, m and d must be >= 1");
    const Index p = m * d;
    Rng rng(seed, Rng::Stream::Design);
    const double innovation = std::sqrt(1.0 - rho * rho);
    // Filled row by row so the draw order does not depend on the storage order.
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows(n, p);
    for (Index i = 0; i < n; ++i) {
        double previous = rng.normal();
        rows(i, 0) = previous;
        for (Index j = 1; j < p; ++j) {
            previous = rho * previous + innovation * rng.normal();
            rows(i, j) = previous;
        }
    }
    return rows;
}

SparseCoefficients gen_coefficients(Index m, Index d, Index s, Index s0, Signal signal, std::uint64_t seed)
{
    if (s < 1 || s > m) throw std::invalid_argument("need 1 <= s <= m");
    if (s0 < 1 || s0 > d) throw std::invalid_argument("need 1 <= s0 <= group size");
    const auto groups = equal_groups(m, d);
    Rng rng(seed, Rng::Stream::Coefficients);
    Vector values = Vector::Zero(groups.p());
    for (const Index g : sample_without_replacement(rng, m, s)) {
        for (const Index k : sample_without_replacement(rng, d, s0)) {
            values(groups.offset(g) + k) = signal == Signal::Homogeneous ? rng.sign() : rng.normal();
        }
    }
    return SparseCoefficients(std::move(values), groups);
}

double ar1_quadratic_form(const SparseCoefficients& beta, double rho)
{
    const auto& support = beta.support();
    double total = 0.0;
    for (const Index i : support) {
        for (const Index j : support) {
            const auto lag = static_cast<double>(i > j ? i - j : j - i);
            total += beta.values()(i) * beta.values()(j) * std::pow(rho, lag);
        }
    }
    return total;
}

ResponseDraw gen_response(const Matrix& raw_design, const SparseCoefficients& beta, double rho, double snr,
                          std::uint64_t seed)
{
    if (raw_design.cols() != beta.size()) throw std::invalid_argument("design and coefficients disagree on p");
    if (beta.l0() == 0) throw std::invalid_argument("signal-to-noise ratio is undefined for a zero signal");
    if (!(snr > 0.0)) throw std::invalid_argument("snr must be positive");
    ResponseDraw out;
    out.sigma = std::sqrt(ar1_quadratic_form(beta, rho) / snr);
    out.response = Vector::Zero(raw_design.rows());
    for (const Index i : beta.support()) out.response.noalias() += beta.values()(i) * raw_design.col(i);
    Rng rng(seed, Rng::Stream::Noise);
    for (Index i = 0; i < out.response.size(); ++i) out.response(i) += out.sigma * rng.normal();
    return out;
}

MetricsRow compute_metrics(const SparseCoefficients& estimate, const SparseCoefficients& truth)
{
    if (estimate.size() != truth.size()) throw std::invalid_argument("estimate and truth differ in dimension");
    MetricsRow out;
    out.se = static_cast<long long>(estimate.l0()) - static_cast<long long>(truth.l0());
    out.gse = static_cast<long long>(estimate.l0_groups()) - static_cast<long long>(truth.l0_groups());

    double tp = 0.0;
    double fp = 0.0;
    double fn = 0.0;
    double tn = 0.0;
    for (Index i = 0; i < estimate.size(); ++i) {
        const bool selected = estimate.values()(i) != 0.0;
        const bool active = truth.values()(i) != 0.0;
        if (selected && active) tp += 1.0;
        else if (selected) fp += 1.0;
        else if (active) fn += 1.0;
        else tn += 1.0;
    }
    const double denominator = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
    // Exact support recovery scores 1 even when a margin is empty (full or empty support).
    if (fp == 0.0 && fn == 0.0) out.mcc = 1.0;
    else out.mcc = denominator > 0.0 ? (tp * tn - fp * fn) / std::sqrt(denominator) : 0.0;
    out.ee = (estimate.values() - truth.values()).norm();
    out.ee_original = out.ee;
    return out;
}

double lower_bound_reference(Index s, Index s0, Index m, Index d, Index n, double sigma, double theta_max)
{
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (!(theta_max > 0.0)) throw std::invalid_argument("theta_max must be positive");
    const double delta = *delta_constants(s, s0, m, d).delta;
    return sigma * sigma * static_cast<double>(s * s0) * delta
           / (256.0 * theta_max * theta_max * static_cast<double>(n));
}

Replication make_replication(const ExperimentScenario& scenario, int rep)
{
    scenario.validate();
    const std::uint64_t seed = scenario.base_seed + static_cast<std::uint64_t>(rep);
    const Matrix raw = gen_design(scenario.n, scenario.m, scenario.d, scenario.rho, seed);
    auto truth = gen_coefficients(scenario.m, scenario.d, scenario.s, scenario.s0, scenario.signal, seed);
    auto draw = gen_response(raw, truth, scenario.rho, scenario.snr, seed);
    auto groups = equal_groups(scenario.m, scenario.d);
    Dataset data = standardize(raw, draw.response);
    SparseCoefficients truth_std(truth.values().cwiseQuotient(data.column_scales), groups);
    return Replication{std::move(groups), std::move(data), std::move(truth), std::move(truth_std), draw.sigma, seed};
}

AdaptiveResult fit_replication(const Replication& replication, const SolverConfig& config,
                               const ExperimentOptions& options)
{
    AdaptiveOptions adaptive;
    adaptive.ic_kind = options.ic_kind;
    std::optional<std::vector<Index>> grid = options.s0_grid;
    if (options.forced_s0) grid = std::vector<Index>{*options.forced_s0};
    return adsiht_fit(replication.data, replication.groups, grid, config, adaptive);
}

ExperimentAggregate aggregate_rows(const std::vector<MetricsRow>& rows)
{
    std::vector<double> se, gse, mcc, ee, ee_original, runtime;
    ExperimentAggregate out;
    for (const auto& row : rows) {
        if (!row.ok) {
            ++out.failed;
            continue;
        }
        ++out.succeeded;
        se.push_back(static_cast<double>(row.se));
        gse.push_back(static_cast<double>(row.gse));
        mcc.push_back(row.mcc);
        ee.push_back(row.ee);
        ee_original.push_back(row.ee_original);
        runtime.push_back(row.runtime_seconds);
    }
    out.se = summarize(se);
    out.gse = summarize(gse);
    out.mcc = summarize(mcc);
    out.ee = summarize(ee);
    out.ee_original = summarize(ee_original);
    out.runtime_seconds = summarize(runtime);
    return out;
}

ExperimentResult run_experiment(const ExperimentScenario& scenario, const SolverConfig& config,
                                const ExperimentOptions& options)
{
    scenario.validate();
    config.validate();
    ExperimentResult out;
    out.rows.resize(static_cast<std::size_t>(scenario.replications));
    parallel_for(out.rows.size(), options.workers, [&](std::size_t r) {
        MetricsRow row;
        const int rep = static_cast<int>(r);
        try {
            const auto replication = make_replication(scenario, rep);
            const auto start = std::chrono::steady_clock::now();
            const auto result = fit_replication(replication, config, options);
            const auto stop = std::chrono::steady_clock::now();
            row = compute_metrics(result.best.coefficients, replication.truth_standardized);
            row.ee_original = (result.best.coefficients_original_scale - replication.truth.values()).norm();
            row.s0_selected = result.best.s0_used;
            if (options.timing) row.runtime_seconds = std::chrono::duration<double>(stop - start).count();
        } catch (const std::exception& error) {
            row = MetricsRow{};
            row.ok = false;
            row.error = error.what();
        }
        row.rep = rep;
        out.rows[r] = std::move(row);
    });
    out.aggregate = aggregate_rows(out.rows);
    return out;
}

} // namespace dsiht
