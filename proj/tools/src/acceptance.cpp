#include <dsiht/tools/acceptance.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <numeric>
#include <sstream>

#include <dsiht/oracle.hpp>
#include <dsiht/parallel.hpp>
#include <dsiht/rng.hpp>
#include <dsiht/simulate.hpp>
#include <dsiht/thresholding.hpp>
#include <dsiht/tools/commands.hpp>

namespace dsiht::acceptance {
namespace {

// Criterion 1
constexpr int kOperatorCases = 10000;
constexpr double kHomogeneityTolerance = 1e-12;
constexpr double kOperatorBudgetSeconds = 10.0;
constexpr std::uint64_t kOperatorSeed = 20231;

// Criterion 2
constexpr int kOracleSeeds = 100;
constexpr int kOracleRequiredMatches = 90;
constexpr double kOracleBudgetSeconds = 60.0;
constexpr std::uint64_t kOracleBaseSeed = 100;

// Criteria 3, 6 and 7 share this regime.
constexpr int kTableReplications = 20;
constexpr std::uint64_t kTableBaseSeed = 1000;
constexpr double kTableMinMcc = 0.95;
constexpr double kTableMaxEe = 0.60;
constexpr double kTableMaxAbsSe = 1.5;
constexpr double kTableMaxAbsGse = 1.0;
constexpr double kTableBudgetSeconds = 600.0;

// Criterion 4
constexpr Index kRateSizes[] = {400, 800, 1600};
constexpr std::uint64_t kRateBaseSeed = 2000;
constexpr double kRateLow = 1.15;
constexpr double kRateHigh = 1.75;
constexpr double kRateBudgetSeconds = 1800.0;

// Criterion 5
constexpr int kEquivarianceInstances = 50;
constexpr double kEquivarianceScales[] = {0.1, 3.0, 100.0};
constexpr double kEquivarianceTolerance = 1e-8;
constexpr std::uint64_t kEquivarianceBaseSeed = 3000;

// Criteria 6 and 7
constexpr double kPathConstant = 5.2;
constexpr double kRequiredFraction = 0.95;

// Criterion 8
constexpr std::uint64_t kDeterminismSeed = 8080;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string printf_string(const char* format, ...)
{
    char buffer[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buffer, sizeof buffer, format, args);
    va_end(args);
    return buffer;
}

int required_count(int total)
{
    return static_cast<int>(std::ceil(kRequiredFraction * total - 1e-9));
}

ExperimentScenario table_scenario(Index n = 500)
{
    ExperimentScenario scenario;
    scenario.id = "table1-s0-5";
    scenario.n = n;
    scenario.m = 250;
    scenario.d = 20;
    scenario.s = 4;
    scenario.s0 = 5;
    scenario.rho = 0.5;
    scenario.snr = 5.0;
    scenario.signal = Signal::Homogeneous;
    scenario.replications = kTableReplications;
    scenario.base_seed = kTableBaseSeed;
    return scenario;
}

ExperimentOptions experiment_options(const Options& options)
{
    ExperimentOptions out;
    out.workers = options.workers;
    return out;
}

struct RegimeRun
{
    Replication replication;
    FitResult fit;
};

// One replication of the shared regime, fitted the way run_experiment does.
RegimeRun regime_run(int rep)
{
    auto replication = make_replication(table_scenario(), rep);
    auto result = fit_replication(replication, SolverConfig::practical(), {});
    return {std::move(replication), std::move(result.best)};
}

Vector reference_threshold(const Vector& v, double lambda, Index s0, const GroupStructure& groups)
{
    Vector out = v;
    for (Index i = 0; i < out.size(); ++i) {
        if (std::abs(out(i)) < lambda) out(i) = 0.0;
    }
    for (Index j = 0; j < groups.m(); ++j) {
        auto block = out.segment(groups.offset(j), groups.size(j));
        if (block.squaredNorm() < static_cast<double>(s0) * lambda * lambda) block.setZero();
    }
    return out;
}

} // namespace

Outcome operator_properties(const Options&)
{
    const auto start = Clock::now();
    Rng rng(kOperatorSeed, Rng::Stream::Test);
    long shrinkage = 0, preservation = 0, magnitude = 0, idempotence = 0, monotonicity = 0, homogeneity = 0;
    const double scales[] = {1e-3, 1.0, 1e3};
    const double factors[] = {0.5, 2.0, 3.0, 1e-3, 7.25, 1e3};

    for (int c = 0; c < kOperatorCases; ++c) {
        std::vector<Index> sizes(1 + rng.below(8));
        for (auto& size : sizes) size = 1 + static_cast<Index>(rng.below(6));
        const auto groups = build_groups(sizes);
        const Index s0 = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(groups.d())));
        const double scale = scales[rng.below(3)];
        Vector v(groups.p());
        for (Index i = 0; i < v.size(); ++i) v(i) = rng.uniform() < 0.2 ? 0.0 : scale * rng.normal();
        const double largest = v.cwiseAbs().maxCoeff();

        double lambda = rng.uniform() * 1.2 * largest;
        const double mode = rng.uniform();
        if (mode < 0.1) {
            lambda = 0.0;
        } else if (mode < 0.3 && largest > 0.0) {
            Index k = static_cast<Index>(rng.below(static_cast<std::uint64_t>(v.size())));
            while (v(k) == 0.0) k = (k + 1) % v.size();
            lambda = std::abs(v(k));  // exact tie
        }

        const Vector out = double_sparse_threshold(v, {lambda, s0}, groups).values();
        const Vector element = hard_threshold_elementwise(v, lambda);
        for (Index i = 0; i < v.size(); ++i) {
            if (out(i) != 0.0 && v(i) == 0.0) ++shrinkage;
            if (out(i) != 0.0 && out(i) != v(i)) ++preservation;
            if (out(i) != 0.0 && std::abs(v(i)) < lambda) ++magnitude;
        }
        for (Index j = 0; j < groups.m(); ++j) {
            const bool kept = out.segment(groups.offset(j), groups.size(j)).cwiseAbs().maxCoeff() > 0.0;
            const double norm2 = element.segment(groups.offset(j), groups.size(j)).squaredNorm();
            if (kept && norm2 < static_cast<double>(s0) * lambda * lambda) ++magnitude;
        }
        if (out != reference_threshold(v, lambda, s0, groups)) ++preservation;

        if (double_sparse_threshold(out, {lambda, s0}, groups).values() != out) ++idempotence;

        const double higher = lambda + rng.uniform() * 0.5 * std::max(largest, 1e-300);
        const Vector coarse = double_sparse_threshold(v, {higher, s0}, groups).values();
        for (Index i = 0; i < v.size(); ++i) {
            if (coarse(i) != 0.0 && out(i) == 0.0) {
                ++monotonicity;
                break;
            }
        }

        const double factor = factors[rng.below(6)];
        const Vector scaled = double_sparse_threshold(factor * v, {factor * lambda, s0}, groups).values();
        const Vector expected = factor * out;
        const double denom = expected.cwiseAbs().maxCoeff();
        const double diff = (scaled - expected).cwiseAbs().maxCoeff();
        bool same_support = true;
        for (Index i = 0; i < v.size(); ++i) same_support = same_support && ((scaled(i) != 0.0) == (out(i) != 0.0));
        if (!same_support || diff > kHomogeneityTolerance * denom) ++homogeneity;
    }

    Outcome outcome;
    outcome.id = 1;
    outcome.name = "operator property suite";
    outcome.seconds = seconds_since(start);
    const long total = shrinkage + preservation + magnitude + idempotence + monotonicity + homogeneity;
    outcome.passed = total == 0 && outcome.seconds < kOperatorBudgetSeconds;
    outcome.measured = printf_string(
        "%d cases; violations: shrinkage %ld, value preservation %ld, magnitude %ld, idempotence %ld, "
        "monotonicity %ld, homogeneity %ld (need 0); runtime %.2f s (< %.0f s)",
        kOperatorCases, shrinkage, preservation, magnitude, idempotence, monotonicity, homogeneity, outcome.seconds,
        kOperatorBudgetSeconds);
    return outcome;
}

Outcome oracle_equivalence(const Options& options)
{
    const auto start = Clock::now();
    ExperimentScenario scenario;
    scenario.id = "oracle";
    scenario.n = 60;
    scenario.m = 5;
    scenario.d = 4;
    scenario.s = 2;
    scenario.s0 = 2;
    scenario.snr = 50.0;
    scenario.replications = kOracleSeeds;
    scenario.base_seed = kOracleBaseSeed;

    std::vector<char> match(kOracleSeeds, 0);
    parallel_for(kOracleSeeds, options.workers, [&](std::size_t r) {
        const auto replication = make_replication(scenario, static_cast<int>(r));
        const auto fit = adsiht_fit(replication.data, replication.groups, std::nullopt, SolverConfig::practical());
        const auto oracle = best_subset_oracle(replication.data, replication.groups, ShapeSpec{scenario.s, scenario.s0});
        match[r] = fit.best.coefficients.support() == oracle.support ? 1 : 0;
    });
    const int matches = static_cast<int>(std::count(match.begin(), match.end(), 1));

    Outcome outcome;
    outcome.id = 2;
    outcome.name = "oracle equivalence";
    outcome.seconds = seconds_since(start);
    outcome.passed = matches >= kOracleRequiredMatches && outcome.seconds < kOracleBudgetSeconds;
    outcome.measured = printf_string("ADSIHT support equals best-subset support in %d/%d seeds (need >= %d); "
                                     "runtime %.1f s (< %.0f s)",
                                     matches, kOracleSeeds, kOracleRequiredMatches, outcome.seconds,
                                     kOracleBudgetSeconds);
    return outcome;
}

Outcome table_replication(const Options& options)
{
    const auto start = Clock::now();
    const auto result = run_experiment(table_scenario(), SolverConfig::practical(), experiment_options(options));
    const auto& a = result.aggregate;

    Outcome outcome;
    outcome.id = 3;
    outcome.name = "table replication (n=500, s0=5)";
    outcome.seconds = seconds_since(start);
    outcome.passed = a.failed == 0 && a.mcc.mean >= kTableMinMcc && a.ee.mean <= kTableMaxEe
                     && std::abs(a.se.mean) <= kTableMaxAbsSe && std::abs(a.gse.mean) <= kTableMaxAbsGse
                     && outcome.seconds < kTableBudgetSeconds;
    outcome.measured = printf_string(
        "mean MCC %.3f (>= %.2f), mean EE %.3f (<= %.2f), mean SE %.2f (|.| <= %.1f), mean GSE %.2f (|.| <= %.0f), "
        "%d failed fits; runtime %.1f s (< %.0f s)",
        a.mcc.mean, kTableMinMcc, a.ee.mean, kTableMaxEe, a.se.mean, kTableMaxAbsSe, a.gse.mean, kTableMaxAbsGse,
        a.failed, outcome.seconds, kTableBudgetSeconds);
    return outcome;
}

Outcome minimax_rate(const Options& options)
{
    const auto start = Clock::now();
    std::vector<double> ee;
    int failed = 0;
    for (const Index n : kRateSizes) {
        auto scenario = table_scenario(n);
        scenario.id = "rate-n" + std::to_string(n);
        scenario.base_seed = kRateBaseSeed;
        const auto result = run_experiment(scenario, SolverConfig::practical(), experiment_options(options));
        ee.push_back(result.aggregate.ee.mean);
        failed += result.aggregate.failed;
    }
    const double first = ee[0] / ee[1];
    const double second = ee[1] / ee[2];

    Outcome outcome;
    outcome.id = 4;
    outcome.name = "minimax rate";
    outcome.seconds = seconds_since(start);
    const auto inside = [](double ratio) { return ratio >= kRateLow && ratio <= kRateHigh; };
    outcome.passed = failed == 0 && inside(first) && inside(second) && outcome.seconds < kRateBudgetSeconds;
    outcome.measured = printf_string("mean EE at n=400/800/1600: %.4f/%.4f/%.4f; ratios %.3f and %.3f "
                                     "(need [%.2f, %.2f]); runtime %.1f s (< %.0f s)",
                                     ee[0], ee[1], ee[2], first, second, kRateLow, kRateHigh, outcome.seconds,
                                     kRateBudgetSeconds);
    return outcome;
}

Outcome scale_equivariance(const Options& options)
{
    const auto start = Clock::now();
    std::vector<int> bad(kEquivarianceInstances, 0);
    std::vector<double> worst(kEquivarianceInstances, 0.0);
    parallel_for(kEquivarianceInstances, options.workers, [&](std::size_t i) {
        const int k = static_cast<int>(i);
        ExperimentScenario scenario;
        scenario.id = "equivariance";
        scenario.n = 60 + 20 * (k % 5);
        scenario.m = 6 + k % 5;
        scenario.d = 3 + k % 3;
        scenario.s = 2;
        scenario.s0 = 2;
        scenario.rho = 0.3 + 0.1 * (k % 4);
        scenario.snr = 1.0 + k % 6;
        scenario.base_seed = kEquivarianceBaseSeed + static_cast<std::uint64_t>(k);
        const auto replication = make_replication(scenario, 0);
        const auto config = SolverConfig::practical();
        const auto base = adsiht_fit(replication.data, replication.groups, std::nullopt, config);
        for (const double c : kEquivarianceScales) {
            Dataset scaled = replication.data;
            scaled.response *= c;
            const auto fit = adsiht_fit(scaled, replication.groups, std::nullopt, config);
            const Vector expected = c * base.best.coefficients.values();
            const double diff = (fit.best.coefficients.values() - expected).cwiseAbs().maxCoeff();
            const double scale = expected.cwiseAbs().maxCoeff();
            const double relative = scale > 0.0 ? diff / scale : (diff > 0.0 ? INFINITY : 0.0);
            worst[i] = std::max(worst[i], relative);
            bool same = relative <= kEquivarianceTolerance
                        && fit.best.coefficients.support() == base.best.coefficients.support()
                        && fit.best.s0_used == base.best.s0_used
                        && fit.per_candidate.size() == base.per_candidate.size();
            for (std::size_t l = 0; same && l < fit.per_candidate.size(); ++l) {
                const auto& x = fit.per_candidate[l];
                const auto& y = base.per_candidate[l];
                same = x.phase_boundary == y.phase_boundary && x.horizon == y.horizon && x.selected == y.selected;
            }
            if (!same) ++bad[i];
        }
    });
    const int failures = std::accumulate(bad.begin(), bad.end(), 0);
    const double largest = *std::max_element(worst.begin(), worst.end());

    Outcome outcome;
    outcome.id = 5;
    outcome.name = "scale equivariance";
    outcome.seconds = seconds_since(start);
    outcome.passed = failures == 0;
    outcome.measured = printf_string("%d instances x 3 scales: %d mismatches in support, s0 or t_bar/T/t_tilde "
                                     "(need 0); worst relative coefficient error %.2e (<= %.0e)",
                                     kEquivarianceInstances, failures, largest, kEquivarianceTolerance);
    return outcome;
}

Outcome path_bound(const Options& options)
{
    const auto start = Clock::now();
    std::vector<char> ok(kTableReplications, 0);
    std::vector<double> worst(kTableReplications, 0.0);
    parallel_for(kTableReplications, options.workers, [&](std::size_t r) {
        const auto run = regime_run(static_cast<int>(r));
        const auto& truth = run.replication.truth_standardized.values();
        const double root = std::sqrt(static_cast<double>(run.replication.truth.l0()));
        bool holds = true;
        for (const auto& rec : run.fit.trace.records) {
            const double error = (rec.iterate.dense(truth.size()) - truth).norm();
            const double bound = kPathConstant * root * rec.applied_threshold;
            worst[r] = std::max(worst[r], error / bound);
            holds = holds && error <= bound;
        }
        ok[r] = holds ? 1 : 0;
    });
    const int passing = static_cast<int>(std::count(ok.begin(), ok.end(), 1));

    Outcome outcome;
    outcome.id = 6;
    outcome.name = "path bound";
    outcome.seconds = seconds_since(start);
    outcome.passed = passing >= required_count(kTableReplications);
    outcome.measured = printf_string("%d/%d replications keep ||beta_t - beta*|| <= %.1f sqrt(s s0) lambda_t on "
                                     "every iteration (need >= %d); worst ratio %.3f",
                                     passing, kTableReplications, kPathConstant, required_count(kTableReplications),
                                     *std::max_element(worst.begin(), worst.end()));
    return outcome;
}

Outcome linear_convergence(const Options& options)
{
    const auto start = Clock::now();
    std::vector<char> ok(kTableReplications, 0);
    std::vector<double> slack(kTableReplications, 0.0);
    const double kappa = SolverConfig::practical().kappa;
    parallel_for(kTableReplications, options.workers, [&](std::size_t r) {
        const auto run = regime_run(static_cast<int>(r));
        const auto& replication = run.replication;
        const double n = static_cast<double>(replication.data.n());
        const double p = static_cast<double>(replication.groups.p());
        const double signal = std::sqrt(n) * replication.truth_standardized.values().norm() / replication.sigma;
        const double inner = std::max(signal, std::sqrt(std::log(std::exp(1.0) * p)));
        const double bound = 2.0 * std::log(6.0 * inner) / std::log(1.0 / kappa) + 1.0;
        slack[r] = bound - run.fit.trace.horizon;
        ok[r] = run.fit.trace.horizon <= bound ? 1 : 0;
    });
    const int passing = static_cast<int>(std::count(ok.begin(), ok.end(), 1));

    Outcome outcome;
    outcome.id = 7;
    outcome.name = "linear convergence";
    outcome.seconds = seconds_since(start);
    outcome.passed = passing >= required_count(kTableReplications);
    outcome.measured = printf_string("%d/%d replications stop with T within the iteration bound (need >= %d); "
                                     "smallest margin %.1f iterations",
                                     passing, kTableReplications, required_count(kTableReplications),
                                     *std::min_element(slack.begin(), slack.end()));
    return outcome;
}

Outcome determinism(const Options&)
{
    const auto start = Clock::now();
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path()
                         / ("dsiht-determinism-" + std::to_string(Clock::now().time_since_epoch().count()));
    fs::create_directories(dir);
    const auto scenario = (dir / "scenario.json").string();
    io::write_file(scenario, R"({"id": "determinism", "n": 120, "m": 30, "d": 5, "s": 3, "s0": 2, "snr": 4,
 "replications": 6})");

    std::ostringstream sink;
    const auto run_once = [&](const std::string& out, const std::string& workers) {
        return cli::run({"dsiht", "simulate", "--scenario", scenario, "--out", out, "--seed",
                         std::to_string(kDeterminismSeed), "--workers", workers},
                        sink, sink);
    };
    const auto first = (dir / "first.csv").string();
    const auto second = (dir / "second.csv").string();
    const int code_first = run_once(first, "1");
    const int code_second = run_once(second, "2");
    std::string a, b;
    if (code_first == 0 && code_second == 0) {
        a = io::read_file(first);
        b = io::read_file(second);
    }
    std::error_code ignored;
    fs::remove_all(dir, ignored);

    Outcome outcome;
    outcome.id = 8;
    outcome.name = "determinism";
    outcome.seconds = seconds_since(start);
    outcome.passed = code_first == 0 && code_second == 0 && !a.empty() && a == b;
    outcome.measured = printf_string("two simulate runs with seed %llu (1 and 2 workers): exit codes %d/%d, "
                                     "%zu vs %zu bytes, %s",
                                     static_cast<unsigned long long>(kDeterminismSeed), code_first, code_second,
                                     a.size(), b.size(), a == b ? "byte-identical" : "different");
    return outcome;
}

std::vector<Outcome> run(const std::vector<int>& ids, const Options& options)
{
    using Check = Outcome (*)(const Options&);
    static constexpr Check checks[] = {operator_properties, oracle_equivalence, table_replication, minimax_rate,
                                       scale_equivariance,  path_bound,         linear_convergence, determinism};
    for (const int id : ids) {
        if (id < 1 || id > 8) throw std::invalid_argument("acceptance criteria are numbered 1 to 8, got " + std::to_string(id));
    }
    std::vector<Outcome> out;
    for (int id = 1; id <= 8; ++id) {
        if (!ids.empty() && std::find(ids.begin(), ids.end(), id) == ids.end()) continue;
        out.push_back(checks[id - 1](options));
    }
    return out;
}

std::string format(const Outcome& outcome)
{
    return std::string(outcome.passed ? "[PASS] " : "[FAIL] ") + std::to_string(outcome.id) + " " + outcome.name
           + ": " + outcome.measured;
}

} // namespace dsiht::acceptance
