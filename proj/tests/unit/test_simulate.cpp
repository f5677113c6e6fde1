#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include <dsiht/simulate.hpp>

using namespace dsiht;

namespace {

double correlation(const Vector& a, const Vector& b)
{
    const Vector ca = a.array() - a.mean();
    const Vector cb = b.array() - b.mean();
    return ca.dot(cb) / (ca.norm() * cb.norm());
}

SparseCoefficients unit_vector(const GroupStructure& g, std::initializer_list<Index> where)
{
    Vector v = Vector::Zero(g.p());
    for (const Index j : where) v(j) = 1.0;
    return SparseCoefficients(v, g);
}

} // namespace

TEST(GenDesign, Ar1Correlations)
{
    const Matrix x = gen_design(20000, 1, 3, 0.5, 17);
    EXPECT_NEAR(correlation(x.col(0), x.col(1)), 0.5, 0.02);
    EXPECT_NEAR(correlation(x.col(0), x.col(2)), 0.25, 0.02);
    EXPECT_NEAR(x.col(2).squaredNorm() / 20000.0, 1.0, 0.05);
}

TEST(GenDesign, IndependentAtRhoZero)
{
    const Matrix x = gen_design(20000, 3, 1, 0.0, 18);
    EXPECT_NEAR(correlation(x.col(0), x.col(1)), 0.0, 0.02);
    EXPECT_NEAR(correlation(x.col(1), x.col(2)), 0.0, 0.02);
}

TEST(GenDesign, Deterministic)
{
    EXPECT_EQ(gen_design(10, 2, 3, 0.5, 19), gen_design(10, 2, 3, 0.5, 19));
    EXPECT_NE(gen_design(10, 2, 3, 0.5, 19), gen_design(10, 2, 3, 0.5, 20));
}

TEST(GenCoefficients, SparsityPattern)
{
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto beta = gen_coefficients(12, 5, 3, 2, Signal::Homogeneous, seed);
        EXPECT_EQ(beta.l0_groups(), 3);
        EXPECT_EQ(beta.l0(), 6);
        for (const Index j : beta.support()) EXPECT_EQ(std::abs(beta.values()(j)), 1.0);
    }
}

TEST(GenCoefficients, SaturatedCase)
{
    const auto beta = gen_coefficients(3, 4, 3, 4, Signal::Homogeneous, 5);
    EXPECT_EQ(beta.values().cwiseAbs(), Vector::Ones(12));
}

TEST(GenCoefficients, InfeasibleShape)
{
    EXPECT_THROW(gen_coefficients(3, 4, 4, 1, Signal::Homogeneous, 1), std::invalid_argument);
    EXPECT_THROW(gen_coefficients(3, 4, 1, 5, Signal::Homogeneous, 1), std::invalid_argument);
}

TEST(GenCoefficients, HeterogeneousMoments)
{
    std::vector<double> draws;
    for (std::uint64_t seed = 0; draws.size() < 100000; ++seed) {
        const auto beta = gen_coefficients(100, 10, 100, 10, Signal::Heterogeneous, seed);
        draws.insert(draws.end(), beta.values().data(), beta.values().data() + beta.values().size());
    }
    const double mean = std::accumulate(draws.begin(), draws.end(), 0.0) / static_cast<double>(draws.size());
    double var = 0.0;
    for (const double x : draws) var += (x - mean) * (x - mean);
    var /= static_cast<double>(draws.size() - 1);
    EXPECT_LT(std::abs(mean), 0.02);
    EXPECT_NEAR(var, 1.0, 0.02);
}

TEST(GenResponse, SigmaFromQuadraticForm)
{
    const auto g = build_groups({2, 2});
    const Matrix x = gen_design(10, 2, 2, 0.5, 3);
    EXPECT_DOUBLE_EQ(gen_response(x, unit_vector(g, {0}), 0.5, 4.0, 1).sigma, 0.5);
    EXPECT_DOUBLE_EQ(ar1_quadratic_form(unit_vector(g, {0, 1}), 0.5), 3.0);
    EXPECT_DOUBLE_EQ(gen_response(x, unit_vector(g, {0, 1}), 0.5, 3.0, 1).sigma, 1.0);
    EXPECT_DOUBLE_EQ(ar1_quadratic_form(unit_vector(g, {0, 3}), 0.5), 2.0 + 2.0 * 0.125);
}

TEST(GenResponse, NoiselessLimitAndZeroSignal)
{
    const auto g = build_groups({2, 2});
    const Matrix x = gen_design(10, 2, 2, 0.5, 3);
    const auto beta = unit_vector(g, {1});
    const auto draw = gen_response(x, beta, 0.5, 1e30, 2);
    EXPECT_LT(draw.sigma, 1e-14);
    EXPECT_LE((draw.response - x * beta.values()).norm(), 1e-12);
    EXPECT_THROW(gen_response(x, SparseCoefficients::zeros(g), 0.5, 1.0, 2), std::invalid_argument);
}

TEST(GenResponse, NoiseConcentrates)
{
    const auto g = build_groups({1, 1});
    const Matrix x = gen_design(10000, 2, 1, 0.5, 4);
    const auto beta = unit_vector(g, {0});
    int misses = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto draw = gen_response(x, beta, 0.5, 2.0, seed);
        const double ratio = (draw.response - x * beta.values()).squaredNorm() / 10000.0 / (draw.sigma * draw.sigma);
        if (std::abs(ratio - 1.0) > 0.05) ++misses;
    }
    EXPECT_LE(misses, 1);
}

TEST(Metrics, PerfectRecovery)
{
    const auto truth = gen_coefficients(5, 3, 2, 2, Signal::Heterogeneous, 8);
    const auto row = compute_metrics(truth, truth);
    EXPECT_EQ(row.se, 0);
    EXPECT_EQ(row.gse, 0);
    EXPECT_EQ(row.mcc, 1.0);
    EXPECT_EQ(row.ee, 0.0);
}

TEST(Metrics, MccExample)
{
    const auto g = build_groups(std::vector<Index>(10, 1));
    const auto row = compute_metrics(unit_vector(g, {1, 3}), unit_vector(g, {1, 2}));
    EXPECT_NEAR(row.mcc, 0.375, 1e-15);
    EXPECT_EQ(row.se, 0);
    EXPECT_NEAR(row.ee, std::sqrt(2.0), 1e-15);
}

TEST(Metrics, ExactMatchOnFullSupport)
{
    const auto g = build_groups({2});
    EXPECT_EQ(compute_metrics(unit_vector(g, {0, 1}), unit_vector(g, {0, 1})).mcc, 1.0);
    EXPECT_EQ(compute_metrics(SparseCoefficients::zeros(g), SparseCoefficients::zeros(g)).mcc, 1.0);
    EXPECT_EQ(compute_metrics(unit_vector(g, {0, 1}), unit_vector(g, {0})).mcc, 0.0);
}

TEST(Metrics, EmptyEstimate)
{
    const auto truth = gen_coefficients(5, 3, 2, 2, Signal::Homogeneous, 9);
    const auto row = compute_metrics(SparseCoefficients::zeros(build_groups({3, 3, 3, 3, 3})), truth);
    EXPECT_EQ(row.se, -4);
    EXPECT_EQ(row.gse, -2);
    EXPECT_EQ(row.mcc, 0.0);
    EXPECT_DOUBLE_EQ(row.ee, 2.0);
}

TEST(Metrics, MccRangeAndIdentity)
{
    const auto g = build_groups({4, 4, 4});
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto a = gen_coefficients(3, 4, 1 + seed % 3, 1 + seed % 4, Signal::Homogeneous, seed);
        const auto b = gen_coefficients(3, 4, 1 + (seed / 3) % 3, 1 + (seed / 4) % 4, Signal::Homogeneous, seed + 1000);
        const double mcc = compute_metrics(a, b).mcc;
        EXPECT_GE(mcc, -1.0);
        EXPECT_LE(mcc, 1.0);
        EXPECT_EQ(mcc == 1.0, a.support() == b.support());
    }
}

TEST(LowerBound, FrozenValueAndScaling)
{
    const double value = lower_bound_reference(2, 2, 4, 3, 100, 1.0, 1.0);
    EXPECT_NEAR(value, 3.5188104662314641e-4, 1e-17);
    EXPECT_DOUBLE_EQ(lower_bound_reference(2, 2, 4, 3, 200, 1.0, 1.0), value / 2.0);
    EXPECT_EQ(lower_bound_reference(2, 2, 4, 3, 100, 0.0, 1.0), 0.0);
}

TEST(Scenario, ValidationListsEveryField)
{
    ExperimentScenario sc;
    sc.n = 0;
    sc.m = 4;
    sc.d = 3;
    sc.s = 5;
    sc.s0 = 4;
    sc.rho = 1.0;
    sc.snr = -1.0;
    const auto bad = sc.invalid_fields();
    for (const char* field : {"n", "s", "s0", "rho", "snr"})
        EXPECT_NE(std::find(bad.begin(), bad.end(), field), bad.end()) << field;
    EXPECT_THROW(sc.validate(), std::invalid_argument);
}

TEST(Experiment, DeterministicAndAggregatesMatchRows)
{
    ExperimentScenario sc;
    sc.n = 120;
    sc.m = 20;
    sc.d = 3;
    sc.s = 2;
    sc.s0 = 2;
    sc.snr = 5.0;
    sc.replications = 4;
    sc.base_seed = 77;
    const auto a = run_experiment(sc, SolverConfig::practical());
    ExperimentOptions parallel;
    parallel.workers = 2;
    const auto b = run_experiment(sc, SolverConfig::practical(), parallel);
    ASSERT_EQ(a.rows.size(), 4u);
    for (std::size_t r = 0; r < a.rows.size(); ++r) {
        EXPECT_EQ(a.rows[r].rep, static_cast<int>(r));
        EXPECT_EQ(a.rows[r].ee, b.rows[r].ee);
        EXPECT_EQ(a.rows[r].mcc, b.rows[r].mcc);
    }

    double mean = 0.0;
    for (const auto& row : a.rows) mean += row.ee;
    mean /= 4.0;
    double ss = 0.0;
    for (const auto& row : a.rows) ss += (row.ee - mean) * (row.ee - mean);
    EXPECT_EQ(a.aggregate.succeeded, 4);
    EXPECT_DOUBLE_EQ(a.aggregate.ee.mean, mean);
    EXPECT_DOUBLE_EQ(a.aggregate.ee.sd, std::sqrt(ss / 3.0));
    EXPECT_EQ(aggregate_rows(a.rows).mcc.mean, a.aggregate.mcc.mean);
}

TEST(Experiment, SingleReplicationIsOneSeededFit)
{
    ExperimentScenario sc;
    sc.n = 100;
    sc.m = 10;
    sc.d = 3;
    sc.s = 2;
    sc.s0 = 2;
    sc.snr = 5.0;
    sc.base_seed = 5;
    ExperimentOptions forced;
    forced.forced_s0 = 2;
    const auto result = run_experiment(sc, SolverConfig::practical(), forced);
    const auto rep = make_replication(sc, 0);
    EXPECT_EQ(rep.seed, 5u);
    const auto fit = fit_replication(rep, SolverConfig::practical(), forced);
    const auto row = compute_metrics(fit.best.coefficients, rep.truth_standardized);
    ASSERT_EQ(result.rows.size(), 1u);
    EXPECT_EQ(result.rows[0].ee, row.ee);
    EXPECT_EQ(result.rows[0].s0_selected, 2);
}
