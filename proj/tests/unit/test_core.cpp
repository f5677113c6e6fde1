#include <gtest/gtest.h>

#include <cmath>

#include <dsiht/core.hpp>
#include <dsiht/rng.hpp>

using namespace dsiht;

TEST(BuildGroups, EqualSizes)
{
    const auto g = build_groups({3, 3, 3});
    EXPECT_EQ(g.m(), 3);
    EXPECT_EQ(g.d(), 3);
    EXPECT_EQ(g.p(), 9);
    EXPECT_EQ(g.offsets(), (std::vector<Index>{0, 3, 6}));
}

TEST(BuildGroups, SingletonsReduceToElementwise)
{
    const auto g = build_groups({1, 1, 1, 1});
    EXPECT_EQ(g.m(), 4);
    EXPECT_EQ(g.d(), 1);
    EXPECT_EQ(g.p(), 4);
}

TEST(BuildGroups, UnevenSizes)
{
    const auto g = build_groups({2, 5, 1});
    EXPECT_EQ(g.m(), 3);
    EXPECT_EQ(g.d(), 5);
    EXPECT_EQ(g.p(), 8);
    EXPECT_EQ(g.offsets(), (std::vector<Index>{0, 2, 7}));
    EXPECT_EQ(g.group_of(1), 0);
    EXPECT_EQ(g.group_of(2), 1);
    EXPECT_EQ(g.group_of(7), 2);
}

TEST(BuildGroups, RejectsBadSizes)
{
    EXPECT_THROW(build_groups(std::vector<Index>{}), std::invalid_argument);
    EXPECT_THROW(build_groups({2, 0}), std::invalid_argument);
    EXPECT_THROW(build_groups({-1}), std::invalid_argument);
}

TEST(GroupLayout, MembershipPermutesIntoLabelOrder)
{
    const std::vector<long long> membership{7, 3, 7, 3, 5};
    const auto layout = layout_from_membership(membership);
    EXPECT_EQ(layout.groups.sizes(), (std::vector<Index>{2, 1, 2}));
    EXPECT_EQ(layout.column_order, (std::vector<Index>{1, 3, 4, 0, 2}));
    EXPECT_FALSE(layout.is_identity());

    Matrix raw(1, 5);
    raw << 10, 11, 12, 13, 14;
    const Matrix permuted = permute_columns(raw, layout);
    EXPECT_EQ(permuted(0, 0), 11);
    EXPECT_EQ(permuted(0, 3), 10);
    const Vector back = restore_order(permuted.row(0).transpose(), layout);
    EXPECT_EQ(back, raw.row(0).transpose());
}

TEST(GroupLayout, SizesAreIdentity)
{
    const std::vector<Index> sizes{2, 3};
    EXPECT_TRUE(layout_from_sizes(sizes).is_identity());
}

TEST(SparseCoefficients, SupportMatchesValues)
{
    const auto g = build_groups({2, 2, 2});
    Vector v(6);
    v << 0, 1.5, 0, 0, -2, 0;
    const SparseCoefficients beta(v, g);
    EXPECT_EQ(beta.support(), (std::vector<Index>{1, 4}));
    EXPECT_EQ(beta.group_support(), (std::vector<Index>{0, 2}));
    EXPECT_EQ(beta.l0(), 2);
    EXPECT_EQ(beta.l0_groups(), 2);
    EXPECT_EQ(SparseCoefficients::zeros(g).l0(), 0);
}

TEST(SparseCoefficients, RejectsWrongLength)
{
    EXPECT_THROW(SparseCoefficients(Vector::Zero(3), build_groups({2, 2})), std::invalid_argument);
}

TEST(Standardize, ScalesToRootN)
{
    Matrix x(4, 3);
    x << 1, 2, 1,
         1, 0, 0,
         1, 0, 0,
         1, 0, 0;
    const Vector y = Vector::Ones(4);
    const auto data = standardize(x, y);
    EXPECT_DOUBLE_EQ(data.column_scales(0), 1.0);
    EXPECT_DOUBLE_EQ(data.column_scales(1), 1.0);
    EXPECT_DOUBLE_EQ(data.column_scales(2), 2.0);
    EXPECT_DOUBLE_EQ(data.design(0, 2), 2.0);
    EXPECT_EQ(data.response, y);
}

TEST(Standardize, DegenerateColumnNamesIndex)
{
    Matrix x = Matrix::Ones(3, 3);
    x.col(1).setZero();
    try {
        standardize(x, Vector::Ones(3));
        FAIL() << "expected DegenerateColumnError";
    } catch (const DegenerateColumnError& error) {
        EXPECT_EQ(error.column(), 1);
    }
}

TEST(Standardize, RoundTripsRawDesign)
{
    Rng rng(11);
    Matrix x(30, 7);
    for (Index i = 0; i < x.size(); ++i) x.data()[i] = 3.0 * rng.normal() + 0.5;
    const auto data = standardize(x, Vector::Ones(30));
    for (Index j = 0; j < x.cols(); ++j) {
        EXPECT_NEAR(data.design.col(j).norm(), std::sqrt(30.0), 1e-10 * std::sqrt(30.0));
        EXPECT_GT(data.column_scales(j), 0.0);
        const Vector back = data.design.col(j) / data.column_scales(j);
        EXPECT_LE((back - x.col(j)).norm(), 1e-12 * x.col(j).norm());
    }
}

TEST(Standardize, CenteringRemovesMeans)
{
    Matrix x(3, 1);
    x << 1, 2, 6;
    Vector y(3);
    y << 1, 1, 4;
    const auto data = standardize(x, y, {true});
    EXPECT_TRUE(data.centered);
    EXPECT_NEAR(data.design.col(0).sum(), 0.0, 1e-12);
    EXPECT_NEAR(data.response.sum(), 0.0, 1e-12);
    EXPECT_DOUBLE_EQ(data.column_means(0), 3.0);
    EXPECT_DOUBLE_EQ(data.response_mean, 2.0);
}

TEST(DoubleSparseNorm, Examples)
{
    const auto g = build_groups({3, 3, 3});
    EXPECT_EQ(double_sparse_norm(SparseCoefficients::zeros(g), 2), 0.0);
    EXPECT_DOUBLE_EQ(double_sparse_norm(2, 5, 2), 2.5);
    EXPECT_DOUBLE_EQ(double_sparse_norm(3, 3, 2), 3.0);
}

TEST(DoubleSparseNorm, MonotoneUnderAddingEntries)
{
    const auto g = build_groups({3, 3, 3, 3});
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        Vector v = Vector::Zero(g.p());
        const Index s0 = 1 + static_cast<Index>(rng.below(3));
        double previous = 0.0;
        for (int k = 0; k < 8; ++k) {
            v(static_cast<Index>(rng.below(12))) = 1.0;
            const double now = double_sparse_norm(SparseCoefficients(v, g), s0);
            EXPECT_GE(now, previous);
            previous = now;
        }
    }
}

TEST(Omega, FrozenValues)
{
    const auto g = build_groups({5, 5, 5, 5, 5, 5, 5, 5, 5, 5});
    EXPECT_EQ(omega(SparseCoefficients::zeros(g), 1, 10, 5), 0.0);
    EXPECT_NEAR(omega_from_norm(1.0, 1, 10, 5), 5.912023005428146, 1e-12);
    EXPECT_NEAR(omega_from_norm(4.0, 5, 250, 20), 68.26655344936724, 1e-11);
    EXPECT_NEAR(omega_from_norm(2.5, 2, 10, 4), 14.43147180559945, 1e-12);
}

TEST(Omega, NormAboveMIsInvalidState)
{
    EXPECT_THROW(omega_from_norm(11.0, 1, 10, 5), InvalidStateError);
    EXPECT_NO_THROW(omega_extended(11.0, 1, 10, 5));
}

TEST(Omega, MonotoneUpToMOverE)
{
    const Index m = 40;
    double previous = 0.0;
    for (double g = 0.25; g <= static_cast<double>(m) / std::exp(1.0); g += 0.25) {
        const double now = omega_from_norm(g, 3, m, 6);
        EXPECT_GE(now, previous);
        EXPECT_GE(now, 0.0);
        previous = now;
    }
}

TEST(DeltaConstants, FrozenValues)
{
    EXPECT_NEAR(delta_constants(std::nullopt, 5, 250, 20).delta_prime, 3.690586544692340, 1e-12);
    const auto c = delta_constants(1, 1, 10, 5);
    EXPECT_NEAR(*c.delta, 5.912023005428146, 1e-12);
    EXPECT_DOUBLE_EQ(*c.delta, c.delta_prime);
    EXPECT_FALSE(delta_constants(std::nullopt, 2, 4, 3).delta.has_value());
}

TEST(DeltaConstants, FullShapeCollapses)
{
    const auto c = delta_constants(6, 3, 6, 3);
    EXPECT_NEAR(*c.delta, 1.0 / 3.0 + 1.0, 1e-14);
}

TEST(DeltaConstants, DeltaBelowDeltaPrime)
{
    for (Index s = 1; s <= 12; ++s) {
        const auto c = delta_constants(s, 2, 12, 4);
        if (s == 1) EXPECT_DOUBLE_EQ(*c.delta, c.delta_prime);
        else EXPECT_LT(*c.delta, c.delta_prime);
    }
}

TEST(DeltaConstants, RangeChecks)
{
    EXPECT_THROW(delta_constants(std::nullopt, 0, 10, 5), std::invalid_argument);
    EXPECT_THROW(delta_constants(std::nullopt, 6, 10, 5), std::invalid_argument);
    EXPECT_THROW(delta_constants(11, 1, 10, 5), std::invalid_argument);
    EXPECT_THROW(delta_constants(0, 1, 10, 5), std::invalid_argument);
}
