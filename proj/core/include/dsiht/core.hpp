#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include <dsiht/errors.hpp>

namespace dsiht {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/**
 * Partition of the predictor indices 0..p-1 into m contiguous,
 * non-overlapping groups. Group j occupies [offset(j), offset(j) + size(j)).
 *
 * Instances are immutable; build them with build_groups().
 */
class GroupStructure
{
public:
    Index m() const noexcept { return static_cast<Index>(sizes_.size()); }
    Index d() const noexcept { return max_size_; }
    Index p() const noexcept { return static_cast<Index>(group_of_.size()); }

    const std::vector<Index>& sizes() const noexcept { return sizes_; }
    const std::vector<Index>& offsets() const noexcept { return offsets_; }

    Index size(Index j) const { return sizes_[static_cast<std::size_t>(j)]; }
    Index offset(Index j) const { return offsets_[static_cast<std::size_t>(j)]; }
    Index group_of(Index i) const { return group_of_[static_cast<std::size_t>(i)]; }

    bool operator==(const GroupStructure&) const = default;

private:
    friend GroupStructure build_groups(std::span<const Index> group_sizes);
    GroupStructure() = default;

    std::vector<Index> sizes_;
    std::vector<Index> offsets_;
    std::vector<Index> group_of_;
    Index max_size_ = 0;
};

/// Throws std::invalid_argument on an empty list or a non-positive size.
GroupStructure build_groups(std::span<const Index> group_sizes);

inline GroupStructure build_groups(std::initializer_list<Index> group_sizes)
{
    return build_groups(std::span<const Index>(group_sizes.begin(), group_sizes.size()));
}

/// m groups of equal size d.
GroupStructure equal_groups(Index m, Index d);

/**
 * Group structure plus the column order that makes the groups contiguous.
 * column_order[k] is the original column placed at contiguous position k.
 * For the {"sizes": [...]} form it is the identity.
 */
struct GroupLayout
{
    GroupStructure groups;
    std::vector<Index> column_order;

    bool is_identity() const;
};

/// Group layout from one group label per column. Groups are ordered by label
/// and columns keep their relative order within a group.
GroupLayout layout_from_membership(std::span<const long long> membership);

GroupLayout layout_from_sizes(std::span<const Index> group_sizes);

/// Reorders the columns of a raw design into contiguous group order.
Matrix permute_columns(const Matrix& raw, const GroupLayout& layout);

/// Maps a vector in contiguous order back to the original column order.
Vector restore_order(const Vector& contiguous, const GroupLayout& layout);

/**
 * Coefficient vector with exact support bookkeeping.
 *
 * support() is { i : values_i != 0 } and group_support() is the set of groups
 * touching it, both sorted. They are recomputed from the values on
 * construction and cannot drift since the type is immutable.
 */
class SparseCoefficients
{
public:
    SparseCoefficients(Vector values, const GroupStructure& groups);

    static SparseCoefficients zeros(const GroupStructure& groups);

    const Vector& values() const noexcept { return values_; }
    const std::vector<Index>& support() const noexcept { return support_; }
    const std::vector<Index>& group_support() const noexcept { return group_support_; }

    Index size() const noexcept { return values_.size(); }
    Index l0() const noexcept { return static_cast<Index>(support_.size()); }
    Index l0_groups() const noexcept { return static_cast<Index>(group_support_.size()); }

    bool operator==(const SparseCoefficients& other) const
    {
        return support_ == other.support_ && values_ == other.values_;
    }

private:
    Vector values_;
    std::vector<Index> support_;
    std::vector<Index> group_support_;
};

/**
 * Column-standardized regression data: every column of design() has
 * Euclidean norm sqrt(n). column_scales()[j] is the factor c_j with
 * standardized column = c_j * (raw column - mean_j).
 */
struct Dataset
{
    Matrix design;
    Vector response;
    Vector column_scales;
    Vector column_means;    // zero unless centered
    double response_mean = 0.0;
    bool centered = false;

    Index n() const noexcept { return design.rows(); }
    Index p() const noexcept { return design.cols(); }
};

struct StandardizeOptions
{
    /// Subtract column and response means before scaling. Off by default;
    /// the simulated model has no intercept.
    bool center = false;
};

/// Throws DegenerateColumnError naming the first all-zero (post-centering) column.
Dataset standardize(const Matrix& raw_design, const Vector& response, StandardizeOptions options = {});

/// Maps standardized-scale coefficients to the raw design scale (beta_j * c_j).
Vector to_original_scale(const Vector& standardized, const Dataset& data);

/// ||beta||_G = max(||beta||_{0,2}, ||beta||_0 / s0). May be fractional.
double double_sparse_norm(const SparseCoefficients& beta, Index s0);
double double_sparse_norm(Index groups_nonzero, Index elements_nonzero, Index s0);

/**
 * Sparse group complexity
 *   Omega(beta) = g log(e m / g) + s0 g log(e d / s0),  g = ||beta||_G,
 * with Omega(0) = 0. Throws InvalidStateError when g > m.
 */
double omega(const SparseCoefficients& beta, Index s0, Index m, Index d);
double omega_from_norm(double group_norm, Index s0, Index m, Index d);

/// Same formula without the g <= m check. Dense iterates with small s0 can
/// reach g = ||beta||_0 / s0 > m; the expression stays positive and
/// increasing there, so the stopping criterion uses it as is.
double omega_extended(double group_norm, Index s0, Index m, Index d);

struct DeltaConstants
{
    std::optional<double> delta;   // (1/s0) log(e m / s) + log(e d / s0), needs s
    double delta_prime = 0.0;      // (1/s0) log(e m) + log(e d / s0)
};

DeltaConstants delta_constants(std::optional<Index> s, Index s0, Index m, Index d);

} // namespace dsiht
