#pragma once

#include <functional>
#include <span>
#include <vector>

#include <dsiht/core.hpp>

namespace dsiht {

/// Supports with at most `s` nonempty groups and at most s * s0 elements.
struct ShapeSpec
{
    Index s = 1;
    Index s0 = 1;

    Index budget() const noexcept { return s * s0; }
    /// Throws std::invalid_argument unless 0 <= s <= m and 1 <= s0 <= d.
    void validate(const GroupStructure& groups) const;
    bool admits(std::span<const Index> support, const GroupStructure& groups) const;
};

inline constexpr double kEnumerationLimit = 1e7;

/// Exact number of supports in the shape family (as a double; may be huge).
double count_supports(const GroupStructure& groups, const ShapeSpec& shape);

/**
 * Visits every shape-feasible support exactly once, in lexicographic order
 * of the sorted index sequences (a prefix precedes its extensions, so the
 * empty set comes first). Throws EnumerationTooLarge when the family has
 * more than kEnumerationLimit members.
 */
void for_each_support(const GroupStructure& groups, const ShapeSpec& shape,
                      const std::function<void(std::span<const Index>)>& visit);

std::vector<std::vector<Index>> enumerate_supports(const GroupStructure& groups, const ShapeSpec& shape);

/// True when no index can be added without leaving the shape family.
bool is_maximal_support(std::span<const Index> support, const GroupStructure& groups, const ShapeSpec& shape);

struct BestSubset
{
    SparseCoefficients coefficients;
    std::vector<Index> support;
    double rss = 0.0;
};

/**
 * Exhaustive best subset regression over the shape family. Each candidate
 * is fitted by Householder QR of X_S. The lexicographically first support
 * attaining the minimal RSS wins.
 */
BestSubset best_subset_oracle(const Dataset& data, const GroupStructure& groups, const ShapeSpec& shape);

struct DsripConstants
{
    double lower = 0.0;  // min over supports of lambda_min(X_S^T X_S)
    double upper = 0.0;  // max over supports of lambda_max(X_S^T X_S)
    double ratio = 0.0;  // 1 - lower / upper
};

/// Extreme restricted eigenvalues over the shape family. Only maximal
/// supports are examined; by eigenvalue interlacing they attain both extremes.
DsripConstants dsrip_constants(const Dataset& data, const GroupStructure& groups, const ShapeSpec& shape);

} // namespace dsiht
