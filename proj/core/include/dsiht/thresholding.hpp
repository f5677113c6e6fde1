#pragma once

#include <dsiht/core.hpp>

namespace dsiht {

struct ThresholdParams
{
    double lambda = 0.0;  // element threshold, coefficient units
    Index s0 = 1;         // within-group sparsity scale
};

/// Keeps v_i when |v_i| >= lambda, zeroes it otherwise.
Vector hard_threshold_elementwise(const Vector& v, double lambda);

/// Keeps whole groups with ||v_G||^2 >= s0 * lambda^2, zeroes the rest.
Vector hard_threshold_groupwise(const Vector& v, const ThresholdParams& params, const GroupStructure& groups);

/**
 * Double sparse hard thresholding: the element-wise step followed by the
 * group-wise step, where group norms are taken on the element-thresholded
 * vector. Both comparisons keep ties. Survivors are copied unchanged.
 */
SparseCoefficients double_sparse_threshold(const Vector& v, const ThresholdParams& params,
                                           const GroupStructure& groups);

} // namespace dsiht
