#include <dsiht/thresholding.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

namespace dsiht {
namespace {

void check_params(const ThresholdParams& params, const GroupStructure& groups)
{
    if (!(params.lambda >= 0.0)) {
        throw std::invalid_argument("threshold lambda must be non-negative");
    }
    if (params.s0 < 1 || params.s0 > groups.d()) {
        throw std::invalid_argument("s0 = " + std::to_string(params.s0) + " outside [1, "
                                    + std::to_string(groups.d()) + "]");
    }
}

void check_dimension(const Vector& v, const GroupStructure& groups)
{
    if (v.size() != groups.p()) {
        throw std::invalid_argument("vector length " + std::to_string(v.size()) + " does not match p = "
                                    + std::to_string(groups.p()));
    }
}

// In-place group step on an already element-thresholded vector.
void zero_small_groups(Vector& v, const ThresholdParams& params, const GroupStructure& groups)
{
    const double cutoff = static_cast<double>(params.s0) * params.lambda * params.lambda;
    for (Index j = 0; j < groups.m(); ++j) {
        auto block = v.segment(groups.offset(j), groups.size(j));
        if (!(block.squaredNorm() >= cutoff)) block.setZero();
    }
}

} // namespace

Vector hard_threshold_elementwise(const Vector& v, double lambda)
{
    if (!(lambda >= 0.0)) throw std::invalid_argument("threshold lambda must be non-negative");
    Vector out = v;
    for (Index i = 0; i < out.size(); ++i) {
        if (!(std::abs(out(i)) >= lambda)) out(i) = 0.0;
    }
    return out;
}

Vector hard_threshold_groupwise(const Vector& v, const ThresholdParams& params, const GroupStructure& groups)
{
    check_dimension(v, groups);
    check_params(params, groups);
    Vector out = v;
    zero_small_groups(out, params, groups);
    return out;
}

SparseCoefficients double_sparse_threshold(const Vector& v, const ThresholdParams& params,
                                           const GroupStructure& groups)
{
    check_dimension(v, groups);
    check_params(params, groups);
    Vector out = hard_threshold_elementwise(v, params.lambda);
    zero_small_groups(out, params, groups);
    return SparseCoefficients(std::move(out), groups);
}

} // namespace dsiht
