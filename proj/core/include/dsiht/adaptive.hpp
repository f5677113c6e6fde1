#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include <dsiht/solver.hpp>

namespace dsiht {

enum class IcKind
{
    SparseGroupCriterion,  // C at the selected iterate, evaluated with the candidate's own s0
    Ebic,
};

std::string_view to_string(IcKind kind);
/// Accepts "sgc" and "ebic". Throws std::invalid_argument otherwise.
IcKind parse_ic_kind(std::string_view text);

struct CandidateSummary
{
    Index s0 = 1;
    double ic_value = 0.0;
    bool interpolating = false;  // EBIC of a zero-residual fit
    int phase_boundary = 0;
    int horizon = 0;
    int selected = 0;
    Index support_size = 0;
    Index group_support_size = 0;
    double sigma_bar = 0.0;
    double rss = 0.0;
    bool truncated = false;

    bool operator==(const CandidateSummary&) const = default;
};

struct AdaptiveResult
{
    FitResult best;
    std::vector<CandidateSummary> per_candidate;
    IcKind ic_kind = IcKind::SparseGroupCriterion;
    std::size_t best_index = 0;
};

struct AdaptiveOptions
{
    IcKind ic_kind = IcKind::SparseGroupCriterion;
    double ebic_gamma = 1.0;
    unsigned workers = 1;  // 0 = all cores
};

/// 1..d when d <= 20; otherwise powers of two below d followed by d.
std::vector<Index> default_s0_grid(Index d);

/**
 * Runs dsiht_fit for every s0 in the grid (config.s0 is overridden) and
 * keeps the candidate with the smallest information criterion. Ties go to
 * the smaller s0. Candidates are independent and may run concurrently;
 * results are merged in grid order.
 */
AdaptiveResult adsiht_fit(const Dataset& data, const GroupStructure& groups,
                          const std::optional<std::vector<Index>>& s0_grid, const SolverConfig& config,
                          const AdaptiveOptions& options = {});

struct EbicValue
{
    double value = 0.0;
    bool interpolating = false;  // RSS == 0; value is -infinity
};

/// n log(RSS/n) + k log n + 2 gamma log C(p, k), k = ||beta||_0.
EbicValue ebic(const FitResult& fit, const Dataset& data, const GroupStructure& groups, double gamma = 1.0);
double ebic_value(double rss, Index n, Index p, Index k, double gamma);

} // namespace dsiht
