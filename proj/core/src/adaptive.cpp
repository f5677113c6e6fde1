#include <dsiht/adaptive.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <dsiht/parallel.hpp>

namespace dsiht {
namespace {

std::vector<Index> validated_grid(const std::optional<std::vector<Index>>& requested, Index d)
{
    std::vector<Index> grid;
    if (!requested) return default_s0_grid(d);
    for (const Index s0 : *requested) {
        if (s0 >= 1 && s0 <= d) grid.push_back(s0);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    if (grid.empty()) {
        throw std::invalid_argument("s0 grid has no entry in [1, " + std::to_string(d) + "]");
    }
    return grid;
}

CandidateSummary summarize(const FitResult& fit)
{
    CandidateSummary out;
    out.s0 = fit.s0_used;
    out.phase_boundary = fit.trace.phase_boundary;
    out.horizon = fit.trace.horizon;
    out.selected = fit.trace.selected;
    out.support_size = fit.coefficients.l0();
    out.group_support_size = fit.coefficients.l0_groups();
    out.sigma_bar = fit.sigma_bar;
    out.rss = fit.trace.records[static_cast<std::size_t>(fit.trace.selected)].rss;
    out.truncated = fit.trace.truncated;
    return out;
}

} // namespace

std::string_view to_string(IcKind kind)
{
    switch (kind) {
    case IcKind::SparseGroupCriterion: return "sgc";
    case IcKind::Ebic: return "ebic";
    }
    return "unknown";
}

IcKind parse_ic_kind(std::string_view text)
{
    if (text == "sgc") return IcKind::SparseGroupCriterion;
    if (text == "ebic") return IcKind::Ebic;
    throw std::invalid_argument("unknown information criterion '" + std::string(text) + "' (expected sgc or ebic)");
}

std::vector<Index> default_s0_grid(Index d)
{
    if (d < 1) throw std::invalid_argument("d must be >= 1");
    std::vector<Index> grid;
    if (d <= 20) {
        for (Index s0 = 1; s0 <= d; ++s0) grid.push_back(s0);
        return grid;
    }
    for (Index s0 = 1; s0 < d; s0 *= 2) grid.push_back(s0);
    grid.push_back(d);
    return grid;
}

double ebic_value(double rss, Index n, Index p, Index k, double gamma)
{
    if (k < 0 || k > p) throw std::invalid_argument("model size outside [0, p]");
    if (!(rss > 0.0)) return -std::numeric_limits<double>::infinity();
    const auto nd = static_cast<double>(n);
    const double log_models = std::lgamma(static_cast<double>(p) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0)
                              - std::lgamma(static_cast<double>(p - k) + 1.0);
    return nd * std::log(rss / nd) + static_cast<double>(k) * std::log(nd) + 2.0 * gamma * log_models;
}

EbicValue ebic(const FitResult& fit, const Dataset& data, const GroupStructure& groups, double gamma)
{
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("EBIC gamma must lie in [0, 1]");
    if (fit.coefficients.size() != groups.p() || data.p() != groups.p()) {
        throw std::invalid_argument("fit does not match the data dimensions");
    }
    const double rss = residual_sum_of_squares(fit.coefficients, data);
    return {ebic_value(rss, data.n(), data.p(), fit.coefficients.l0(), gamma), !(rss > 0.0)};
}

AdaptiveResult adsiht_fit(const Dataset& data, const GroupStructure& groups,
                          const std::optional<std::vector<Index>>& s0_grid, const SolverConfig& config,
                          const AdaptiveOptions& options)
{
    config.validate();
    const auto grid = validated_grid(s0_grid, groups.d());

    std::vector<std::optional<FitResult>> fits(grid.size());
    parallel_for(grid.size(), options.workers, [&](std::size_t l) {
        SolverConfig candidate = config;
        candidate.s0 = grid[l];
        fits[l] = dsiht_fit(data, groups, candidate);
    });

    std::vector<CandidateSummary> per_candidate;
    per_candidate.reserve(grid.size());
    for (const auto& fit : fits) {
        CandidateSummary summary = summarize(*fit);
        if (options.ic_kind == IcKind::SparseGroupCriterion) {
            summary.ic_value = fit->selected_criterion();
        } else {
            const auto value = ebic(*fit, data, groups, options.ebic_gamma);
            summary.ic_value = value.value;
            summary.interpolating = value.interpolating;
        }
        per_candidate.push_back(summary);
    }

    std::size_t best = 0;
    for (std::size_t l = 1; l < per_candidate.size(); ++l) {
        if (per_candidate[l].ic_value < per_candidate[best].ic_value) best = l;
    }
    return AdaptiveResult{std::move(*fits[best]), std::move(per_candidate), options.ic_kind, best};
}

} // namespace dsiht
