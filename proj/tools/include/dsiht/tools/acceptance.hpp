#pragma once

#include <string>
#include <vector>

namespace dsiht::acceptance {

struct Outcome
{
    int id = 0;
    std::string name;
    bool passed = false;
    std::string measured;  // what was observed, against which thresholds
    double seconds = 0.0;
};

struct Options
{
    unsigned workers = 1;  // replications in flight; 0 = all cores
};

Outcome operator_properties(const Options& options);
Outcome oracle_equivalence(const Options& options);
Outcome table_replication(const Options& options);
Outcome minimax_rate(const Options& options);
Outcome scale_equivariance(const Options& options);
Outcome path_bound(const Options& options);
Outcome linear_convergence(const Options& options);
Outcome determinism(const Options& options);

/// Runs the listed criteria (1..8) in order; an empty list runs all of them.
std::vector<Outcome> run(const std::vector<int>& ids, const Options& options);

/// "[PASS] 3 table replication: ... (12.3 s)"
std::string format(const Outcome& outcome);

} // namespace dsiht::acceptance
