// Runs every acceptance criterion and prints one line per criterion.
// Exits non-zero when any criterion fails.

#include <iostream>

#include <dsiht/solver.hpp>
#include <dsiht/tools/acceptance.hpp>

int main()
{
    const auto config = dsiht::SolverConfig::practical();
    std::cout << "solver constants: kappa " << config.kappa << ", criterion constant " << config.criterion_constant
              << ", phase factors " << config.phase_one_factor << "/" << config.phase_two_factor
              << ", initial threshold factors " << config.initial_noise_factor << "/" << config.initial_signal_factor
              << std::endl;
    bool all = true;
    for (int id = 1; id <= 8; ++id) {
        const auto outcome = dsiht::acceptance::run({id}, {})[0];
        std::cout << dsiht::acceptance::format(outcome) << std::endl;
        all = all && outcome.passed;
    }
    return all ? 0 : 1;
}
