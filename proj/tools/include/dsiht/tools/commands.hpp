#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <dsiht/tools/io.hpp>

namespace dsiht::cli {

enum ExitCode : int
{
    kSuccess = 0,
    kCriteriaFailed = 1,  // bench only
    kInvalidInput = 2,
    kNumericalFailure = 3,
};

struct SolverFlags
{
    std::string preset = "practical";  // "practical" or "theory"
    std::optional<double> kappa;
    std::optional<double> criterion_constant;
    std::optional<int> max_iterations;
    std::optional<Index> s0;
    std::optional<std::vector<Index>> s0_grid;
    std::string ic = "sgc";
    unsigned workers = 0;

    SolverConfig config() const;
};

struct FitCommand
{
    std::string x_path;
    std::optional<std::string> y_path;
    std::optional<std::string> y_column;  // take the response from the design file instead
    std::string groups_path;
    std::optional<std::string> out_path;  // stdout when absent
    std::optional<std::string> trace_path;
    bool center = false;
    SolverFlags solver;
};

struct FitOutcome
{
    io::FitReport report;
    std::string json;
    std::string trace;
};

FitOutcome run_fit(const FitCommand& command);

/// A scenario field and the values it takes, from "snr=1..10", "n=300..1000:100" or "m=10,20,40".
struct SweepSpec
{
    std::string field;
    std::vector<double> values;
};

SweepSpec parse_sweep(const std::string& text);
ExperimentScenario with_field(ExperimentScenario scenario, const std::string& field, double value);

struct SimulateCommand
{
    std::string scenario_path;
    std::optional<std::string> out_path;
    std::optional<int> replications;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> sweep;
    bool timing = false;
    SolverFlags solver;
};

/// Metrics CSV, or the sweep CSV when a sweep is requested.
std::string run_simulate(const SimulateCommand& command, const ExperimentScenario& scenario);

/// Full command line (argv[0] included). Writes results and diagnostics to the given streams.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace dsiht::cli
