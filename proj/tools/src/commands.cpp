#include <dsiht/tools/commands.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ostream>

#include <CLI11.hpp>

#include <dsiht/tools/acceptance.hpp>

namespace dsiht::cli {
namespace {

double parse_number(const std::string& text, const std::string& context)
{
    const auto value = io::parse_double(text);
    if (!value || !std::isfinite(*value)) throw std::invalid_argument("bad number '" + text + "' in " + context);
    return *value;
}

Index as_index(double value, const std::string& field)
{
    if (std::floor(value) != value || value < 0 || value > 1e15) {
        throw std::invalid_argument("field " + field + " needs a non-negative integer, got " + io::format_double(value));
    }
    return static_cast<Index>(value);
}

std::optional<std::uint64_t> env_seed()
{
    const char* text = std::getenv("DSIHT_SEED");
    if (!text || !*text) return std::nullopt;
    const auto value = io::parse_double(text);
    if (!value || *value < 0 || std::floor(*value) != *value) {
        throw std::invalid_argument(std::string("DSIHT_SEED must be a non-negative integer, got '") + text + "'");
    }
    return static_cast<std::uint64_t>(*value);
}

ExperimentOptions experiment_options(const SolverFlags& flags)
{
    ExperimentOptions options;
    options.forced_s0 = flags.s0;
    options.s0_grid = flags.s0_grid;
    options.ic_kind = parse_ic_kind(flags.ic);
    options.workers = flags.workers;
    return options;
}

void add_solver_flags(CLI::App& app, SolverFlags& flags)
{
    app.add_option("--preset", flags.preset, "Constant set: practical (default) or theory")
        ->check(CLI::IsMember({"practical", "theory"}));
    app.add_option("--kappa", flags.kappa, "Threshold decay factor in (0, 1)");
    app.add_option("--ic-const", flags.criterion_constant, "Weight of the complexity term in C_t");
    app.add_option("--max-iter", flags.max_iterations, "Iteration guard over both phases");
    app.add_option("--s0", flags.s0, "Fix s0 (plain DSIHT, no grid search)");
    app.add_option("--s0-grid", flags.s0_grid, "Comma-separated s0 candidates")->delimiter(',');
    app.add_option("--ic", flags.ic, "Grid selection criterion")->check(CLI::IsMember({"sgc", "ebic"}));
    app.add_option("--workers", flags.workers, "Worker threads; 0 uses every core");
}

} // namespace

SolverConfig SolverFlags::config() const
{
    if (preset != "theory" && preset != "practical") {
        throw std::invalid_argument("unknown preset '" + preset + "' (expected practical or theory)");
    }
    SolverConfig out = preset == "theory" ? SolverConfig{} : SolverConfig::practical();
    if (kappa) out.kappa = *kappa;
    if (criterion_constant) out.criterion_constant = *criterion_constant;
    if (max_iterations) out.max_iterations = *max_iterations;
    out.validate();
    return out;
}

FitOutcome run_fit(const FitCommand& command)
{
    if (command.y_path.has_value() == command.y_column.has_value()) {
        throw std::invalid_argument("give exactly one of --y or --y-column");
    }
    auto table = io::read_csv(command.x_path);
    Vector response;
    Matrix design;
    if (command.y_column) {
        const Index column = io::find_column(table, *command.y_column, command.x_path);
        response = table.values.col(column);
        design.resize(table.values.rows(), table.values.cols() - 1);
        for (Index j = 0, k = 0; j < table.values.cols(); ++j) {
            if (j != column) design.col(k++) = table.values.col(j);
        }
    } else {
        const auto y = io::read_csv(*command.y_path);
        if (y.values.cols() != 1) {
            throw ParseError(*command.y_path, 0, "expected one column, found " + std::to_string(y.values.cols()));
        }
        response = y.values.col(0);
        design = std::move(table.values);
    }
    if (response.size() != design.rows()) {
        throw std::invalid_argument("design has " + std::to_string(design.rows()) + " rows but the response has "
                                    + std::to_string(response.size()));
    }
    if (design.cols() == 0) throw std::invalid_argument("design has no columns");

    const auto layout = io::read_groups(command.groups_path);
    if (layout.groups.p() != design.cols()) {
        throw std::invalid_argument("groups cover " + std::to_string(layout.groups.p()) + " columns but the design has "
                                    + std::to_string(design.cols()));
    }
    const Dataset data = standardize(permute_columns(design, layout), response, {command.center});

    std::optional<std::vector<Index>> grid = command.solver.s0_grid;
    if (command.solver.s0) grid = std::vector<Index>{*command.solver.s0};
    AdaptiveOptions adaptive;
    adaptive.ic_kind = parse_ic_kind(command.solver.ic);
    adaptive.workers = command.solver.workers;
    const auto result = adsiht_fit(data, layout.groups, grid, command.solver.config(), adaptive);

    FitOutcome outcome;
    outcome.report = io::make_fit_report(result, layout);
    outcome.json = io::fit_report_json(outcome.report);
    outcome.trace = io::trace_csv(result.best.trace);
    return outcome;
}

SweepSpec parse_sweep(const std::string& text)
{
    const auto equals = text.find('=');
    if (equals == std::string::npos || equals == 0 || equals + 1 == text.size()) {
        throw std::invalid_argument("sweep must look like field=a..b[:step] or field=v1,v2,...");
    }
    SweepSpec spec;
    spec.field = text.substr(0, equals);
    const std::string range = text.substr(equals + 1);
    const auto dots = range.find("..");
    if (dots == std::string::npos) {
        std::size_t start = 0;
        while (start <= range.size()) {
            const auto comma = range.find(',', start);
            const auto piece = range.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
            spec.values.push_back(parse_number(piece, "sweep list"));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
    } else {
        const auto colon = range.find(':', dots + 2);
        const double first = parse_number(range.substr(0, dots), "sweep start");
        const double last = parse_number(range.substr(dots + 2, colon == std::string::npos ? std::string::npos
                                                                                           : colon - dots - 2),
                                         "sweep end");
        const double step = colon == std::string::npos ? 1.0 : parse_number(range.substr(colon + 1), "sweep step");
        if (!(step > 0.0)) throw std::invalid_argument("sweep step must be positive");
        if (last < first) throw std::invalid_argument("sweep end is below its start");
        const double slack = 1e-9 * step;
        for (int k = 0;; ++k) {
            const double value = first + k * step;
            if (value > last + slack) break;
            spec.values.push_back(value);
            if (spec.values.size() > 100000) throw std::invalid_argument("sweep has too many values");
        }
    }
    return spec;
}

ExperimentScenario with_field(ExperimentScenario scenario, const std::string& field, double value)
{
    if (field == "n") scenario.n = as_index(value, field);
    else if (field == "m") scenario.m = as_index(value, field);
    else if (field == "d") scenario.d = as_index(value, field);
    else if (field == "s") scenario.s = as_index(value, field);
    else if (field == "s0") scenario.s0 = as_index(value, field);
    else if (field == "rho") scenario.rho = value;
    else if (field == "snr") scenario.snr = value;
    else throw std::invalid_argument("cannot sweep '" + field + "' (use n, m, d, s, s0, rho or snr)");
    return scenario;
}

std::string run_simulate(const SimulateCommand& command, const ExperimentScenario& base)
{
    ExperimentScenario scenario = base;
    if (command.replications) scenario.replications = *command.replications;
    if (command.seed) scenario.base_seed = *command.seed;
    else if (const auto seed = env_seed()) scenario.base_seed = *seed;
    scenario.validate();

    const SolverConfig config = command.solver.config();
    ExperimentOptions options = experiment_options(command.solver);
    options.timing = command.timing;

    if (!command.sweep) {
        const auto result = run_experiment(scenario, config, options);
        return io::metrics_csv(scenario, result, command.timing);
    }
    const auto spec = parse_sweep(*command.sweep);
    std::vector<io::SweepRow> rows;
    for (const double value : spec.values) {
        const auto point = with_field(scenario, spec.field, value);
        point.validate();
        const auto result = run_experiment(point, config, options);
        rows.push_back({spec.field, value, point, result.aggregate});
    }
    return io::sweep_csv(rows, command.timing);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Double sparse IHT: fitting, simulation and acceptance checks", "dsiht"};
    app.require_subcommand(1);

    FitCommand fit;
    auto* fit_cmd = app.add_subcommand("fit", "Fit ADSIHT (or DSIHT with --s0) to a CSV dataset");
    fit_cmd->add_option("--x", fit.x_path, "Design matrix CSV")->required();
    fit_cmd->add_option("--y", fit.y_path, "Response CSV (one column)");
    fit_cmd->add_option("--y-column", fit.y_column, "Take the response from this column of --x (name or index)");
    fit_cmd->add_option("--groups", fit.groups_path, "Group file: {\"sizes\": [...]} or {\"membership\": [...]}")
        ->required();
    fit_cmd->add_option("--out", fit.out_path, "Coefficient JSON (stdout when omitted)");
    fit_cmd->add_option("--trace", fit.trace_path, "Per-iteration trace CSV of the selected fit");
    fit_cmd->add_flag("--center", fit.center, "Center columns and response before scaling");
    add_solver_flags(*fit_cmd, fit.solver);

    SimulateCommand simulate;
    auto* sim_cmd = app.add_subcommand("simulate", "Run a seeded synthetic scenario");
    sim_cmd->add_option("--scenario", simulate.scenario_path, "Scenario JSON")->required();
    sim_cmd->add_option("--out", simulate.out_path, "Metrics CSV (stdout when omitted)");
    sim_cmd->add_option("--reps", simulate.replications, "Override the replication count");
    sim_cmd->add_option("--seed", simulate.seed, "Override the base seed (default: DSIHT_SEED, then the scenario)");
    sim_cmd->add_option("--sweep", simulate.sweep, "Vary one field: snr=1..10, n=300..1000:100 or m=10,20");
    sim_cmd->add_flag("--timing", simulate.timing, "Record wall-clock runtime (output is then not reproducible)");
    add_solver_flags(*sim_cmd, simulate.solver);

    std::vector<int> only;
    unsigned bench_workers = 0;
    auto* bench_cmd = app.add_subcommand("bench", "Run the acceptance scenarios and report pass/fail");
    bench_cmd->add_option("--only", only, "Criteria to run (1-8), comma-separated")->delimiter(',');
    bench_cmd->add_option("--workers", bench_workers, "Worker threads; 0 uses every core");

    // CLI11 consumes a vector from the back.
    std::vector<std::string> reversed(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
    std::reverse(reversed.begin(), reversed.end());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& error) {
        err << "error: " << error.what() << "\n";
        return kInvalidInput;
    }

    try {
        if (fit_cmd->parsed()) {
            const auto outcome = run_fit(fit);
            if (fit.out_path) io::write_file(*fit.out_path, outcome.json);
            else out << outcome.json;
            if (fit.trace_path) io::write_file(*fit.trace_path, outcome.trace);
            for (const auto& note : outcome.report.notes) err << "note: " << note << "\n";
            return kSuccess;
        }
        if (sim_cmd->parsed()) {
            const auto scenario = io::read_scenario(simulate.scenario_path);
            const auto csv = run_simulate(simulate, scenario);
            if (simulate.out_path) io::write_file(*simulate.out_path, csv);
            else out << csv;
            return kSuccess;
        }
        acceptance::Options options;
        options.workers = bench_workers;
        bool all = true;
        for (const auto& outcome : acceptance::run(only, options)) {
            out << acceptance::format(outcome) << std::endl;
            all = all && outcome.passed;
        }
        return all ? kSuccess : kCriteriaFailed;
    } catch (const ParseError& error) {
        err << "error: " << error.what() << "\n";
        return kInvalidInput;
    } catch (const DegenerateColumnError& error) {
        err << "error: " << error.what() << "\n";
        return kInvalidInput;
    } catch (const InvalidStateError& error) {
        err << "numerical failure: " << error.what() << "\n";
        return kNumericalFailure;
    } catch (const std::invalid_argument& error) {
        err << "error: " << error.what() << "\n";
        return kInvalidInput;
    } catch (const std::exception& error) {
        err << "numerical failure: " << error.what() << "\n";
        return kNumericalFailure;
    }
}

} // namespace dsiht::cli
