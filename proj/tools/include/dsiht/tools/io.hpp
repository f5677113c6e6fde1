#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <dsiht/adaptive.hpp>
#include <dsiht/simulate.hpp>

namespace dsiht::io {

/// Shortest decimal string that parses back to exactly `value`. Non-finite values give "NA".
std::string format_double(double value);

/// Locale-independent parse of a whole field; nullopt when it is not a number.
std::optional<double> parse_double(std::string_view text);

struct CsvTable
{
    std::vector<std::string> header;  // empty when the file has none
    Matrix values;
};

/**
 * Comma-separated numeric table. The first row is taken as a header when any
 * of its fields is not a number. Blank lines are skipped. Errors name the file
 * and line.
 */
CsvTable read_csv(const std::string& path);
CsvTable parse_csv(std::istream& in, const std::string& name);

/// Column of `table` by header name or by 0-based position.
Index find_column(const CsvTable& table, std::string_view key, const std::string& name);

/// {"sizes": [...]} or {"membership": [...]}.
GroupLayout read_groups(const std::string& path);
GroupLayout parse_groups(std::string_view text, const std::string& name);

ExperimentScenario read_scenario(const std::string& path);
ExperimentScenario parse_scenario(std::string_view text, const std::string& name);

/// Everything `fit` reports, in the original column order and scale.
struct FitReport
{
    std::vector<double> coefficients;
    std::vector<Index> support;         // original column indices
    std::vector<Index> group_support;   // group positions in label order
    Index s0_selected = 1;
    double sigma_bar = 0.0;
    std::string ic_kind;
    std::vector<CandidateSummary> ic_table;
    std::vector<std::string> notes;

    bool operator==(const FitReport&) const = default;
};

FitReport make_fit_report(const AdaptiveResult& result, const GroupLayout& layout);

std::string fit_report_json(const FitReport& report);
FitReport parse_fit_report(std::string_view text, const std::string& name);

/// t,lambda,applied_threshold,sigma,support_size,group_support_size,rss,criterion
std::string trace_csv(const SolverTrace& trace);

/// scenario,rep,se,gse,mcc,ee,runtime_seconds,ee_original with trailing mean and sd rows.
std::string metrics_csv(const ExperimentScenario& scenario, const ExperimentResult& result, bool timing);

struct SweepRow
{
    std::string field;
    double value = 0.0;
    ExperimentScenario scenario;
    ExperimentAggregate aggregate;
};

/// One aggregate row per swept value.
std::string sweep_csv(const std::vector<SweepRow>& rows, bool timing);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

} // namespace dsiht::io
