#include <dsiht/tools/io.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace dsiht::io {
namespace {

using Json = nlohmann::ordered_json;

std::string_view trim(std::string_view text)
{
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
    return text;
}

std::vector<std::string_view> split_fields(std::string_view line)
{
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

std::string unquote(std::string_view field)
{
    if (field.size() >= 2 && field.front() == '"' && field.back() == '"') field = field.substr(1, field.size() - 2);
    return std::string(field);
}

Json parse_json(std::string_view text, const std::string& name)
{
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& error) {
        throw ParseError(name, 0, std::string("invalid JSON: ") + error.what());
    }
}

double json_double(const Json& value)
{
    if (value.is_null()) return std::numeric_limits<double>::quiet_NaN();
    return value.get<double>();
}

Json candidate_json(const CandidateSummary& c)
{
    Json out;
    out["s0"] = c.s0;
    out["ic_value"] = c.ic_value;
    out["interpolating"] = c.interpolating;
    out["t_bar"] = c.phase_boundary;
    out["T"] = c.horizon;
    out["t_tilde"] = c.selected;
    out["support_size"] = c.support_size;
    out["group_support_size"] = c.group_support_size;
    out["sigma_bar"] = c.sigma_bar;
    out["rss"] = c.rss;
    out["truncated"] = c.truncated;
    return out;
}

CandidateSummary candidate_from_json(const Json& j)
{
    CandidateSummary c;
    c.s0 = j.at("s0").get<Index>();
    c.ic_value = json_double(j.at("ic_value"));
    c.interpolating = j.at("interpolating").get<bool>();
    if (c.interpolating && j.at("ic_value").is_null()) c.ic_value = -std::numeric_limits<double>::infinity();
    c.phase_boundary = j.at("t_bar").get<int>();
    c.horizon = j.at("T").get<int>();
    c.selected = j.at("t_tilde").get<int>();
    c.support_size = j.at("support_size").get<Index>();
    c.group_support_size = j.at("group_support_size").get<Index>();
    c.sigma_bar = json_double(j.at("sigma_bar"));
    c.rss = json_double(j.at("rss"));
    c.truncated = j.at("truncated").get<bool>();
    return c;
}

void append_summary(std::string& out, const MetricSummary& summary, bool mean)
{
    out += ',';
    out += format_double(mean ? summary.mean : summary.sd);
}

} // namespace

std::string format_double(double value)
{
    if (!std::isfinite(value)) return "NA";
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, result.ptr);
}

std::optional<double> parse_double(std::string_view text)
{
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    if (text.empty()) return std::nullopt;
    double value = 0.0;
    const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
    if (result.ec != std::errc{} || result.ptr != text.data() + text.size()) return std::nullopt;
    return value;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path, 0, "cannot open file");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, std::string_view contents)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw std::invalid_argument("failed writing " + path);
}

CsvTable parse_csv(std::istream& in, const std::string& name)
{
    CsvTable table;
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_number = 0;
    std::size_t width = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++line_number;
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line);
        std::vector<double> row;
        row.reserve(fields.size());
        bool numeric = true;
        for (const auto field : fields) {
            const auto value = parse_double(field);
            if (!value) {
                numeric = false;
                break;
            }
            row.push_back(*value);
        }
        if (first) {
            width = fields.size();
            first = false;
            if (!numeric) {
                for (const auto field : fields) table.header.push_back(unquote(field));
                continue;
            }
        }
        if (fields.size() != width) {
            throw ParseError(name, line_number, "expected " + std::to_string(width) + " fields, found "
                                                    + std::to_string(fields.size()));
        }
        if (!numeric) {
            for (std::size_t k = 0; k < fields.size(); ++k) {
                if (!parse_double(fields[k])) {
                    throw ParseError(name, line_number, "field " + std::to_string(k + 1) + " is not a number: '"
                                                            + std::string(fields[k]) + "'");
                }
            }
        }
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (!std::isfinite(row[k])) {
                throw ParseError(name, line_number, "field " + std::to_string(k + 1) + " is not finite");
            }
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(name, line_number, "no data rows");
    table.values.resize(static_cast<Index>(rows.size()), static_cast<Index>(width));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < width; ++j) table.values(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
    return table;
}

CsvTable read_csv(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path, 0, "cannot open file");
    return parse_csv(in, path);
}

Index find_column(const CsvTable& table, std::string_view key, const std::string& name)
{
    const auto it = std::find(table.header.begin(), table.header.end(), key);
    if (it != table.header.end()) return static_cast<Index>(it - table.header.begin());
    const auto position = parse_double(key);
    if (position && *position >= 0 && std::floor(*position) == *position && *position < table.values.cols()) {
        return static_cast<Index>(*position);
    }
    throw ParseError(name, 0, "no column named '" + std::string(key) + "'");
}

GroupLayout parse_groups(std::string_view text, const std::string& name)
{
    const Json j = parse_json(text, name);
    if (!j.is_object() || j.size() != 1 || !(j.contains("sizes") || j.contains("membership"))) {
        throw ParseError(name, 0, "expected an object with exactly one of \"sizes\" or \"membership\"");
    }
    const auto& list = j.contains("sizes") ? j.at("sizes") : j.at("membership");
    if (!list.is_array() || list.empty()) throw ParseError(name, 0, "group list must be a non-empty array");
    for (const auto& entry : list) {
        if (!entry.is_number_integer()) throw ParseError(name, 0, "group entries must be integers");
    }
    try {
        if (j.contains("sizes")) {
            const auto sizes = list.get<std::vector<Index>>();
            return layout_from_sizes(sizes);
        }
        const auto membership = list.get<std::vector<long long>>();
        return layout_from_membership(membership);
    } catch (const std::invalid_argument& error) {
        throw ParseError(name, 0, error.what());
    }
}

GroupLayout read_groups(const std::string& path)
{
    return parse_groups(read_file(path), path);
}

ExperimentScenario parse_scenario(std::string_view text, const std::string& name)
{
    const Json j = parse_json(text, name);
    if (!j.is_object()) throw ParseError(name, 0, "scenario must be a JSON object");
    static const std::vector<std::string> known = {"id", "n", "m", "d", "s", "s0", "rho", "snr",
                                                   "signal", "replications", "base_seed"};
    for (const auto& item : j.items()) {
        if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
            throw ParseError(name, 0, "unknown scenario field '" + item.key() + "'");
        }
    }
    std::vector<std::string> missing;
    for (const char* field : {"n", "m", "d", "s", "s0", "snr"}) {
        if (!j.contains(field)) missing.emplace_back(field);
    }
    if (!missing.empty()) {
        std::string message = "missing scenario fields:";
        for (const auto& field : missing) message += " " + field;
        throw ParseError(name, 0, message);
    }
    ExperimentScenario scenario;
    try {
        scenario.id = j.value("id", std::string("scenario"));
        scenario.n = j.at("n").get<Index>();
        scenario.m = j.at("m").get<Index>();
        scenario.d = j.at("d").get<Index>();
        scenario.s = j.at("s").get<Index>();
        scenario.s0 = j.at("s0").get<Index>();
        scenario.snr = j.at("snr").get<double>();
        scenario.rho = j.value("rho", 0.5);
        scenario.replications = j.value("replications", 1);
        scenario.base_seed = j.value("base_seed", std::uint64_t{0});
        scenario.signal = parse_signal(j.value("signal", std::string("homogeneous")));
    } catch (const Json::exception& error) {
        throw ParseError(name, 0, std::string("bad scenario field type: ") + error.what());
    }
    return scenario;
}

ExperimentScenario read_scenario(const std::string& path)
{
    return parse_scenario(read_file(path), path);
}

FitReport make_fit_report(const AdaptiveResult& result, const GroupLayout& layout)
{
    FitReport report;
    const Vector original = restore_order(result.best.coefficients_original_scale, layout);
    report.coefficients.assign(original.data(), original.data() + original.size());
    for (Index i = 0; i < original.size(); ++i) {
        if (original(i) != 0.0) report.support.push_back(i);
    }
    report.group_support = result.best.coefficients.group_support();
    report.s0_selected = result.best.s0_used;
    report.sigma_bar = result.best.sigma_bar;
    report.ic_kind = std::string(to_string(result.ic_kind));
    report.ic_table = result.per_candidate;
    const auto& trace = result.best.trace;
    if (trace.degenerate_response) report.notes.emplace_back("degenerate response: y is zero, returning the zero model");
    for (const auto& candidate : result.per_candidate) {
        if (candidate.truncated) {
            report.notes.push_back("s0 = " + std::to_string(candidate.s0) + " hit the iteration limit");
        }
    }
    if (result.best.rank_deficient) report.notes.emplace_back("ridge fallback used in a projection");
    return report;
}

std::string fit_report_json(const FitReport& report)
{
    Json j;
    j["coefficients"] = report.coefficients;
    j["support"] = report.support;
    j["group_support"] = report.group_support;
    j["s0_selected"] = report.s0_selected;
    j["sigma_bar"] = report.sigma_bar;
    j["ic_kind"] = report.ic_kind;
    Json table = Json::array();
    for (const auto& c : report.ic_table) table.push_back(candidate_json(c));
    j["ic_table"] = std::move(table);
    j["notes"] = report.notes;
    return j.dump(2) + "\n";
}

FitReport parse_fit_report(std::string_view text, const std::string& name)
{
    const Json j = parse_json(text, name);
    FitReport report;
    try {
        for (const auto& value : j.at("coefficients")) report.coefficients.push_back(json_double(value));
        report.support = j.at("support").get<std::vector<Index>>();
        report.group_support = j.at("group_support").get<std::vector<Index>>();
        report.s0_selected = j.at("s0_selected").get<Index>();
        report.sigma_bar = json_double(j.at("sigma_bar"));
        report.ic_kind = j.at("ic_kind").get<std::string>();
        for (const auto& c : j.at("ic_table")) report.ic_table.push_back(candidate_from_json(c));
        report.notes = j.at("notes").get<std::vector<std::string>>();
    } catch (const Json::exception& error) {
        throw ParseError(name, 0, std::string("malformed fit report: ") + error.what());
    }
    return report;
}

std::string trace_csv(const SolverTrace& trace)
{
    std::string out = "t,lambda,applied_threshold,sigma,support_size,group_support_size,rss,criterion\n";
    for (const auto& rec : trace.records) {
        out += std::to_string(rec.t);
        out += ',' + format_double(rec.lambda);
        out += ',' + format_double(rec.applied_threshold);
        out += ',' + format_double(rec.sigma);
        out += ',' + std::to_string(rec.element_support_size);
        out += ',' + std::to_string(rec.group_support_size);
        out += ',' + format_double(rec.rss);
        out += ',' + (rec.criterion ? format_double(*rec.criterion) : std::string("NA"));
        out += '\n';
    }
    return out;
}

std::string metrics_csv(const ExperimentScenario& scenario, const ExperimentResult& result, bool timing)
{
    std::string out = "scenario,rep,se,gse,mcc,ee,runtime_seconds,ee_original\n";
    for (const auto& row : result.rows) {
        out += scenario.id + ',' + std::to_string(row.rep);
        if (!row.ok) {
            out += ",NA,NA,NA,NA,NA,NA\n";
            continue;
        }
        out += ',' + std::to_string(row.se);
        out += ',' + std::to_string(row.gse);
        out += ',' + format_double(row.mcc);
        out += ',' + format_double(row.ee);
        out += ',' + (timing ? format_double(row.runtime_seconds) : std::string("NA"));
        out += ',' + format_double(row.ee_original);
        out += '\n';
    }
    const auto& a = result.aggregate;
    for (const bool mean : {true, false}) {
        out += scenario.id + (mean ? ",mean" : ",sd");
        append_summary(out, a.se, mean);
        append_summary(out, a.gse, mean);
        append_summary(out, a.mcc, mean);
        append_summary(out, a.ee, mean);
        if (timing) append_summary(out, a.runtime_seconds, mean);
        else out += ",NA";
        append_summary(out, a.ee_original, mean);
        out += '\n';
    }
    return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows, bool timing)
{
    std::string out = "scenario,field,value,succeeded,failed,se_mean,se_sd,gse_mean,gse_sd,mcc_mean,mcc_sd,"
                      "ee_mean,ee_sd,runtime_mean,runtime_sd,ee_original_mean,ee_original_sd\n";
    for (const auto& row : rows) {
        const auto& a = row.aggregate;
        out += row.scenario.id + ',' + row.field + ',' + format_double(row.value);
        out += ',' + std::to_string(a.succeeded) + ',' + std::to_string(a.failed);
        for (const auto* summary : {&a.se, &a.gse, &a.mcc, &a.ee}) {
            append_summary(out, *summary, true);
            append_summary(out, *summary, false);
        }
        if (timing) {
            append_summary(out, a.runtime_seconds, true);
            append_summary(out, a.runtime_seconds, false);
        } else {
            out += ",NA,NA";
        }
        append_summary(out, a.ee_original, true);
        append_summary(out, a.ee_original, false);
        out += '\n';
    }
    return out;
}

} // namespace dsiht::io
