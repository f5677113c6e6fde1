#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include <dsiht/errors.hpp>
#include <dsiht/rng.hpp>
#include <dsiht/tools/io.hpp>

using namespace dsiht;

namespace {

io::CsvTable csv(const std::string& text)
{
    std::istringstream in(text);
    return io::parse_csv(in, "t.csv");
}

std::size_t csv_error_line(const std::string& text)
{
    try {
        csv(text);
    } catch (const ParseError& error) {
        EXPECT_EQ(error.file(), "t.csv");
        return error.line();
    }
    ADD_FAILURE() << "no ParseError for: " << text;
    return 0;
}

} // namespace

TEST(FormatDouble, ShortestRoundTrip)
{
    EXPECT_EQ(io::format_double(0.1), "0.1");
    EXPECT_EQ(io::format_double(1.0), "1");
    EXPECT_EQ(io::format_double(-2.5e-10), "-2.5e-10");
    EXPECT_EQ(io::format_double(std::numeric_limits<double>::quiet_NaN()), "NA");
    EXPECT_EQ(io::format_double(-std::numeric_limits<double>::infinity()), "NA");

    Rng rng(3);
    for (int i = 0; i < 10000; ++i) {
        const double x = rng.normal() * std::pow(10.0, static_cast<double>(rng.below(40)) - 20.0);
        EXPECT_EQ(*io::parse_double(io::format_double(x)), x);
    }
}

TEST(ParseDouble, RejectsPartialFields)
{
    EXPECT_EQ(io::parse_double("1.5"), 1.5);
    EXPECT_EQ(io::parse_double("-3e2"), -300.0);
    EXPECT_FALSE(io::parse_double("1.5x"));
    EXPECT_FALSE(io::parse_double(""));
    EXPECT_FALSE(io::parse_double("abc"));
}

TEST(Csv, HeaderIsDetected)
{
    const auto with = csv("a,b\n1,2\n3,4\n");
    EXPECT_EQ(with.header, (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(with.values.rows(), 2);
    EXPECT_EQ(with.values(1, 0), 3.0);

    const auto without = csv("1,2\n\n3,4.5\n");
    EXPECT_TRUE(without.header.empty());
    EXPECT_EQ(without.values.rows(), 2);
    EXPECT_EQ(without.values(1, 1), 4.5);
}

TEST(Csv, ErrorsNameTheLine)
{
    EXPECT_EQ(csv_error_line("a,b\n1,2\n3\n"), 3u);
    EXPECT_EQ(csv_error_line("1,2\n3,x\n"), 2u);
    EXPECT_EQ(csv_error_line("1,2\n\n3,nan\n"), 3u);
}

TEST(Csv, FindColumn)
{
    const auto table = csv("x1,y\n1,2\n");
    EXPECT_EQ(io::find_column(table, "y", "t.csv"), 1);
    EXPECT_EQ(io::find_column(table, "0", "t.csv"), 0);
    EXPECT_THROW(io::find_column(table, "z", "t.csv"), std::exception);
    EXPECT_THROW(io::find_column(table, "5", "t.csv"), std::exception);
}

TEST(Groups, SizesAndMembership)
{
    const auto sizes = io::parse_groups(R"({"sizes": [2, 3]})", "g.json");
    EXPECT_EQ(sizes.groups.p(), 5);
    EXPECT_TRUE(sizes.is_identity());

    const auto membership = io::parse_groups(R"({"membership": [1, 0, 1]})", "g.json");
    EXPECT_EQ(membership.groups.sizes(), (std::vector<Index>{1, 2}));
    EXPECT_EQ(membership.column_order, (std::vector<Index>{1, 0, 2}));
}

TEST(Groups, Errors)
{
    EXPECT_THROW(io::parse_groups(R"({"sizes": [2], "membership": [0, 0]})", "g.json"), ParseError);
    EXPECT_THROW(io::parse_groups(R"({})", "g.json"), ParseError);
    EXPECT_THROW(io::parse_groups(R"({"sizes": [2, 0]})", "g.json"), std::exception);
    EXPECT_THROW(io::parse_groups("{not json", "g.json"), ParseError);
}

TEST(Scenario, DefaultsAndFields)
{
    const auto sc = io::parse_scenario(R"({"n": 500, "m": 250, "d": 20, "s": 4, "s0": 5, "snr": 5})", "s.json");
    EXPECT_EQ(sc.n, 500);
    EXPECT_EQ(sc.s0, 5);
    EXPECT_EQ(sc.rho, 0.5);
    EXPECT_EQ(sc.replications, 1);
    EXPECT_EQ(sc.base_seed, 0u);
    EXPECT_EQ(sc.signal, Signal::Homogeneous);
    EXPECT_EQ(sc.id, "scenario");
}

TEST(Scenario, ErrorsListFields)
{
    try {
        io::parse_scenario(R"({"n": 500, "m": 250, "s": 4, "snr": 5})", "s.json");
        FAIL();
    } catch (const ParseError& error) {
        const std::string what = error.what();
        EXPECT_NE(what.find("d"), std::string::npos);
        EXPECT_NE(what.find("s0"), std::string::npos);
    }
    EXPECT_THROW(io::parse_scenario(R"({"n": 5, "m": 2, "d": 2, "s": 1, "s0": 1, "snr": 1, "sigma": 2})", "s.json"),
                 ParseError);
    EXPECT_THROW(io::parse_scenario(R"({"n": 5, "m": 2, "d": 2, "s": 3, "s0": 1, "snr": 1})", "s.json").validate(),
                 std::invalid_argument);
}

TEST(FitReport, JsonRoundTripIsByteIdentical)
{
    io::FitReport report;
    report.coefficients = {0.0, 1.25, -0.1, 3e-17};
    report.support = {1, 2, 3};
    report.group_support = {0, 1};
    report.s0_selected = 2;
    report.sigma_bar = 0.7071067811865476;
    report.ic_kind = "ebic";
    CandidateSummary a;
    a.s0 = 1;
    a.ic_value = -std::numeric_limits<double>::infinity();
    a.interpolating = true;
    CandidateSummary b;
    b.s0 = 2;
    b.ic_value = 12.345678901234567;
    b.horizon = 30;
    b.rss = 0.1;
    report.ic_table = {a, b};
    report.notes = {"degenerate response"};

    const std::string text = io::fit_report_json(report);
    const auto back = io::parse_fit_report(text, "fit.json");
    EXPECT_EQ(back, report);
    EXPECT_EQ(io::fit_report_json(back), text);
}

TEST(TraceCsv, LayoutAndMissingCriterion)
{
    SolverTrace trace;
    TraceRecord r0;
    r0.lambda = 2.0;
    r0.applied_threshold = 2.0;
    r0.sigma = 1.0;
    r0.rss = 100.0;
    TraceRecord r1 = r0;
    r1.t = 1;
    r1.criterion = 0.5;
    trace.records = {r0, r1};
    const std::string text = io::trace_csv(trace);
    EXPECT_EQ(text,
              "t,lambda,applied_threshold,sigma,support_size,group_support_size,rss,criterion\n"
              "0,2,2,1,0,0,100,NA\n"
              "1,2,2,1,0,0,100,0.5\n");
}

TEST(MetricsCsv, RowsThenAggregates)
{
    ExperimentScenario sc;
    sc.id = "demo";
    ExperimentResult result;
    MetricsRow row;
    row.se = 1;
    row.mcc = 0.5;
    row.ee = 0.25;
    row.ee_original = 0.5;
    result.rows = {row};
    result.aggregate = aggregate_rows(result.rows);
    const std::string text = io::metrics_csv(sc, result, false);
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "scenario,rep,se,gse,mcc,ee,runtime_seconds,ee_original");
    std::getline(in, line);
    EXPECT_EQ(line, "demo,0,1,0,0.5,0.25,NA,0.5");
    std::getline(in, line);
    EXPECT_EQ(line.rfind("demo,mean,", 0), 0u);
    std::getline(in, line);
    EXPECT_EQ(line.rfind("demo,sd,", 0), 0u);
}
