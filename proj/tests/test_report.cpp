#include "doctest.h"

#include "repmeta/errors.hpp"
#include "repmeta/report.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace repmeta;

namespace {

bool parses_as_xml(const std::string& text)
{
    std::istringstream in(text);
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::read_xml(in, tree);
    } catch (const boost::property_tree::xml_parser_error&) {
        return false;
    }
    return tree.count("svg") == 1;
}

std::size_t count(const std::string& haystack, const std::string& needle)
{
    std::size_t n = 0;
    for (auto pos = haystack.find(needle); pos != std::string::npos; pos = haystack.find(needle, pos + 1)) ++n;
    return n;
}

IngestResult input(std::vector<Study> studies, EffectMeasure measure = EffectMeasure::MD)
{
    IngestResult r;
    r.measure = measure;
    r.studies = StudySet(std::move(studies), scale_of(measure));
    return r;
}

IngestResult identical() { return input({{"A", 1.0, 0.1}, {"B", 1.0, 0.1}, {"C", 1.0, 0.1}}); }
IngestResult dominant() { return input({{"Big", 5.0, 0.1}, {"Null", 0.0, 1.0}, {"Tiny", 0.01, 1.0}}); }
IngestResult trials()
{
    return input({{"BCT 1", std::log(0.80), 0.15},
                  {"BCT 2", std::log(0.75), 0.16},
                  {"Smith & Co", std::log(0.90), 0.13},
                  {"<Pilot>", std::log(0.70), 0.17},
                  {"BCT 5", std::log(0.85), 0.08}},
                 EffectMeasure::HR);
}

// Compare against tests/golden/<name>; REPMETA_UPDATE_GOLDEN=1 rewrites it.
void check_golden(const std::string& name, const std::string& actual)
{
    const std::filesystem::path path = std::filesystem::path(REPMETA_GOLDEN_DIR) / name;
    if (const char* update = std::getenv("REPMETA_UPDATE_GOLDEN"); update && std::string(update) == "1") {
        std::ofstream(path, std::ios::binary) << actual;
    }
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "missing golden file " << path);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK_MESSAGE(buf.str() == actual, "golden mismatch: " << name);
}

} // namespace

TEST_CASE("r-value formatting")
{
    CHECK(format_rvalue(0.03549) == "0.0355");
    CHECK(format_rvalue(0.24) == "0.24");
    CHECK(format_rvalue(5e-6) == "< 0.0001");
    CHECK(format_rvalue(1e-4) == "0.0001");
    CHECK(format_rvalue(1.0) == "1");
    CHECK(format_sig4(0.03549) == "0.03549");
    CHECK(format_sig4(2.91e-06) == "2.91e-06");
    CHECK(format_sig4(0.16413) == "0.1641");
}

TEST_CASE("report sentences")
{
    RValueResult r;
    r.u = 2;
    r.r_two = 0.03549;
    CHECK(report_sentence(r, 0.05) == "This result was replicated in more than one study (r-value = 0.0355).");
    r.r_two = 0.24;
    CHECK(report_sentence(r, 0.05) ==
          "We cannot rule out the possibility that this result is based on a single study (r-value = 0.24).");
    r.r_two = 5e-6;
    CHECK(report_sentence(r, 0.05) == "This result was replicated in more than one study (r-value < 0.0001).");
    r.u = 4;
    r.r_two = 0.2;
    CHECK(report_sentence(r, 0.05) ==
          "We cannot rule out the possibility that this result is based on fewer than 4 studies (r-value = 0.2).");
}

TEST_CASE("forest plot structure")
{
    const AnalysisReport rep = run_analysis(identical(), {});
    const std::string svg = render_forest_plot(rep);
    CHECK(parses_as_xml(svg));
    CHECK(count(svg, "<g class=\"study\">") == 3);
    CHECK(count(svg, "<polygon") == 1);
    CHECK(count(svg, "class=\"null\"") == 1);
    CHECK(svg.find("r-value") != std::string::npos);
    CHECK(svg == render_forest_plot(rep));
}

TEST_CASE("forest plot marks exactly the dominant study")
{
    const AnalysisReport rep = run_analysis(dominant(), {});
    const std::string svg = render_forest_plot(rep);
    CHECK(count(svg, "class=\"excluded\"") == 1);
    const auto star = svg.find("class=\"excluded\"");
    const auto big = svg.find(">Big<");
    const auto null = svg.find(">Null<");
    CHECK(star < big);
    CHECK(big < null);
    CHECK(excluded_studies(rep.rvalue, rep.meta) == std::vector<std::size_t>{0});
}

TEST_CASE("forest plot escapes labels and uses a log axis for ratios")
{
    const AnalysisReport rep = run_analysis(trials(), {});
    const std::string svg = render_forest_plot(rep);
    CHECK(parses_as_xml(svg));
    CHECK(svg.find("Smith &amp; Co") != std::string::npos);
    CHECK(svg.find("&lt;Pilot&gt;") != std::string::npos);
    CHECK(svg.find("HR (log scale)") != std::string::npos);
}

TEST_CASE("forest plot rejects a zero-width summary CI")
{
    const IngestResult flat = input({{"a", 0.4, 0.1}, {"b", 0.4, 0.2}, {"c", 0.4, 0.3}});
    AnalysisRequest req;
    req.model = MetaModel::random_t;
    const AnalysisReport rep = run_analysis(flat, req);
    CHECK_THROWS_AS(render_forest_plot(rep), PreconditionError);
}

TEST_CASE("JSON output")
{
    AnalysisRequest req;
    req.with_bound = true;
    const AnalysisReport rep = run_analysis(trials(), req);
    const auto j = nlohmann::json::parse(serialize_results(rep));
    CHECK(j["model"] == "fixed");
    CHECK(j["leave_one_out"]["rows"].size() == 5);
    CHECK(j["meta"]["df"].is_null());
    CHECK(j["r_value"]["r_two"].get<double>() == rep.rvalue.r_two);
    const double s = j["meta"]["summary"].get<double>();
    CHECK(std::fabs(j["meta"]["display"]["summary"].get<double>() / std::exp(s) - 1.0) < 1e-9);
    const double lo = j["sensitivity_interval"]["low"].get<double>();
    CHECK(std::fabs(j["sensitivity_interval"]["display_low"].get<double>() / std::exp(lo) - 1.0) < 1e-9);
    CHECK(j["bound"]["trace"].size() >= 1);
    CHECK(serialize_results(rep) == serialize_results(run_analysis(trials(), req)));
}

TEST_CASE("text and JSON report the same numbers")
{
    const AnalysisReport rep = run_analysis(trials(), {});
    const std::string text = format_text_report(rep);
    CHECK(text.find("r-value (u = 2): " + format_sig4(rep.rvalue.r_two)) != std::string::npos);
    CHECK(text.find(rep.sentence) != std::string::npos);
}

TEST_CASE("golden snapshots")
{
    AnalysisRequest with_bound;
    with_bound.with_bound = true;
    check_golden("identical.json", serialize_results(run_analysis(identical(), with_bound)));
    check_golden("dominant.json", serialize_results(run_analysis(dominant(), with_bound)));
    AnalysisRequest random_t = with_bound;
    random_t.model = MetaModel::random_t;
    random_t.u = 3;
    check_golden("trials_random_t.json", serialize_results(run_analysis(trials(), random_t)));
    check_golden("trials_forest.svg", render_forest_plot(run_analysis(trials(), {})));
}

TEST_CASE("adjustment report")
{
    const auto rep = run_adjustment(EndpointFamily::from_values({0.1231, 0.0017, 0.0167, 0.1776}), AdjustMethod::bh,
                                    0.05);
    CHECK(rep.declared == std::vector<std::string>{"2", "3"});
    const auto j = nlohmann::json::parse(serialize_results(rep));
    CHECK(j["declared"].size() == 2);
    CHECK(format_text_report(rep).find("Replicated: 2, 3") != std::string::npos);
}
