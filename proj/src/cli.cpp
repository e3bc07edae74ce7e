#include "repmeta/cli.hpp"

#include "repmeta/errors.hpp"
#include "repmeta/ingest.hpp"
#include "repmeta/multiplicity.hpp"
#include "repmeta/report.hpp"
#include "repmeta/simulation.hpp"

#include "CLI11.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>

namespace repmeta::cli {

namespace fs = std::filesystem;

namespace {

fs::path output_path(const std::string& given)
{
    fs::path p(given);
    const char* base = std::getenv(kOutDirEnv);
    if (p.is_relative() && base && *base) return fs::path(base) / p;
    return p;
}

void write_file(const fs::path& path, const std::string& text)
{
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    f << text;
    if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
}

std::vector<double> parse_value_list(const std::string& text)
{
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = std::min(text.find(',', start), text.size());
        std::string item = text.substr(start, comma - start);
        const auto first = item.find_first_not_of(" \t");
        const auto last = item.find_last_not_of(" \t");
        item = first == std::string::npos ? std::string() : item.substr(first, last - first + 1);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
            throw InputError("not a number: '" + item + "'");
        }
        if (!(v >= 0.0 && v <= 1.0)) throw InputError("r-value out of [0, 1]: '" + item + "'");
        values.push_back(v);
        start = comma + 1;
    }
    return values;
}

struct AnalyzeFlags
{
    std::string input;
    std::string model = "fixed";
    double alpha = 0.05;
    int u = 2;
    bool bound = false;
    std::string plot;
    std::string json;
    std::uint64_t max_subsets = 1'000'000;
};

int cmd_analyze(const AnalyzeFlags& f, std::ostream& out, std::ostream& err)
{
    const fs::path input(f.input);
    std::vector<InputRecord> records;
    if (input.extension() == ".json") {
        std::ifstream in(input);
        if (!in) throw InputError("cannot open input file '" + f.input + "'");
        records = parse_json(in);
    } else {
        records = parse_csv_file(input);
    }
    const IngestResult ingest = normalize(records);

    AnalysisRequest request;
    request.model = parse_model(f.model);
    request.alpha = f.alpha;
    request.u = f.u;
    request.with_bound = f.bound;
    request.options.max_subsets = f.max_subsets;
    if (!(f.alpha > 0.0 && f.alpha < 1.0)) throw InputError("--alpha must lie in (0, 1)");

    const AnalysisReport report = run_analysis(ingest, request);
    for (const auto& w : report.warnings) err << "warning: " << w << '\n';
    out << format_text_report(report);
    if (!f.plot.empty()) write_file(output_path(f.plot), render_forest_plot(report));
    if (!f.json.empty()) write_file(output_path(f.json), serialize_results(report));
    return kOk;
}

struct AdjustFlags
{
    std::string rvalues;
    std::string method = "bh";
    double alpha = 0.05;
    std::string json;
};

int cmd_adjust(const AdjustFlags& f, std::ostream& out)
{
    if (!(f.alpha > 0.0 && f.alpha < 1.0)) throw InputError("--alpha must lie in (0, 1)");
    const auto family = EndpointFamily::from_values(parse_value_list(f.rvalues));
    const AdjustmentReport report = run_adjustment(family, parse_adjust_method(f.method), f.alpha);
    out << format_text_report(report);
    if (!f.json.empty()) write_file(output_path(f.json), serialize_results(report));
    return kOk;
}

struct SimulateFlags
{
    std::string grid = "desk";
    std::uint64_t seed = 42;
    std::uint64_t iterations = 0;
    std::string out;
    unsigned threads = 0;
    std::string json;
};

int cmd_simulate(const SimulateFlags& f, std::ostream& out)
{
    sim::SimConfig config = f.grid == "full" ? sim::SimConfig::full(f.seed) : sim::SimConfig::desk(f.seed);
    if (f.grid != "full" && f.grid != "desk") throw InputError("--grid must be full or desk");
    if (f.iterations) config.iterations = f.iterations;
    config.threads = f.threads;

    fs::path dir;
    if (!f.out.empty()) {
        dir = output_path(f.out);
    } else {
        const char* base = std::getenv(kOutDirEnv);
        dir = base && *base ? fs::path(base) : fs::path("simulation_out");
    }

    const sim::SimulationGrid grid = sim::run_simulation(config);
    for (const auto& path : sim::emit_grid(grid, dir)) out << "wrote " << path.string() << '\n';
    if (!f.json.empty()) {
        nlohmann::ordered_json j;
        j["seed"] = config.seed;
        j["iterations"] = config.iterations;
        j["alpha"] = config.alpha;
        j["within_sd"] = config.within_sd;
        nlohmann::ordered_json cells = nlohmann::ordered_json::array();
        for (const auto& c : grid.cells) {
            cells.push_back(nlohmann::ordered_json{{"test", std::string(sim::to_string(c.test))},
                                                   {"N", c.n},
                                                   {"tau2", c.tau2},
                                                   {"mu_n", c.mu_n},
                                                   {"fraction", c.fraction},
                                                   {"mc_se", c.mc_se}});
        }
        j["cells"] = std::move(cells);
        write_file(output_path(f.json), j.dump(2) + "\n");
    }
    return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Replicability analysis for meta-analyses", "repmeta"};
    app.require_subcommand(1);

    AnalyzeFlags af;
    auto* analyze = app.add_subcommand("analyze", "Meta-analysis, r-value, sensitivity interval and forest plot");
    analyze->add_option("--input", af.input, "Study-level CSV (or .json)")->required();
    analyze->add_option("--model", af.model, "fixed | random-z | random-t")->capture_default_str();
    analyze->add_option("--alpha", af.alpha, "Significance level")->capture_default_str();
    analyze->add_option("--u", af.u, "Replicability parameter u (drop u-1 studies)")->capture_default_str();
    analyze->add_flag("--bound", af.bound, "Report the lower bound on the number of studies with an effect");
    analyze->add_option("--plot", af.plot, "Write an SVG forest plot");
    analyze->add_option("--json", af.json, "Write the full results as JSON");
    analyze->add_option("--max-subsets", af.max_subsets, "Cap on subset meta-analyses")->capture_default_str();

    AdjustFlags jf;
    auto* adjust_cmd = app.add_subcommand("adjust", "Multiplicity-adjust r-values of several endpoints");
    adjust_cmd->add_option("--rvalues", jf.rvalues, "Comma-separated r-values")->required();
    adjust_cmd->add_option("--method", jf.method, "bh | bonferroni")->capture_default_str();
    adjust_cmd->add_option("--alpha", jf.alpha, "Level for declaring replication")->capture_default_str();
    adjust_cmd->add_option("--json", jf.json, "Write results as JSON");

    SimulateFlags sf;
    auto* simulate = app.add_subcommand("simulate", "Type-I error simulation for random-effects tests");
    simulate->add_option("--grid", sf.grid, "full | desk")->capture_default_str();
    simulate->add_option("--seed", sf.seed, "Random seed")->capture_default_str();
    simulate->add_option("--iterations", sf.iterations, "Iterations per cell (default 10000)");
    simulate->add_option("--out", sf.out, "Output directory for CSV and charts");
    simulate->add_option("--threads", sf.threads, "Worker threads (0 = all cores)")->capture_default_str();
    simulate->add_option("--json", sf.json, "Write the grid as JSON");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (*analyze) return cmd_analyze(af, out, err);
        if (*adjust_cmd) return cmd_adjust(jf, out);
        if (*simulate) return cmd_simulate(sf, out);
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << '\n';
        return kPrecondition;
    } catch (const EnumerationCapError& e) {
        err << "error: " << e.what() << '\n';
        return kEnumerationCap;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kFailure;
}

} // namespace repmeta::cli
