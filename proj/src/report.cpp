#include "repmeta/report.hpp"

#include "repmeta/distributions.hpp"
#include "repmeta/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>

namespace repmeta {

namespace {

using nlohmann::ordered_json;

constexpr double kReportingFloor = 1e-4;

std::string xml_escape(std::string_view text)
{
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out += c;
        }
    }
    return out;
}

double display(double v, Measure scale)
{
    return scale == Measure::ratio ? std::exp(v) : v;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep)
{
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

ordered_json json_number(double v)
{
    if (std::isfinite(v)) return v;
    return nullptr;
}

// Fixed-layout geometry for the forest plot.
struct Layout
{
    static constexpr double width = 960.0;
    static constexpr double asterisk_x = 10.0;
    static constexpr double label_x = 24.0;
    static constexpr double plot_x0 = 300.0;
    static constexpr double plot_x1 = 640.0;
    static constexpr double text_x = 660.0;
    static constexpr double weight_x = 940.0;
    static constexpr double title_y = 28.0;
    static constexpr double header_y = 56.0;
    static constexpr double first_row_y = 84.0;
    static constexpr double row_height = 26.0;
    static constexpr double max_marker = 16.0;
    static constexpr double min_marker = 3.0;
};

std::vector<double> axis_ticks(double lo, double hi, Measure scale)
{
    std::vector<double> ticks; // analysis scale
    if (scale == Measure::ratio) {
        static constexpr double fine[] = {0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0,
                                          2.0,   5.0,   10.0,  20.0, 50.0, 100., 200., 500., 1000.};
        static constexpr double coarse[] = {0.001, 0.01, 0.1, 1.0, 10.0, 100.0, 1000.0};
        for (double c : fine) {
            if (std::log(c) >= lo && std::log(c) <= hi) ticks.push_back(std::log(c));
        }
        if (ticks.size() > 7) {
            ticks.clear();
            for (double c : coarse) {
                if (std::log(c) >= lo && std::log(c) <= hi) ticks.push_back(std::log(c));
            }
        }
        return ticks;
    }
    const double raw = (hi - lo) / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        step = m * mag;
        if (step >= raw) break;
    }
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-12 * step; t += step) {
        ticks.push_back(std::fabs(t) < 1e-12 * step ? 0.0 : t);
    }
    return ticks;
}

void require_finite(double v, std::string_view what)
{
    if (!std::isfinite(v)) throw PreconditionError("forest plot: non-finite coordinate for " + std::string(what));
}

} // namespace

std::string format_sig4(double value)
{
    return fmt::format("{:.4g}", value);
}

std::string format_rvalue(double r)
{
    if (r < kReportingFloor) return "< 0.0001";
    std::string s = fmt::format("{:.4f}", r);
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
    return s;
}

std::string report_sentence(const RValueResult& rres, double alpha)
{
    const std::string value =
        rres.r_two < kReportingFloor ? "r-value < 0.0001" : "r-value = " + format_rvalue(rres.r_two);
    if (rres.r_two <= alpha) {
        if (rres.u == 2) return "This result was replicated in more than one study (" + value + ").";
        return fmt::format("This result was replicated in at least {} studies ({}).", rres.u, value);
    }
    if (rres.u == 2) {
        return "We cannot rule out the possibility that this result is based on a single study (" + value + ").";
    }
    return fmt::format("We cannot rule out the possibility that this result is based on fewer than {} studies ({}).",
                       rres.u, value);
}

std::vector<std::size_t> excluded_studies(const RValueResult& rres, const MetaResult& full)
{
    const auto& kept = full.summary >= 0.0 ? rres.argmax_right : rres.argmax_left;
    const std::size_t n = kept.size() + static_cast<std::size_t>(rres.u) - 1;
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::binary_search(kept.begin(), kept.end(), i)) out.push_back(i);
    }
    return out;
}

AnalysisReport run_analysis(const IngestResult& input, const AnalysisRequest& request)
{
    const StudySet& studies = input.studies;
    if (studies.size() < kMinReplicabilityStudies) {
        throw PreconditionError("replicability analysis requires at least three studies (got " +
                                std::to_string(studies.size()) + ")");
    }
    AnalysisReport report;
    report.studies = studies;
    report.measure = input.measure;
    report.model = request.model;
    report.alpha = request.alpha;
    report.warnings = input.warnings;
    report.meta = meta_analyze(studies, request.model, request.alpha);
    report.leave_one_out = leave_one_out_report(studies, request.model, request.alpha, request.options);
    report.rvalue = request.u == 2 ? report.leave_one_out.rvalue
                                   : r_value(studies, request.u, request.model, request.alpha, request.options);
    report.interval = sensitivity_interval(report.rvalue, studies.measure());
    report.union_interval = sensitivity_interval(report.rvalue, studies.measure(), IntervalMode::strict_union);
    report.sentence = report_sentence(report.rvalue, request.alpha);
    if (request.with_bound) {
        report.bound = replicability_bound(studies, request.model, request.alpha, request.options);
    }
    const std::size_t smallest_subset = studies.size() - static_cast<std::size_t>(request.u) + 1;
    for (std::size_t n : {smallest_subset, studies.size() - 1}) {
        const std::string w = small_sample_warning(n, request.model);
        if (!w.empty() && std::find(report.warnings.begin(), report.warnings.end(), w) == report.warnings.end()) {
            report.warnings.push_back(w);
        }
    }
    return report;
}

std::string render_forest_plot(const StudySet& studies, const MetaResult& meta, const RValueResult& rres,
                               const ForestPlotOptions& options)
{
    using L = Layout;
    const std::size_t n = studies.size();
    if (n == 0) throw PreconditionError("forest plot: no studies");
    const Measure scale = studies.measure();
    const double z = dist::normal_quantile(1.0 - 0.5 * meta.alpha);

    require_finite(meta.summary, "summary");
    require_finite(meta.ci_low, "summary CI");
    require_finite(meta.ci_high, "summary CI");
    if (!(meta.ci_high > meta.ci_low)) throw PreconditionError("forest plot: zero-width summary CI");

    double lo = std::min({0.0, meta.ci_low});
    double hi = std::max({0.0, meta.ci_high});
    for (const Study& s : studies.studies()) {
        require_finite(s.effect - z * s.se, s.label);
        require_finite(s.effect + z * s.se, s.label);
        if (!(s.se * z > 0.0)) throw PreconditionError("forest plot: zero-width CI for " + s.label);
        lo = std::min(lo, s.effect - z * s.se);
        hi = std::max(hi, s.effect + z * s.se);
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
    auto x_of = [&](double v) { return L::plot_x0 + (v - lo) / (hi - lo) * (L::plot_x1 - L::plot_x0); };

    const std::vector<double> weights = meta_weights(studies.ses(), meta.tau2);
    const double w_max = *std::max_element(weights.begin(), weights.end());
    double w_sum = 0.0;
    for (double w : weights) w_sum += w;

    const std::vector<std::size_t> excluded = excluded_studies(rres, meta);
    const SensitivityInterval si = sensitivity_interval(rres, scale);

    const double summary_y = L::first_row_y + static_cast<double>(n) * L::row_height + 0.5 * L::row_height;
    const double axis_y = summary_y + L::row_height;
    const double height = axis_y + 130.0;

    std::string svg;
    auto out = std::back_inserter(svg);
    fmt::format_to(out, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    fmt::format_to(out,
                   "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{:.0f}\" height=\"{:.0f}\" "
                   "viewBox=\"0 0 {:.0f} {:.0f}\" font-family=\"sans-serif\" font-size=\"12\">\n",
                   L::width, height, L::width, height);
    fmt::format_to(out, "<rect x=\"0\" y=\"0\" width=\"{:.0f}\" height=\"{:.0f}\" fill=\"white\"/>\n", L::width,
                   height);
    if (!options.title.empty()) {
        fmt::format_to(out, "<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"16\" font-weight=\"bold\">{}</text>\n",
                       L::label_x, L::title_y, xml_escape(options.title));
    }
    const std::string measure_name(to_string(options.measure));
    fmt::format_to(out, "<text x=\"{:.2f}\" y=\"{:.2f}\" font-weight=\"bold\">Study</text>\n", L::label_x,
                   L::header_y);
    fmt::format_to(out, "<text x=\"{:.2f}\" y=\"{:.2f}\" font-weight=\"bold\">{} [{:.0f}% CI]</text>\n", L::text_x,
                   L::header_y, measure_name, 100.0 * (1.0 - meta.alpha));
    fmt::format_to(out, "<text x=\"{:.2f}\" y=\"{:.2f}\" font-weight=\"bold\" text-anchor=\"end\">Weight</text>\n",
                   L::weight_x, L::header_y);

    // Null reference line.
    fmt::format_to(out,
                   "<line class=\"null\" x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\" "
                   "stroke-dasharray=\"4,3\"/>\n",
                   x_of(0.0), L::header_y + 8.0, axis_y);

    for (std::size_t i = 0; i < n; ++i) {
        const Study& s = studies[i];
        const double y = L::first_row_y + static_cast<double>(i) * L::row_height;
        const double c_lo = s.effect - z * s.se;
        const double c_hi = s.effect + z * s.se;
        const double side = std::max(L::min_marker, L::max_marker * std::sqrt(weights[i] / w_max));
        fmt::format_to(out, "<g class=\"study\">\n");
        if (std::binary_search(excluded.begin(), excluded.end(), i)) {
            fmt::format_to(out, "<text class=\"excluded\" x=\"{:.2f}\" y=\"{:.2f}\" font-weight=\"bold\">*</text>\n",
                           L::asterisk_x, y + 4.0);
        }
        fmt::format_to(out, "<text x=\"{:.2f}\" y=\"{:.2f}\">{}</text>\n", L::label_x, y + 4.0, xml_escape(s.label));
        fmt::format_to(out,
                       "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"black\"/>\n", x_of(c_lo),
                       y, x_of(c_hi), y);
        fmt::format_to(out, "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"#1f4e79\"/>\n",
                       x_of(s.effect) - 0.5 * side, y - 0.5 * side, side, side);
        fmt::format_to(out, "<text x=\"{:.2f}\" y=\"{:.2f}\">{:.2f} [{:.2f}, {:.2f}]</text>\n", L::text_x, y + 4.0,
                       display(s.effect, scale), display(c_lo, scale), display(c_hi, scale));
        fmt::format_to(out, "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{:.1f}%</text>\n", L::weight_x,
                       y + 4.0, 100.0 * weights[i] / w_sum);
        fmt::format_to(out, "</g>\n");
    }

    fmt::format_to(out, "<g class=\"summary\">\n");
    fmt::format_to(out, "<text x=\"{:.2f}\" y=\"{:.2f}\" font-weight=\"bold\">Total ({})</text>\n", L::label_x,
                   summary_y + 4.0, to_string(rres.model));
    fmt::format_to(out,
                   "<polygon points=\"{:.2f},{:.2f} {:.2f},{:.2f} {:.2f},{:.2f} {:.2f},{:.2f}\" fill=\"black\"/>\n",
                   x_of(meta.ci_low), summary_y, x_of(meta.summary), summary_y - 8.0, x_of(meta.ci_high), summary_y,
                   x_of(meta.summary), summary_y + 8.0);
    fmt::format_to(out, "<text x=\"{:.2f}\" y=\"{:.2f}\" font-weight=\"bold\">{:.2f} [{:.2f}, {:.2f}]</text>\n",
                   L::text_x, summary_y + 4.0, display(meta.summary, scale), display(meta.ci_low, scale),
                   display(meta.ci_high, scale));
    fmt::format_to(out, "</g>\n");

    fmt::format_to(out, "<g class=\"axis\">\n");
    fmt::format_to(out, "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"black\"/>\n",
                   L::plot_x0, axis_y, L::plot_x1, axis_y);
    for (double t : axis_ticks(lo, hi, scale)) {
        fmt::format_to(out, "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>\n",
                       x_of(t), axis_y, axis_y + 5.0);
        fmt::format_to(out, "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{:g}</text>\n", x_of(t),
                       axis_y + 18.0, display(t, scale));
    }
    fmt::format_to(out, "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}{}</text>\n",
                   0.5 * (L::plot_x0 + L::plot_x1), axis_y + 36.0, measure_name,
                   scale == Measure::ratio ? " (log scale)" : "");
    fmt::format_to(out, "</g>\n");

    const std::string rtext =
        rres.r_two < kReportingFloor ? "r-value &lt; 0.0001" : "r-value = " + format_sig4(rres.r_two);
    fmt::format_to(out, "<g class=\"annotation\">\n");
    fmt::format_to(out, "<text class=\"rvalue\" x=\"{:.2f}\" y=\"{:.2f}\" font-weight=\"bold\">{} (u = {})</text>\n",
                   L::label_x, axis_y + 64.0, rtext, rres.u);
    fmt::format_to(out, "<text x=\"{:.2f}\" y=\"{:.2f}\">Sensitivity interval [{:.3f}, {:.3f}]</text>\n", L::label_x,
                   axis_y + 84.0, si.display_low(), si.display_high());
    fmt::format_to(out,
                   "<text x=\"{:.2f}\" y=\"{:.2f}\">* excluded from the worst-case subset for the r-value</text>\n",
                   L::label_x, axis_y + 104.0);
    fmt::format_to(out, "</g>\n");
    fmt::format_to(out, "</svg>\n");
    return svg;
}

std::string render_forest_plot(const AnalysisReport& report)
{
    ForestPlotOptions options;
    options.measure = report.measure;
    return render_forest_plot(report.studies, report.meta, report.rvalue, options);
}

std::string format_text_report(const AnalysisReport& r)
{
    const Measure scale = r.studies.measure();
    const std::string measure(to_string(r.measure));
    std::string s;
    auto out = std::back_inserter(s);

    fmt::format_to(out, "Meta-analysis: model {}, {} studies, measure {}, alpha {}\n", to_string(r.model),
                   r.studies.size(), measure, format_sig4(r.alpha));
    fmt::format_to(out, "  summary {} {} [{}, {}]\n", measure, format_sig4(display(r.meta.summary, scale)),
                   format_sig4(display(r.meta.ci_low, scale)), format_sig4(display(r.meta.ci_high, scale)));
    fmt::format_to(out, "  analysis scale: estimate {} se {} tau2 {} Q {}\n", format_sig4(r.meta.summary),
                   format_sig4(r.meta.se_summary), format_sig4(r.meta.tau2), format_sig4(r.meta.q_statistic));
    fmt::format_to(out, "  p two-sided {}  left {}  right {}{}\n", format_sig4(r.meta.p_two),
                   format_sig4(r.meta.p_left), format_sig4(r.meta.p_right),
                   std::isinf(r.meta.df) ? std::string() : fmt::format("  (t, df {})", r.meta.df));

    fmt::format_to(out, "\nLeave-one-out meta-analyses\n");
    fmt::format_to(out, "  {:<24} {:>10} {:>10} {:>10} {:>10}\n", "excluded", "summary", "ci_low", "ci_high",
                   "p_two");
    for (const auto& row : r.leave_one_out.rows) {
        fmt::format_to(out, "  {:<24} {:>10} {:>10} {:>10} {:>10}\n", row.label,
                       format_sig4(display(row.meta.summary, scale)), format_sig4(display(row.meta.ci_low, scale)),
                       format_sig4(display(row.meta.ci_high, scale)), format_sig4(row.meta.p_two));
    }
    fmt::format_to(out, "  decision (u = 2): {}\n", r.leave_one_out.decision);

    const auto excluded = excluded_studies(r.rvalue, r.meta);
    fmt::format_to(out, "\nr-value (u = {}): {}  [left {}, right {}]\n", r.rvalue.u, format_sig4(r.rvalue.r_two),
                   format_sig4(r.rvalue.r_left), format_sig4(r.rvalue.r_right));
    fmt::format_to(out, "  worst-case subset excludes: {}\n", join(r.studies.labels(excluded), ", "));
    fmt::format_to(out, "  sensitivity interval ({}%): [{}, {}]\n", format_sig4(100.0 * (1.0 - r.alpha)),
                   format_sig4(r.interval.display_low()), format_sig4(r.interval.display_high()));
    fmt::format_to(out, "  union of subset CIs:      [{}, {}]\n", format_sig4(r.union_interval.display_low()),
                   format_sig4(r.union_interval.display_high()));
    fmt::format_to(out, "\n{}\n", r.sentence);

    if (r.bound) {
        fmt::format_to(out, "\nReplicability lower bound at alpha {}: {} studies\n", format_sig4(r.bound->alpha),
                       r.bound->bound);
        fmt::format_to(out, "  {:>3} {:>10} {:>12} {:>12}  {}\n", "u", "r-value", "interval_lo", "interval_hi",
                       "excluded study");
        for (const BoundRow& row : r.bound->trace) {
            fmt::format_to(out, "  {:>3} {:>10} {:>12} {:>12}  {}\n", row.u, format_sig4(row.r_value),
                           format_sig4(display(row.interval_low, scale)),
                           format_sig4(display(row.interval_high, scale)), join(row.excluded_labels, ", "));
        }
    }
    for (const auto& w : r.warnings) fmt::format_to(out, "warning: {}\n", w);
    return s;
}

ordered_json to_json(const MetaResult& m, Measure scale)
{
    ordered_json j;
    j["n_studies"] = m.n_studies;
    j["summary"] = m.summary;
    j["se_summary"] = m.se_summary;
    j["tau2"] = m.tau2;
    j["q_statistic"] = m.q_statistic;
    j["statistic"] = json_number(m.statistic);
    j["df"] = json_number(m.df);
    j["p_left"] = m.p_left;
    j["p_right"] = m.p_right;
    j["p_two"] = m.p_two;
    j["alpha"] = m.alpha;
    j["ci_low"] = m.ci_low;
    j["ci_high"] = m.ci_high;
    j["display"] = {{"summary", display(m.summary, scale)},
                    {"ci_low", display(m.ci_low, scale)},
                    {"ci_high", display(m.ci_high, scale)}};
    return j;
}

ordered_json to_json(const RValueResult& r, const StudySet& studies)
{
    ordered_json j;
    j["u"] = r.u;
    j["model"] = std::string(to_string(r.model));
    j["r_left"] = r.r_left;
    j["r_right"] = r.r_right;
    j["r_two"] = r.r_two;
    j["argmax_left"] = studies.labels(r.argmax_left);
    j["argmax_right"] = studies.labels(r.argmax_right);
    j["subsets_evaluated"] = r.subsets_evaluated;
    return j;
}

ordered_json to_json(const SensitivityInterval& si, const StudySet& studies)
{
    ordered_json j;
    j["mode"] = si.mode == IntervalMode::strict_union ? "strict_union" : "argmax_endpoints";
    j["u"] = si.u;
    j["alpha"] = si.alpha;
    j["low"] = si.low;
    j["high"] = si.high;
    j["display_low"] = si.display_low();
    j["display_high"] = si.display_high();
    j["contains_null"] = si.contains_null();
    j["source_low"] = studies.labels(si.source_low);
    j["source_high"] = studies.labels(si.source_high);
    return j;
}

ordered_json to_json(const ReplicabilityBound& b)
{
    ordered_json j;
    j["alpha"] = b.alpha;
    j["bound"] = b.bound;
    ordered_json rows = ordered_json::array();
    for (const BoundRow& row : b.trace) {
        ordered_json jr;
        jr["u"] = row.u;
        jr["r_value"] = row.r_value;
        jr["excluded"] = row.excluded_labels;
        jr["cumulative_excluded"] = row.cumulative_excluded;
        jr["interval_low"] = row.interval_low;
        jr["interval_high"] = row.interval_high;
        rows.push_back(std::move(jr));
    }
    j["trace"] = std::move(rows);
    return j;
}

ordered_json to_json(const AnalysisReport& r)
{
    const Measure scale = r.studies.measure();
    ordered_json j;
    j["measure"] = std::string(to_string(r.measure));
    j["scale"] = scale == Measure::ratio ? "log" : "identity";
    j["model"] = std::string(to_string(r.model));
    j["alpha"] = r.alpha;

    ordered_json studies = ordered_json::array();
    for (const Study& s : r.studies.studies()) {
        studies.push_back(ordered_json{{"label", s.label}, {"effect", s.effect}, {"se", s.se}});
    }
    j["studies"] = std::move(studies);
    j["meta"] = to_json(r.meta, scale);

    ordered_json loo;
    ordered_json rows = ordered_json::array();
    for (const auto& row : r.leave_one_out.rows) {
        ordered_json jr;
        jr["excluded"] = row.label;
        jr["summary"] = row.meta.summary;
        jr["se_summary"] = row.meta.se_summary;
        jr["tau2"] = row.meta.tau2;
        jr["ci_low"] = row.meta.ci_low;
        jr["ci_high"] = row.meta.ci_high;
        jr["p_left"] = row.meta.p_left;
        jr["p_right"] = row.meta.p_right;
        jr["p_two"] = row.meta.p_two;
        rows.push_back(std::move(jr));
    }
    loo["rows"] = std::move(rows);
    loo["r_value"] = to_json(r.leave_one_out.rvalue, r.studies);
    loo["replicable"] = r.leave_one_out.replicable;
    loo["decision"] = r.leave_one_out.decision;
    j["leave_one_out"] = std::move(loo);

    j["r_value"] = to_json(r.rvalue, r.studies);
    j["excluded_studies"] = r.studies.labels(excluded_studies(r.rvalue, r.meta));
    j["sensitivity_interval"] = to_json(r.interval, r.studies);
    j["union_interval"] = to_json(r.union_interval, r.studies);
    j["sentence"] = r.sentence;
    j["bound"] = r.bound ? to_json(*r.bound) : ordered_json(nullptr);
    j["warnings"] = r.warnings;
    return j;
}

std::string serialize_results(const AnalysisReport& report)
{
    return to_json(report).dump(2) + "\n";
}

AdjustmentReport run_adjustment(const EndpointFamily& family, AdjustMethod method, double alpha)
{
    if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must lie in (0, 1)");
    auto adjusted = adjust(family, method);
    auto declared = declare(family, adjusted, alpha);
    return {family, method, alpha, std::move(adjusted), std::move(declared)};
}

std::string format_text_report(const AdjustmentReport& r)
{
    std::string s;
    auto out = std::back_inserter(s);
    fmt::format_to(out, "Adjusted r-values ({}, M = {}, alpha {})\n", to_string(r.method), r.family.size(),
                   format_sig4(r.alpha));
    fmt::format_to(out, "  {:<12} {:>10} {:>10}\n", "endpoint", "r-value", "adjusted");
    for (std::size_t i = 0; i < r.family.size(); ++i) {
        const auto& e = r.family.entries()[i];
        fmt::format_to(out, "  {:<12} {:>10} {:>10}{}\n", e.label, format_sig4(e.r_value), format_sig4(r.adjusted[i]),
                       r.adjusted[i] <= r.alpha ? "  *" : "");
    }
    fmt::format_to(out, "Replicated: {}\n", r.declared.empty() ? "none" : join(r.declared, ", "));
    return s;
}

std::string serialize_results(const AdjustmentReport& r)
{
    ordered_json j;
    j["method"] = std::string(to_string(r.method));
    j["alpha"] = r.alpha;
    ordered_json entries = ordered_json::array();
    for (std::size_t i = 0; i < r.family.size(); ++i) {
        const auto& e = r.family.entries()[i];
        entries.push_back(ordered_json{{"endpoint", e.label}, {"r_value", e.r_value}, {"adjusted", r.adjusted[i]}});
    }
    j["endpoints"] = std::move(entries);
    j["declared"] = r.declared;
    return j.dump(2) + "\n";
}

} // namespace repmeta
