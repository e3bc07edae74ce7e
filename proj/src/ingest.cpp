#include "repmeta/ingest.hpp"

#include "repmeta/distributions.hpp"
#include "repmeta/errors.hpp"

#include "json.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <unordered_set>

namespace repmeta {

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& what)
{
    throw InputError("line " + std::to_string(line) + ": " + what);
}

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

// Split one CSV record. Double-quoted fields may contain commas and "" escapes;
// quoted newlines are not supported.
std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no)
{
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"' && trim(field).empty()) {
            field.clear();
            quoted = true;
            was_quoted = true;
        } else if (c == ',') {
            fields.push_back(was_quoted ? field : std::string(trim(field)));
            field.clear();
            was_quoted = false;
        } else {
            field += c;
        }
    }
    if (quoted) fail(line_no, "unterminated quoted field");
    fields.push_back(was_quoted ? field : std::string(trim(field)));
    return fields;
}

std::optional<double> parse_number(std::string_view text, std::string_view column, std::size_t line)
{
    text = trim(text);
    if (text.empty()) return std::nullopt;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
        fail(line, "column '" + std::string(column) + "' is not a finite number: '" + std::string(text) + "'");
    }
    return value;
}

EffectMeasure parse_measure(std::string_view text, std::size_t line)
{
    std::string upper(trim(text));
    std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
    if (upper == "HR") return EffectMeasure::HR;
    if (upper == "RR") return EffectMeasure::RR;
    if (upper == "OR") return EffectMeasure::OR;
    if (upper == "MD") return EffectMeasure::MD;
    fail(line, "unknown measure '" + std::string(text) + "' (expected HR, RR, OR or MD)");
}

void validate(const InputRecord& r)
{
    if (r.label.empty()) fail(r.line, "empty label");
    const bool ratio = scale_of(r.measure) == Measure::ratio;
    if (ratio && !(r.effect > 0.0)) fail(r.line, "ratio effect must be positive");
    if (r.se && !(*r.se > 0.0)) fail(r.line, "se must be positive");
    if (r.ci_low.has_value() != r.ci_high.has_value()) fail(r.line, "ci_low and ci_high must be given together");
    if (!r.se && !r.ci_low) fail(r.line, "either se or ci_low/ci_high is required");
    if (r.ci_low) {
        if (ratio && !(*r.ci_low > 0.0)) fail(r.line, "ratio ci_low must be positive");
        if (!(*r.ci_low < *r.ci_high)) fail(r.line, "ci_low must be below ci_high");
        if (!(*r.ci_low < r.effect && r.effect < *r.ci_high)) fail(r.line, "effect must lie strictly inside the CI");
    }
    if (!(r.ci_level > 0.0 && r.ci_level < 1.0)) fail(r.line, "ci_level must lie in (0, 1)");
}

void check_unique_labels(const std::vector<InputRecord>& records)
{
    std::unordered_set<std::string> seen;
    for (const auto& r : records) {
        if (!seen.insert(r.label).second) fail(r.line, "duplicate label '" + r.label + "'");
    }
}

} // namespace

std::string_view to_string(EffectMeasure m) noexcept
{
    switch (m) {
    case EffectMeasure::HR: return "HR";
    case EffectMeasure::RR: return "RR";
    case EffectMeasure::OR: return "OR";
    case EffectMeasure::MD: return "MD";
    }
    return "MD";
}

Measure scale_of(EffectMeasure m) noexcept
{
    return m == EffectMeasure::MD ? Measure::difference : Measure::ratio;
}

std::vector<InputRecord> parse_csv(std::istream& in)
{
    std::string line;
    std::size_t line_no = 0;
    std::map<std::string, std::size_t, std::less<>> column;

    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) break;
    }
    if (line_no == 0 || trim(line).empty()) throw InputError("line 1: missing header row");
    if (line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);

    const auto header = split_csv_line(line, line_no);
    for (std::size_t i = 0; i < header.size(); ++i) {
        const std::string& name = header[i];
        if (std::find(std::begin(kCsvColumns), std::end(kCsvColumns), name) == std::end(kCsvColumns)) {
            fail(line_no, "unknown column '" + name + "'");
        }
        if (!column.emplace(name, i).second) fail(line_no, "duplicate column '" + name + "'");
    }
    for (std::string_view required : {"label", "measure", "effect"}) {
        if (!column.contains(required)) fail(line_no, "missing required column '" + std::string(required) + "'");
    }
    const bool has_ci = column.contains("ci_low") && column.contains("ci_high");
    if (!column.contains("se") && !has_ci) fail(line_no, "missing required column 'se' (or 'ci_low' and 'ci_high')");
    if (column.contains("ci_low") != column.contains("ci_high")) {
        fail(line_no, "missing required column '" + std::string(column.contains("ci_low") ? "ci_high" : "ci_low") + "'");
    }

    std::vector<InputRecord> records;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_csv_line(line, line_no);
        if (fields.size() != header.size()) {
            fail(line_no, "expected " + std::to_string(header.size()) + " fields, found " +
                              std::to_string(fields.size()));
        }
        auto field = [&](std::string_view name) -> std::string_view {
            const auto it = column.find(name);
            return it == column.end() ? std::string_view{} : std::string_view(fields[it->second]);
        };

        InputRecord r;
        r.line = line_no;
        r.label = std::string(field("label"));
        r.measure = parse_measure(field("measure"), line_no);
        const auto effect = parse_number(field("effect"), "effect", line_no);
        if (!effect) fail(line_no, "missing effect");
        r.effect = *effect;
        r.se = parse_number(field("se"), "se", line_no);
        r.ci_low = parse_number(field("ci_low"), "ci_low", line_no);
        r.ci_high = parse_number(field("ci_high"), "ci_high", line_no);
        if (const auto level = parse_number(field("ci_level"), "ci_level", line_no)) r.ci_level = *level;
        validate(r);
        records.push_back(std::move(r));
    }
    check_unique_labels(records);
    return records;
}

std::vector<InputRecord> parse_csv_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw InputError("cannot open input file '" + path.string() + "'");
    return parse_csv(in);
}

std::vector<InputRecord> parse_json(std::istream& in)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("invalid JSON input: ") + e.what());
    }
    if (!doc.is_array()) throw InputError("JSON input must be an array of study objects");

    std::vector<InputRecord> records;
    std::size_t index = 0;
    for (const auto& obj : doc) {
        ++index;
        if (!obj.is_object()) fail(index, "study entry must be an object");
        for (const auto& [key, value] : obj.items()) {
            if (std::find(std::begin(kCsvColumns), std::end(kCsvColumns), key) == std::end(kCsvColumns)) {
                fail(index, "unknown key '" + key + "'");
            }
        }
        auto number = [&](const char* key) -> std::optional<double> {
            if (!obj.contains(key) || obj[key].is_null()) return std::nullopt;
            if (!obj[key].is_number()) fail(index, std::string("'") + key + "' must be a number");
            return obj[key].get<double>();
        };
        InputRecord r;
        r.line = index;
        if (!obj.contains("label") || !obj["label"].is_string()) fail(index, "missing string 'label'");
        if (!obj.contains("measure") || !obj["measure"].is_string()) fail(index, "missing string 'measure'");
        r.label = obj["label"].get<std::string>();
        r.measure = parse_measure(obj["measure"].get<std::string>(), index);
        const auto effect = number("effect");
        if (!effect) fail(index, "missing effect");
        r.effect = *effect;
        r.se = number("se");
        r.ci_low = number("ci_low");
        r.ci_high = number("ci_high");
        if (const auto level = number("ci_level")) r.ci_level = *level;
        validate(r);
        records.push_back(std::move(r));
    }
    check_unique_labels(records);
    return records;
}

double se_from_ci(EffectMeasure measure, double ci_low, double ci_high, double ci_level)
{
    const double z = dist::normal_quantile(0.5 * (1.0 + ci_level));
    if (scale_of(measure) == Measure::ratio) return (std::log(ci_high) - std::log(ci_low)) / (2.0 * z);
    return (ci_high - ci_low) / (2.0 * z);
}

std::pair<double, double> reporting_ci(const Study& study, Measure scale, double ci_level)
{
    const double z = dist::normal_quantile(0.5 * (1.0 + ci_level));
    const double lo = study.effect - z * study.se;
    const double hi = study.effect + z * study.se;
    if (scale == Measure::ratio) return {std::exp(lo), std::exp(hi)};
    return {lo, hi};
}

IngestResult normalize(const std::vector<InputRecord>& records)
{
    if (records.empty()) throw InputError("no studies in input");
    const EffectMeasure measure = records.front().measure;
    IngestResult out;
    out.measure = measure;

    std::vector<Study> studies;
    studies.reserve(records.size());
    for (const InputRecord& r : records) {
        if (r.measure != measure) {
            fail(r.line, "measure " + std::string(to_string(r.measure)) + " differs from " +
                             std::string(to_string(measure)) + " used by earlier rows");
        }
        validate(r);
        Study s;
        s.label = r.label;
        s.effect = scale_of(measure) == Measure::ratio ? std::log(r.effect) : r.effect;
        if (r.se) {
            s.se = *r.se;
            if (r.ci_low) {
                const double implied = se_from_ci(measure, *r.ci_low, *r.ci_high, r.ci_level);
                if (std::fabs(s.se - implied) > 0.05 * implied) {
                    std::ostringstream os;
                    os << "line " << r.line << ": se " << s.se << " differs from the CI-implied se " << implied
                       << " by more than 5%; using se";
                    out.warnings.push_back(os.str());
                }
            }
        } else {
            s.se = se_from_ci(measure, *r.ci_low, *r.ci_high, r.ci_level);
        }
        studies.push_back(std::move(s));
    }
    out.studies = StudySet(std::move(studies), scale_of(measure));
    return out;
}

} // namespace repmeta
