#ifndef REPMETA_REPORT_HPP
#define REPMETA_REPORT_HPP

#include "repmeta/ingest.hpp"
#include "repmeta/meta.hpp"
#include "repmeta/multiplicity.hpp"
#include "repmeta/replicability.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace repmeta {

/// Four significant digits ("0.03549", "2.91e-06").
std::string format_sig4(double value);

/// r-value as quoted in report sentences: four decimals with trailing zeros
/// dropped, and "< 0.0001" below the reporting floor.
std::string format_rvalue(double r);

/// "This result was replicated in more than one study (r-value = 0.0355)." or
/// the cannot-rule-out counterpart. For u > 2 the sentences speak of u studies.
std::string report_sentence(const RValueResult& rres, double alpha);

/// Everything one `analyze` run produces.
struct AnalysisReport
{
    StudySet studies;
    EffectMeasure measure = EffectMeasure::MD;
    MetaModel model = MetaModel::fixed_z;
    double alpha = 0.05;
    MetaResult meta;
    LeaveOneOutReport leave_one_out;
    RValueResult rvalue; ///< at the requested u
    SensitivityInterval interval;
    SensitivityInterval union_interval;
    std::optional<ReplicabilityBound> bound;
    std::string sentence;
    std::vector<std::string> warnings;
};

struct AnalysisRequest
{
    MetaModel model = MetaModel::fixed_z;
    double alpha = 0.05;
    int u = 2;
    bool with_bound = false;
    ReplicabilityOptions options;
};

/// Full pipeline on normalized input. Throws PreconditionError for N < 3.
AnalysisReport run_analysis(const IngestResult& input, const AnalysisRequest& request);

/// Studies outside the worst-case subset on the side of the summary effect
/// (right-sided when the summary is >= 0). These get the asterisks.
std::vector<std::size_t> excluded_studies(const RValueResult& rres, const MetaResult& full);

struct ForestPlotOptions
{
    std::string title;
    EffectMeasure measure = EffectMeasure::MD;
};

/// Forest plot as an SVG 1.1 document with fixed geometry.
std::string render_forest_plot(const StudySet& studies, const MetaResult& meta, const RValueResult& rres,
                               const ForestPlotOptions& options = {});

std::string render_forest_plot(const AnalysisReport& report);

/// Human-readable summary printed by `analyze`.
std::string format_text_report(const AnalysisReport& report);

nlohmann::ordered_json to_json(const MetaResult& meta, Measure scale);
nlohmann::ordered_json to_json(const RValueResult& rres, const StudySet& studies);
nlohmann::ordered_json to_json(const SensitivityInterval& si, const StudySet& studies);
nlohmann::ordered_json to_json(const ReplicabilityBound& bound);
nlohmann::ordered_json to_json(const AnalysisReport& report);

/// Deterministic JSON document (fixed key order, full precision).
std::string serialize_results(const AnalysisReport& report);

struct AdjustmentReport
{
    EndpointFamily family;
    AdjustMethod method;
    double alpha;
    std::vector<double> adjusted;
    std::vector<std::string> declared;
};

AdjustmentReport run_adjustment(const EndpointFamily& family, AdjustMethod method, double alpha);
std::string format_text_report(const AdjustmentReport& report);
std::string serialize_results(const AdjustmentReport& report);

} // namespace repmeta

#endif // REPMETA_REPORT_HPP
