#ifndef REPMETA_INGEST_HPP
#define REPMETA_INGEST_HPP

#include "repmeta/study.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace repmeta {

/// Reporting measure of an input row. HR, RR and OR are ratio measures.
enum class EffectMeasure { HR, RR, OR, MD };

std::string_view to_string(EffectMeasure m) noexcept;
Measure scale_of(EffectMeasure m) noexcept;

/// One row of study-level input on the reporting scale. `se` is on the
/// analysis scale (log scale for ratio measures).
struct InputRecord
{
    std::string label;
    EffectMeasure measure = EffectMeasure::MD;
    double effect = 0.0;
    std::optional<double> se;
    std::optional<double> ci_low;
    std::optional<double> ci_high;
    double ci_level = 0.95;
    std::size_t line = 0; ///< 1-based line in the source; the header is line 1
};

/// Exact CSV header names. Only label, measure and effect are mandatory, plus
/// either se or the ci_low/ci_high pair.
inline constexpr std::string_view kCsvColumns[] = {"label", "measure", "effect", "se",
                                                   "ci_low", "ci_high", "ci_level"};

/// Parse CSV. Throws InputError naming the offending line.
std::vector<InputRecord> parse_csv(std::istream& in);
std::vector<InputRecord> parse_csv_file(const std::filesystem::path& path);

/// JSON mirror of the CSV: an array of objects keyed by the CSV column names.
std::vector<InputRecord> parse_json(std::istream& in);

struct IngestResult
{
    StudySet studies;
    EffectMeasure measure = EffectMeasure::MD;
    std::vector<std::string> warnings;
};

/// Move records onto the analysis scale. Ratio effects are log-transformed;
/// a missing se is recovered from the CI width. When both se and a CI are
/// present the se is used, with a warning if they disagree by more than 5%.
IngestResult normalize(const std::vector<InputRecord>& records);

/// se implied by a CI on the reporting scale.
double se_from_ci(EffectMeasure measure, double ci_low, double ci_high, double ci_level);

/// Symmetric analysis-scale CI mapped back to the reporting scale.
std::pair<double, double> reporting_ci(const Study& study, Measure scale, double ci_level);

} // namespace repmeta

#endif // REPMETA_INGEST_HPP
