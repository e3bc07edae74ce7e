#ifndef REPMETA_REPLICABILITY_HPP
#define REPMETA_REPLICABILITY_HPP

#include "repmeta/meta.hpp"
#include "repmeta/study.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace repmeta {

/// Replicability analysis needs at least this many studies.
inline constexpr std::size_t kMinReplicabilityStudies = 3;

struct ReplicabilityOptions
{
    /// Upper limit on C(N, u-1), the number of subset meta-analyses.
    std::uint64_t max_subsets = 1'000'000;
};

/// Result of a leave-(u-1)-out analysis. Subsets are sorted index lists into
/// the StudySet the analysis ran on.
struct RValueResult
{
    int u = 2;
    MetaModel model = MetaModel::fixed_z;
    double alpha = 0.05;
    double r_left = 0.0;
    double r_right = 0.0;
    double r_two = 0.0;
    std::vector<std::size_t> argmax_left;
    std::vector<std::size_t> argmax_right;
    MetaResult meta_left;  ///< meta-analysis on argmax_left
    MetaResult meta_right; ///< meta-analysis on argmax_right

    // Extremes of the subset confidence intervals over every subset.
    double union_low = 0.0;
    double union_high = 0.0;
    std::vector<std::size_t> union_low_source;
    std::vector<std::size_t> union_high_source;

    std::uint64_t subsets_evaluated = 0;
};

enum class IntervalMode {
    argmax_endpoints, ///< lower limit from the right-sided argmax, upper from the left-sided
    strict_union,     ///< min/max over every subset CI
};

struct SensitivityInterval
{
    double low = 0.0;  ///< analysis scale
    double high = 0.0; ///< analysis scale
    double alpha = 0.05;
    int u = 2;
    IntervalMode mode = IntervalMode::argmax_endpoints;
    Measure scale = Measure::difference;
    std::vector<std::size_t> source_low;
    std::vector<std::size_t> source_high;

    bool contains_null() const noexcept { return low <= 0.0 && high >= 0.0; }
    /// Endpoints on the reporting scale (exp for ratio measures).
    double display_low() const noexcept;
    double display_high() const noexcept;
};

/// Max over every size-(N-u+1) subset of the subset's one-sided p-values.
/// Ties go to the lexicographically smallest subset. `alpha` only sets the
/// level of the CIs recorded for the argmax subsets.
RValueResult r_value(const StudySet& studies, int u, MetaModel model, double alpha = 0.05,
                     const ReplicabilityOptions& options = {});

/// Sensitivity interval derived from an r-value run.
SensitivityInterval sensitivity_interval(const RValueResult& rres, Measure scale,
                                         IntervalMode mode = IntervalMode::argmax_endpoints);

SensitivityInterval sensitivity_interval(const StudySet& studies, int u, MetaModel model, double alpha,
                                         IntervalMode mode = IntervalMode::argmax_endpoints,
                                         const ReplicabilityOptions& options = {});

struct LeaveOneOutRow
{
    std::size_t excluded = 0;
    std::string label;
    MetaResult meta;
};

struct LeaveOneOutReport
{
    std::vector<LeaveOneOutRow> rows;
    RValueResult rvalue; ///< u = 2
    SensitivityInterval interval;
    bool replicable = false; ///< r_two <= alpha
    std::string decision;
};

LeaveOneOutReport leave_one_out_report(const StudySet& studies, MetaModel model, double alpha,
                                       const ReplicabilityOptions& options = {});

struct BoundRow
{
    int u = 2;
    double r_value = 0.0;
    /// Studies dropped relative to the previous row's worst-case subset.
    std::vector<std::string> excluded_labels;
    /// Every study outside this row's worst-case subset.
    std::vector<std::string> cumulative_excluded;
    double interval_low = 0.0;
    double interval_high = 0.0;
};

struct ReplicabilityBound
{
    double alpha = 0.05;
    /// Largest u with r-value <= alpha; 1 when even u = 2 fails.
    int bound = 1;
    std::vector<BoundRow> trace;
};

/// Scans u = 2, 3, ... and stops at the first r-value above alpha. Throws
/// PreconditionError when the full meta-analysis is not significant.
ReplicabilityBound replicability_bound(const StudySet& studies, MetaModel model, double alpha,
                                       const ReplicabilityOptions& options = {});

} // namespace repmeta

#endif // REPMETA_REPLICABILITY_HPP
