#include "repmeta/replicability.hpp"

#include "repmeta/errors.hpp"
#include "repmeta/subsets.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <sstream>

namespace repmeta {

namespace {

std::string describe_subset(const StudySet& studies, const std::vector<std::size_t>& subset)
{
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < subset.size(); ++i) {
        if (i) os << ", ";
        os << studies[subset[i]].label;
    }
    os << '}';
    return os.str();
}

void check_r_value_preconditions(const StudySet& studies, int u, MetaModel model,
                                 const ReplicabilityOptions& options)
{
    const std::size_t n = studies.size();
    if (n < kMinReplicabilityStudies) {
        throw PreconditionError("replicability analysis requires at least three studies (got " +
                                std::to_string(n) + ")");
    }
    if (u < 2 || static_cast<std::size_t>(u) > n) {
        throw PreconditionError("u must lie in [2, " + std::to_string(n) + "] (got " + std::to_string(u) + ")");
    }
    const std::size_t subset_size = n - static_cast<std::size_t>(u) + 1;
    if (subset_size < min_studies(model)) {
        throw PreconditionError("u = " + std::to_string(u) + " leaves " + std::to_string(subset_size) +
                                "-study subsets; the " + std::string(to_string(model)) + " model needs at least " +
                                std::to_string(min_studies(model)));
    }
    const std::uint64_t count = binomial(n, static_cast<std::size_t>(u) - 1);
    if (count > options.max_subsets) {
        throw EnumerationCapError("u = " + std::to_string(u) + " requires " + std::to_string(count) +
                                  " subset meta-analyses, above the cap of " + std::to_string(options.max_subsets) +
                                  "; lower u");
    }
}

std::vector<std::size_t> set_difference(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b)
{
    std::vector<std::size_t> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::vector<std::size_t> complement(std::size_t n, const std::vector<std::size_t>& subset)
{
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    return set_difference(all, subset);
}

} // namespace

double SensitivityInterval::display_low() const noexcept
{
    return scale == Measure::ratio ? std::exp(low) : low;
}

double SensitivityInterval::display_high() const noexcept
{
    return scale == Measure::ratio ? std::exp(high) : high;
}

RValueResult r_value(const StudySet& studies, int u, MetaModel model, double alpha,
                     const ReplicabilityOptions& options)
{
    if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must lie in (0, 1)");
    check_r_value_preconditions(studies, u, model, options);

    const std::size_t n = studies.size();
    const std::size_t k = n - static_cast<std::size_t>(u) + 1;
    const auto effects = studies.effects();
    const auto ses = studies.ses();

    RValueResult out;
    out.u = u;
    out.model = model;
    out.alpha = alpha;
    out.r_left = -1.0;
    out.r_right = -1.0;

    std::vector<double> sub_effects(k);
    std::vector<double> sub_ses(k);
    SubsetEnumerator subsets(n, k);
    do {
        const auto& idx = subsets.current();
        for (std::size_t j = 0; j < k; ++j) {
            sub_effects[j] = effects[idx[j]];
            sub_ses[j] = ses[idx[j]];
        }
        MetaResult m;
        try {
            m = meta_analyze(sub_effects, sub_ses, model, alpha);
        } catch (const PreconditionError& e) {
            throw PreconditionError(std::string(e.what()) + " [subset " + describe_subset(studies, idx) + "]");
        } catch (const InputError& e) {
            throw InputError(std::string(e.what()) + " [subset " + describe_subset(studies, idx) + "]");
        }
        // Strict comparisons keep the first (lexicographically smallest) subset on ties.
        if (m.p_left > out.r_left) {
            out.r_left = m.p_left;
            out.argmax_left = idx;
            out.meta_left = m;
        }
        if (m.p_right > out.r_right) {
            out.r_right = m.p_right;
            out.argmax_right = idx;
            out.meta_right = m;
        }
        if (out.subsets_evaluated == 0 || m.ci_low < out.union_low) {
            out.union_low = m.ci_low;
            out.union_low_source = idx;
        }
        if (out.subsets_evaluated == 0 || m.ci_high > out.union_high) {
            out.union_high = m.ci_high;
            out.union_high_source = idx;
        }
        ++out.subsets_evaluated;
    } while (subsets.next());

    out.r_two = std::min(1.0, 2.0 * std::min(out.r_left, out.r_right));
    return out;
}

SensitivityInterval sensitivity_interval(const RValueResult& rres, Measure scale, IntervalMode mode)
{
    SensitivityInterval si;
    si.alpha = rres.alpha;
    si.u = rres.u;
    si.mode = mode;
    si.scale = scale;
    if (mode == IntervalMode::strict_union) {
        si.low = rres.union_low;
        si.high = rres.union_high;
        si.source_low = rres.union_low_source;
        si.source_high = rres.union_high_source;
        return si;
    }
    si.low = rres.meta_right.ci_low;
    si.high = rres.meta_left.ci_high;
    si.source_low = rres.argmax_right;
    si.source_high = rres.argmax_left;
    if (si.low > si.high) {
        // The two argmax subsets can have disjoint CIs when their standard
        // errors differ a lot; fall back to the hull of both, which keeps the
        // null-exclusion equivalence with r_two.
        if (rres.meta_left.ci_low < si.low) {
            si.low = rres.meta_left.ci_low;
            si.source_low = rres.argmax_left;
        }
        if (rres.meta_right.ci_high > si.high) {
            si.high = rres.meta_right.ci_high;
            si.source_high = rres.argmax_right;
        }
    }
    return si;
}

SensitivityInterval sensitivity_interval(const StudySet& studies, int u, MetaModel model, double alpha,
                                         IntervalMode mode, const ReplicabilityOptions& options)
{
    return sensitivity_interval(r_value(studies, u, model, alpha, options), studies.measure(), mode);
}

LeaveOneOutReport leave_one_out_report(const StudySet& studies, MetaModel model, double alpha,
                                       const ReplicabilityOptions& options)
{
    LeaveOneOutReport report;
    report.rvalue = r_value(studies, 2, model, alpha, options);
    report.interval = sensitivity_interval(report.rvalue, studies.measure());

    const std::size_t n = studies.size();
    std::vector<double> effects;
    std::vector<double> ses;
    for (std::size_t excluded = 0; excluded < n; ++excluded) {
        effects.clear();
        ses.clear();
        for (std::size_t i = 0; i < n; ++i) {
            if (i == excluded) continue;
            effects.push_back(studies[i].effect);
            ses.push_back(studies[i].se);
        }
        report.rows.push_back({excluded, studies[excluded].label, meta_analyze(effects, ses, model, alpha)});
    }

    report.replicable = report.rvalue.r_two <= alpha;
    report.decision = report.replicable
                          ? "replicability established in at least 2 studies"
                          : "not replicable: the finding may rest on a single study";
    return report;
}

ReplicabilityBound replicability_bound(const StudySet& studies, MetaModel model, double alpha,
                                       const ReplicabilityOptions& options)
{
    if (studies.size() < kMinReplicabilityStudies) {
        throw PreconditionError("replicability analysis requires at least three studies (got " +
                                std::to_string(studies.size()) + ")");
    }
    const MetaResult full = meta_analyze(studies, model, alpha);
    if (full.p_two > alpha) {
        throw PreconditionError("meta-analysis not significant; bound undefined");
    }
    const bool right_side = full.summary > 0.0;
    const std::size_t n = studies.size();
    const int max_u = static_cast<int>(n - min_studies(model) + 1);

    ReplicabilityBound result;
    result.alpha = alpha;
    result.bound = 1;

    std::vector<std::size_t> previous(n);
    for (std::size_t i = 0; i < n; ++i) previous[i] = i;

    for (int u = 2; u <= max_u; ++u) {
        const RValueResult rres = r_value(studies, u, model, alpha, options);
        const auto& worst = right_side ? rres.argmax_right : rres.argmax_left;
        const SensitivityInterval si = sensitivity_interval(rres, studies.measure());

        BoundRow row;
        row.u = u;
        row.r_value = rres.r_two;
        row.excluded_labels = studies.labels(set_difference(previous, worst));
        row.cumulative_excluded = studies.labels(complement(n, worst));
        row.interval_low = si.low;
        row.interval_high = si.high;
        result.trace.push_back(std::move(row));
        previous = worst;

        if (rres.r_two > alpha) break;
        result.bound = u;
    }
    return result;
}

} // namespace repmeta
