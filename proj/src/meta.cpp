#include "repmeta/meta.hpp"

#include "repmeta/distributions.hpp"
#include "repmeta/errors.hpp"

#include <algorithm>
#include <cmath>

namespace repmeta {

namespace {

void check_alpha(double alpha)
{
    if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must lie in (0, 1)");
}

void check_inputs(std::span<const double> effects, std::span<const double> ses)
{
    if (effects.size() != ses.size()) throw InputError("invalid study: effect/se length mismatch");
    if (effects.empty()) throw PreconditionError("no studies");
    for (std::size_t i = 0; i < effects.size(); ++i) {
        if (!std::isfinite(effects[i]) || !std::isfinite(ses[i]) || !(ses[i] > 0.0)) {
            throw InputError("invalid study at position " + std::to_string(i + 1));
        }
    }
}

// Two-sided critical value of the reference distribution. Subset enumeration
// calls this with the same (alpha, df) many times in a row, so remember the
// last answer.
double critical_value(double alpha, double df)
{
    thread_local double last_alpha = -1.0;
    thread_local double last_df = -1.0;
    thread_local double last_value = 0.0;
    if (alpha == last_alpha && df == last_df) return last_value;
    const double value = std::isinf(df) ? dist::normal_quantile(1.0 - 0.5 * alpha)
                                        : dist::t_quantile(1.0 - 0.5 * alpha, df);
    last_alpha = alpha;
    last_df = df;
    last_value = value;
    return value;
}

// Fill p-values and CI from summary, se and the reference distribution.
void finish(MetaResult& r)
{
    const double crit = critical_value(r.alpha, r.df);
    if (r.se_summary > 0.0) {
        r.statistic = r.summary / r.se_summary;
        if (std::isinf(r.df)) {
            r.p_left = dist::normal_cdf(r.statistic);
            r.p_right = dist::normal_cdf(-r.statistic);
        } else {
            r.p_left = dist::t_cdf(r.statistic, r.df);
            r.p_right = dist::t_cdf(-r.statistic, r.df);
        }
    } else {
        // Hartung-Knapp variance collapses when every effect is identical:
        // the statistic is +-infinity (or 0/0 at a zero summary).
        if (r.summary > 0.0) {
            r.statistic = std::numeric_limits<double>::infinity();
            r.p_left = 1.0;
            r.p_right = 0.0;
        } else if (r.summary < 0.0) {
            r.statistic = -std::numeric_limits<double>::infinity();
            r.p_left = 0.0;
            r.p_right = 1.0;
        } else {
            r.statistic = 0.0;
            r.p_left = 0.5;
            r.p_right = 0.5;
        }
    }
    r.p_two = std::min(1.0, 2.0 * std::min(r.p_left, r.p_right));
    r.ci_low = r.summary - crit * r.se_summary;
    r.ci_high = r.summary + crit * r.se_summary;
}

struct WeightedMean
{
    double mean;
    double weight_sum;
};

WeightedMean weighted_mean(std::span<const double> effects, std::span<const double> ses, double tau2)
{
    // Centred on the first effect so identical effects give that effect exactly.
    const double origin = effects[0];
    double sw = 0.0;
    double swx = 0.0;
    for (std::size_t i = 0; i < effects.size(); ++i) {
        const double w = 1.0 / (ses[i] * ses[i] + tau2);
        sw += w;
        swx += w * (effects[i] - origin);
    }
    return {origin + swx / sw, sw};
}

} // namespace

std::string_view to_string(MetaModel model) noexcept
{
    switch (model) {
    case MetaModel::fixed_z: return "fixed";
    case MetaModel::random_z: return "random-z";
    case MetaModel::random_t: return "random-t";
    }
    return "fixed";
}

MetaModel parse_model(std::string_view name)
{
    if (name == "fixed") return MetaModel::fixed_z;
    if (name == "random-z") return MetaModel::random_z;
    if (name == "random-t") return MetaModel::random_t;
    throw InputError("unknown model '" + std::string(name) + "' (expected fixed, random-z or random-t)");
}

std::size_t min_studies(MetaModel model) noexcept
{
    return model == MetaModel::fixed_z ? 1 : 2;
}

std::string small_sample_warning(std::size_t n, MetaModel model)
{
    if (model == MetaModel::random_t && n == 2) {
        return "random-t meta-analysis of 2 studies uses a t reference with 1 degree of freedom";
    }
    return {};
}

std::vector<double> meta_weights(std::span<const double> ses, double tau2)
{
    std::vector<double> w;
    w.reserve(ses.size());
    for (double se : ses) w.push_back(1.0 / (se * se + tau2));
    return w;
}

double cochran_q(std::span<const double> effects, std::span<const double> ses)
{
    check_inputs(effects, ses);
    const WeightedMean fixed = weighted_mean(effects, ses, 0.0);
    double q = 0.0;
    for (std::size_t i = 0; i < effects.size(); ++i) {
        const double d = effects[i] - fixed.mean;
        q += d * d / (ses[i] * ses[i]);
    }
    return q;
}

double dersimonian_laird_tau2(std::span<const double> effects, std::span<const double> ses)
{
    if (effects.size() < 2) throw PreconditionError("tau2 undefined: at least 2 studies required");
    const double q = cochran_q(effects, ses);
    double sw = 0.0;
    double sw2 = 0.0;
    for (double se : ses) {
        const double w = 1.0 / (se * se);
        sw += w;
        sw2 += w * w;
    }
    const double df = static_cast<double>(effects.size() - 1);
    if (q <= df) return 0.0;
    return (q - df) / (sw - sw2 / sw);
}

double dersimonian_laird_tau2(const StudySet& studies)
{
    return dersimonian_laird_tau2(studies.effects(), studies.ses());
}

MetaResult fixed_effect_meta(std::span<const double> effects, std::span<const double> ses, double alpha)
{
    check_alpha(alpha);
    check_inputs(effects, ses);
    const WeightedMean m = weighted_mean(effects, ses, 0.0);
    MetaResult r;
    r.alpha = alpha;
    r.n_studies = effects.size();
    r.summary = m.mean;
    r.se_summary = 1.0 / std::sqrt(m.weight_sum);
    r.tau2 = 0.0;
    if (effects.size() >= 2) r.q_statistic = cochran_q(effects, ses);
    finish(r);
    return r;
}

MetaResult fixed_effect_meta(const StudySet& studies, double alpha)
{
    return fixed_effect_meta(studies.effects(), studies.ses(), alpha);
}

MetaResult random_effects_meta(std::span<const double> effects, std::span<const double> ses, MetaModel model,
                               double alpha)
{
    if (model == MetaModel::fixed_z) throw std::invalid_argument("random_effects_meta: fixed model requested");
    check_alpha(alpha);
    check_inputs(effects, ses);
    if (effects.size() < 2) {
        throw PreconditionError("random-effects meta-analysis needs at least 2 studies (tau2 undefined)");
    }
    MetaResult r;
    r.alpha = alpha;
    r.n_studies = effects.size();
    r.q_statistic = cochran_q(effects, ses);
    r.tau2 = dersimonian_laird_tau2(effects, ses);
    const WeightedMean m = weighted_mean(effects, ses, r.tau2);
    r.summary = m.mean;
    if (model == MetaModel::random_z) {
        r.se_summary = 1.0 / std::sqrt(m.weight_sum);
    } else {
        double ss = 0.0;
        for (std::size_t i = 0; i < effects.size(); ++i) {
            const double d = effects[i] - m.mean;
            ss += d * d / (ses[i] * ses[i] + r.tau2);
        }
        const double n1 = static_cast<double>(effects.size() - 1);
        r.se_summary = std::sqrt(ss / (n1 * m.weight_sum));
        r.df = n1;
    }
    finish(r);
    return r;
}

MetaResult random_effects_meta(const StudySet& studies, MetaModel model, double alpha)
{
    return random_effects_meta(studies.effects(), studies.ses(), model, alpha);
}

MetaResult meta_analyze(std::span<const double> effects, std::span<const double> ses, MetaModel model,
                        double alpha)
{
    if (model == MetaModel::fixed_z) return fixed_effect_meta(effects, ses, alpha);
    return random_effects_meta(effects, ses, model, alpha);
}

MetaResult meta_analyze(const StudySet& studies, MetaModel model, double alpha)
{
    return meta_analyze(studies.effects(), studies.ses(), model, alpha);
}

} // namespace repmeta
