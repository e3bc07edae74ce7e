#ifndef REPMETA_META_HPP
#define REPMETA_META_HPP

#include "repmeta/study.hpp"

#include <limits>
#include <span>
#include <string>
#include <string_view>

namespace repmeta {

/// Synthesis rule.
///   fixed_z  - common-effect inverse-variance z-test
///   random_z - DerSimonian-Laird tau^2, z-test on the re-weighted mean
///   random_t - same weights, Hartung-Knapp variance, t with N-1 df
enum class MetaModel { fixed_z, random_z, random_t };

/// CLI spelling: "fixed", "random-z", "random-t".
std::string_view to_string(MetaModel model) noexcept;

/// Inverse of to_string. Throws InputError on an unknown name.
MetaModel parse_model(std::string_view name);

struct MetaResult
{
    double summary = 0.0;
    double se_summary = 0.0;
    double tau2 = 0.0;
    double q_statistic = 0.0;
    double statistic = 0.0; ///< summary / se_summary (z or t)
    double p_left = 0.5;
    double p_right = 0.5;
    double p_two = 1.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double alpha = 0.05;
    double df = std::numeric_limits<double>::infinity(); ///< infinity for z-based models
    std::size_t n_studies = 0;
};

/// Meta-analysis weights (1/se^2, or 1/(se^2 + tau2) for the random models).
std::vector<double> meta_weights(std::span<const double> ses, double tau2);

/// Cochran's Q around the fixed-effect mean.
double cochran_q(std::span<const double> effects, std::span<const double> ses);

/// DerSimonian-Laird moment estimator, truncated at zero. Needs >= 2 studies.
double dersimonian_laird_tau2(std::span<const double> effects, std::span<const double> ses);
double dersimonian_laird_tau2(const StudySet& studies);

MetaResult fixed_effect_meta(std::span<const double> effects, std::span<const double> ses, double alpha);
MetaResult fixed_effect_meta(const StudySet& studies, double alpha);

/// model must be random_z or random_t; needs >= 2 studies.
MetaResult random_effects_meta(std::span<const double> effects, std::span<const double> ses, MetaModel model,
                               double alpha);
MetaResult random_effects_meta(const StudySet& studies, MetaModel model, double alpha);

/// Dispatches on model.
MetaResult meta_analyze(std::span<const double> effects, std::span<const double> ses, MetaModel model,
                        double alpha);
MetaResult meta_analyze(const StudySet& studies, MetaModel model, double alpha);

/// Smallest number of studies the model accepts.
std::size_t min_studies(MetaModel model) noexcept;

/// Non-empty when a meta-analysis of `n` studies under `model` is legal but
/// fragile (random_t on two studies has a single degree of freedom).
std::string small_sample_warning(std::size_t n, MetaModel model);

} // namespace repmeta

#endif // REPMETA_META_HPP
