#ifndef REPMETA_DISTRIBUTIONS_HPP
#define REPMETA_DISTRIBUTIONS_HPP

namespace repmeta::dist {

/// Standard normal CDF.
double normal_cdf(double x);

/// Inverse of normal_cdf. Throws std::domain_error unless 0 < p < 1.
double normal_quantile(double p);

/// Student t CDF with `df` degrees of freedom (df > 0, need not be integral).
/// Evaluated through the regularized incomplete beta function, so the lower
/// tail keeps full relative precision for large negative x.
double t_cdf(double x, double df);

/// Student t density.
double t_pdf(double x, double df);

/// Inverse of t_cdf. Throws std::domain_error unless 0 < p < 1 and df > 0.
double t_quantile(double p, double df);

/// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double x, double a, double b);

} // namespace repmeta::dist

#endif // REPMETA_DISTRIBUTIONS_HPP
