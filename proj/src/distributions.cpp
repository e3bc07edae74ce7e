#include "repmeta/distributions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace repmeta::dist {

namespace {

constexpr double kTiny = 1e-300;
constexpr double kEps = 1e-16;
constexpr int kMaxIter = 20000;

// Continued fraction for I_x(a, b) (modified Lentz). Converges quickly for
// x < (a + 1) / (a + b + 2).
double beta_continued_fraction(double x, double a, double b)
{
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    throw std::runtime_error("incomplete beta: continued fraction did not converge");
}

// I_x(a, b) given both x and y = 1 - x, so callers that know y exactly
// avoid the cancellation in 1 - x.
double incomplete_beta_xy(double x, double y, double a, double b)
{
    if (x <= 0.0) return 0.0;
    if (y <= 0.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                             b * std::log(y);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return std::exp(log_front) * beta_continued_fraction(x, a, b) / a;
    }
    return 1.0 - std::exp(log_front) * beta_continued_fraction(y, b, a) / b;
}

// Lower tail P(T <= x) for x <= 0.
double t_lower_tail(double x, double df)
{
    const double x2 = x * x;
    const double denom = df + x2;
    return 0.5 * incomplete_beta_xy(df / denom, x2 / denom, 0.5 * df, 0.5);
}

// Acklam's rational approximation; relative error ~1e-9 before refinement.
double normal_quantile_initial(double p)
{
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                   1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                   6.680131188771972e+01,  -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                   -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                   3.754408661907416e+00};
    constexpr double p_low = 0.02425;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - p_low) {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

void check_probability(double p)
{
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("probability must lie in (0, 1)");
}

} // namespace

double incomplete_beta(double x, double a, double b)
{
    if (!(a > 0.0 && b > 0.0)) throw std::domain_error("incomplete beta: a and b must be positive");
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("incomplete beta: x must lie in [0, 1]");
    return incomplete_beta_xy(x, 1.0 - x, a, b);
}

double normal_cdf(double x)
{
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_quantile(double p)
{
    check_probability(p);
    double x = normal_quantile_initial(p);
    // Two Halley steps take the Acklam guess to full double precision.
    for (int i = 0; i < 2; ++i) {
        const double e = normal_cdf(x) - p;
        const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
        x -= u / (1.0 + 0.5 * x * u);
    }
    return x;
}

double t_pdf(double x, double df)
{
    if (!(df > 0.0)) throw std::domain_error("t distribution: df must be positive");
    if (std::isinf(df)) return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    const double log_norm =
        std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) - 0.5 * std::log(df * std::numbers::pi);
    return std::exp(log_norm - 0.5 * (df + 1.0) * std::log1p(x * x / df));
}

double t_cdf(double x, double df)
{
    if (!(df > 0.0)) throw std::domain_error("t distribution: df must be positive");
    if (std::isnan(x)) return x;
    if (std::isinf(df)) return normal_cdf(x);
    if (std::isinf(x)) return x < 0 ? 0.0 : 1.0;
    if (x == 0.0) return 0.5;
    if (x < 0.0) return t_lower_tail(x, df);
    return 1.0 - t_lower_tail(-x, df);
}

double t_quantile(double p, double df)
{
    check_probability(p);
    if (!(df > 0.0)) throw std::domain_error("t distribution: df must be positive");
    if (std::isinf(df)) return normal_quantile(p);
    if (p == 0.5) return 0.0;

    // Solve in the lower tail, where t_cdf is accurate in relative terms.
    const bool upper = p > 0.5;
    const double q = upper ? 1.0 - p : p;
    if (df == 1.0) {
        const double x = -1.0 / std::tan(std::numbers::pi * q);
        return upper ? -x : x;
    }

    double hi = 0.0;
    double lo = std::min(normal_quantile(q), -1.0);
    while (t_lower_tail(lo, df) > q) {
        hi = lo;
        lo *= 2.0;
        if (!std::isfinite(lo)) throw std::runtime_error("t quantile: bracket overflow");
    }

    double x = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        const double f = t_lower_tail(x, df) - q;
        if (f > 0.0) {
            hi = x;
        } else {
            lo = x;
        }
        const double dens = t_pdf(x, df);
        double next = x - f / dens;
        if (!(dens > 0.0) || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::fabs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * std::fabs(x) ||
            next == lo || next == hi) {
            x = next;
            break;
        }
        x = next;
    }
    return upper ? -x : x;
}

} // namespace repmeta::dist
