#include "copinfo/special.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "copinfo/errors.hpp"

namespace copinfo {

namespace {

constexpr double kPi = std::numbers::pi;

void require_finite_positive(double x, const char* fn, const char* arg) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw DomainError(std::string(fn) + ": " + arg + " must be finite and > 0");
  }
}

// Lanczos approximation, g = 7, 9-term coefficient set (Godfrey).
// Relative error below 1e-14 over the positive axis.
constexpr double kLanczos[9] = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
};

double student_t_log_pdf(double x, double nu) {
  return log_gamma(0.5 * (nu + 1.0)) - log_gamma(0.5 * nu) -
         0.5 * std::log(nu * kPi) -
         0.5 * (nu + 1.0) * std::log1p(x * x / nu);
}

}  // namespace

double log_gamma(double x) {
  require_finite_positive(x, "log_gamma", "x");
  if (x < 0.5) {
    // Reflection; only reached for x in (0, 0.5) so sin(pi x) > 0.
    return std::log(kPi / std::sin(kPi * x)) - log_gamma(1.0 - x);
  }
  double z = x - 1.0;
  double acc = kLanczos[0];
  for (int i = 1; i < 9; ++i) acc += kLanczos[i] / (z + i);
  double t = z + 7.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t +
         std::log(acc);
}

double digamma(double x) {
  require_finite_positive(x, "digamma", "x");
  // Shift upward until the asymptotic expansion is accurate, then apply
  // the Bernoulli-number series.  Truncation error at x = 6 is ~2e-13.
  double acc = 0.0;
  while (x < 6.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  double inv = 1.0 / x;
  double t = inv * inv;
  double series =
      t * (1.0 / 12.0 -
           t * (1.0 / 120.0 -
                t * (1.0 / 252.0 -
                     t * (1.0 / 240.0 -
                          t * (1.0 / 132.0 -
                               t * (691.0 / 32760.0 - t * (1.0 / 12.0)))))));
  return acc + std::log(x) - 0.5 * inv - series;
}

double log_beta(double a, double b) {
  require_finite_positive(a, "log_beta", "a");
  require_finite_positive(b, "log_beta", "b");
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

double reg_incomplete_beta(double x, double a, double b) {
  require_finite_positive(a, "reg_incomplete_beta", "a");
  require_finite_positive(b, "reg_incomplete_beta", "b");
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("reg_incomplete_beta: x must lie in [0, 1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  // Use the continued fraction only where it converges quickly.
  if (x > (a + 1.0) / (a + b + 2.0)) {
    return 1.0 - reg_incomplete_beta(1.0 - x, b, a);
  }
  double front = std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b)) / a;
  // Modified Lentz evaluation of the standard continued fraction.
  const double tiny = 1e-30;
  double f = 1.0, c = 1.0, d = 0.0;
  for (int i = 0; i <= 400; ++i) {
    int m = i / 2;
    double numerator;
    if (i == 0) {
      numerator = 1.0;
    } else if (i % 2 == 0) {
      numerator = m * (b - m) * x / ((a + 2.0 * m - 1.0) * (a + 2.0 * m));
    } else {
      numerator = -(a + m) * (a + b + m) * x / ((a + 2.0 * m) * (a + 2.0 * m + 1.0));
    }
    d = 1.0 + numerator * d;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    c = 1.0 + numerator / c;
    if (std::fabs(c) < tiny) c = tiny;
    double cd = c * d;
    f *= cd;
    if (std::fabs(1.0 - cd) < 1e-16) break;
  }
  double value = front * (f - 1.0);
  if (value < 0.0) return 0.0;
  if (value > 1.0) return 1.0;
  return value;
}

double std_normal_cdf(double x) {
  if (std::isnan(x)) throw DomainError("std_normal_cdf: x is NaN");
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("std_normal_quantile: p must lie in (0, 1)");
  }
  // Acklam's rational approximation, then one Halley refinement.
  // https://web.archive.org/web/20151110174102/http://home.online.no/~pjacklam/notes/invnorm/
  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p > 1.0 - plow) {
    double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else {
    double q = p - 0.5;
    double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  double e = std_normal_cdf(x) - p;
  double u = e * std::sqrt(2.0 * kPi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

double student_t_cdf(double x, double nu) {
  require_finite_positive(nu, "student_t_cdf", "nu");
  if (std::isnan(x)) throw DomainError("student_t_cdf: x is NaN");
  if (x == 0.0) return 0.5;
  double t = nu / (nu + x * x);
  double half_tail = 0.5 * reg_incomplete_beta(t, 0.5 * nu, 0.5);
  return x > 0.0 ? 1.0 - half_tail : half_tail;
}

double student_t_quantile(double p, double nu) {
  require_finite_positive(nu, "student_t_quantile", "nu");
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("student_t_quantile: p must lie in (0, 1)");
  }
  if (p == 0.5) return 0.0;
  if (p < 0.5) return -student_t_quantile(1.0 - p, nu);
  if (nu == 1.0) return std::tan(kPi * (p - 0.5));
  if (nu == 2.0) {
    double s = 2.0 * p - 1.0;
    return s * std::sqrt(2.0 / ((1.0 - s) * (1.0 + s)));
  }
  // Initial guess from the normal quantile (Cornish-Fisher style terms),
  // then safeguarded Newton on the CDF.
  double z = std_normal_quantile(p);
  double z3 = z * z * z;
  double z5 = z3 * z * z;
  double x = z + (z3 + z) / (4.0 * nu) +
             (5.0 * z5 + 16.0 * z3 + 3.0 * z) / (96.0 * nu * nu);
  if (!(x > 0.0)) x = std::max(z, 1e-8);
  double lo = 0.0, hi = x;
  while (student_t_cdf(hi, nu) < p) {
    lo = hi;
    hi = hi * 2.0 + 1.0;
    if (hi > 1e300) break;
  }
  x = std::min(std::max(x, lo), hi);
  for (int it = 0; it < 200; ++it) {
    double f = student_t_cdf(x, nu) - p;
    if (f > 0.0) hi = x;
    else lo = x;
    double dens = std::exp(student_t_log_pdf(x, nu));
    double next = dens > 0.0 ? x - f / dens : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    bool done = std::fabs(next - x) <= 1e-15 * (1.0 + std::fabs(x));
    x = next;
    if (done) break;
  }
  return x;
}

}  // namespace copinfo
