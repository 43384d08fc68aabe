#pragma once

// Scalar special functions used throughout the library.  All of them are
// plain deterministic functions of their arguments; invalid arguments
// raise DomainError.

namespace copinfo {

// ln Gamma(x) for x > 0.
double log_gamma(double x);

// Digamma psi(x) = d/dx ln Gamma(x) for x > 0.
double digamma(double x);

// ln B(a, b) = ln Gamma(a) + ln Gamma(b) - ln Gamma(a+b) for a, b > 0.
double log_beta(double a, double b);

// Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1].
double reg_incomplete_beta(double x, double a, double b);

// Standard normal CDF.
double std_normal_cdf(double x);

// Standard normal quantile, p in (0, 1).
double std_normal_quantile(double p);

// Student-t CDF with nu > 0 degrees of freedom.
double student_t_cdf(double x, double nu);

// Student-t quantile, p in (0, 1), nu > 0.  Odd around p = 1/2, with
// student_t_quantile(0.5, nu) == 0 exactly.
double student_t_quantile(double p, double nu);

}  // namespace copinfo
