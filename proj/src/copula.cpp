#include "copinfo/copula.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "copinfo/errors.hpp"
#include "copinfo/rng.hpp"
#include "copinfo/special.hpp"

namespace copinfo {

namespace {

constexpr double kPi = std::numbers::pi;

void require_rho(double rho, const char* fn) {
  if (!(std::fabs(rho) < 1.0)) {
    throw DomainError(std::string(fn) + ": |rho| must be < 1");
  }
}

void require_nu(double nu, const char* fn) {
  if (!(nu > 0.0) || !std::isfinite(nu)) {
    throw DomainError(std::string(fn) + ": nu must be finite and > 0");
  }
}

double q_form(double x, double y, double rho) {
  return (x * x + y * y - 2.0 * rho * x * y) / ((1.0 - rho) * (1.0 + rho));
}

}  // namespace

CopulaModel CopulaModel::gaussian(double rho) {
  require_rho(rho, "CopulaModel::gaussian");
  CopulaModel m;
  m.family = Family::gaussian;
  m.rho = rho;
  return m;
}

CopulaModel CopulaModel::student_t(double rho, double nu) {
  require_rho(rho, "CopulaModel::student_t");
  require_nu(nu, "CopulaModel::student_t");
  CopulaModel m;
  m.family = Family::student_t;
  m.rho = rho;
  m.nu = nu;
  return m;
}

CorrelationMatrix::CorrelationMatrix(std::size_t d, std::vector<double> entries)
    : d_(d), entries_(std::move(entries)) {
  if (d_ < 1) throw DomainError("CorrelationMatrix: dimension must be >= 1");
  if (entries_.size() != d_ * d_) {
    throw DomainError("CorrelationMatrix: need d*d entries");
  }
  for (std::size_t i = 0; i < d_; ++i) {
    if (entries_[i * d_ + i] != 1.0) {
      throw DomainError("CorrelationMatrix: diagonal entries must equal 1");
    }
    for (std::size_t j = i + 1; j < d_; ++j) {
      double a = entries_[i * d_ + j];
      double b = entries_[j * d_ + i];
      if (!std::isfinite(a) || std::fabs(a - b) > 1e-12) {
        throw DomainError("CorrelationMatrix: entries must be finite and symmetric");
      }
      entries_[j * d_ + i] = a;
    }
  }
  log_det();  // rejects non-positive-definite input up front
}

CorrelationMatrix CorrelationMatrix::identity(std::size_t d) {
  std::vector<double> e(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) e[i * d + i] = 1.0;
  return CorrelationMatrix(d, std::move(e));
}

CorrelationMatrix CorrelationMatrix::from_rho(double rho) {
  require_rho(rho, "CorrelationMatrix::from_rho");
  return CorrelationMatrix(2, {1.0, rho, rho, 1.0});
}

double CorrelationMatrix::log_det() const {
  // Cholesky without pivoting; small d only.
  std::vector<double> L(d_ * d_, 0.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < d_; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double sum = entries_[i * d_ + j];
      for (std::size_t k = 0; k < j; ++k) sum -= L[i * d_ + k] * L[j * d_ + k];
      if (i == j) {
        if (!(sum > 0.0)) {
          throw DomainError("CorrelationMatrix: not positive definite");
        }
        L[i * d_ + i] = std::sqrt(sum);
        acc += std::log(sum);
      } else {
        L[i * d_ + j] = sum / L[j * d_ + j];
      }
    }
  }
  return acc;
}

MarginalSpec MarginalSpec::uniform() { return MarginalSpec{}; }

MarginalSpec MarginalSpec::gaussian(double mu, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma) || !std::isfinite(mu)) {
    throw DomainError("MarginalSpec::gaussian: need finite mu and sigma > 0");
  }
  MarginalSpec m;
  m.kind = Kind::gaussian;
  m.mu = mu;
  m.sigma = sigma;
  return m;
}

MarginalSpec MarginalSpec::student_t(double nu) {
  require_nu(nu, "MarginalSpec::student_t");
  MarginalSpec m;
  m.kind = Kind::student_t;
  m.nu = nu;
  return m;
}

MarginalSpec MarginalSpec::log_normal(double mu, double sigma) {
  MarginalSpec m = gaussian(mu, sigma);
  m.kind = Kind::log_normal;
  return m;
}

double MarginalSpec::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("MarginalSpec::quantile: p must lie in (0, 1)");
  }
  switch (kind) {
    case Kind::uniform:
      return p;
    case Kind::gaussian:
      return mu + sigma * std_normal_quantile(p);
    case Kind::student_t:
      return student_t_quantile(p, nu);
    case Kind::log_normal:
      return std::exp(mu + sigma * std_normal_quantile(p));
  }
  throw DomainError("MarginalSpec::quantile: unknown marginal kind");
}

double copula_log_density_scores(const CopulaModel& m, double a, double b) {
  const double rho = m.rho;
  const double one_minus_r2 = (1.0 - rho) * (1.0 + rho);
  if (m.family == CopulaModel::Family::gaussian) {
    // c = exp(-(rho^2 a^2 - 2 rho a b + rho^2 b^2) / (2(1-rho^2))) / sqrt(1-rho^2)
    double num = rho * rho * (a * a + b * b) - 2.0 * rho * a * b;
    return -0.5 * std::log(one_minus_r2) - num / (2.0 * one_minus_r2);
  }
  const double nu = m.nu;
  double log_const = log_gamma(0.5 * (nu + 2.0)) + log_gamma(0.5 * nu) -
                     2.0 * log_gamma(0.5 * (nu + 1.0)) -
                     0.5 * std::log(one_minus_r2);
  double joint = -0.5 * (nu + 2.0) * std::log1p(q_form(a, b, rho) / nu);
  double margins = 0.5 * (nu + 1.0) *
                   (std::log1p(a * a / nu) + std::log1p(b * b / nu));
  return log_const + joint + margins;
}

double copula_density(const CopulaModel& m, double u, double v) {
  if (!(u > 0.0 && u < 1.0 && v > 0.0 && v < 1.0)) {
    throw DomainError("copula_density: u and v must lie strictly inside (0, 1)");
  }
  double a, b;
  if (m.family == CopulaModel::Family::gaussian) {
    a = std_normal_quantile(u);
    b = std_normal_quantile(v);
  } else {
    a = student_t_quantile(u, m.nu);
    b = student_t_quantile(v, m.nu);
  }
  return std::exp(copula_log_density_scores(m, a, b));
}

double copula_log_likelihood(const CopulaModel& m, const PseudoObservations& p) {
  if (p.u.size() != p.v.size() || p.size() == 0) {
    throw DomainError("copula_log_likelihood: nonempty pseudo-observations required");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    double u = p.u[i];
    double v = p.v[i];
    if (!(u > 0.0 && u < 1.0 && v > 0.0 && v < 1.0)) {
      throw DomainError("copula_log_likelihood: observations must lie inside (0, 1)");
    }
    double a, b;
    if (m.family == CopulaModel::Family::gaussian) {
      a = std_normal_quantile(u);
      b = std_normal_quantile(v);
    } else {
      a = student_t_quantile(u, m.nu);
      b = student_t_quantile(v, m.nu);
    }
    acc += copula_log_density_scores(m, a, b);
  }
  return acc / double(p.size());
}

double mi_gaussian(double rho) {
  require_rho(rho, "mi_gaussian");
  return -0.5 * std::log1p(-rho * rho);
}

double excess_information(double nu) {
  require_nu(nu, "excess_information");
  return std::log(nu / (2.0 * kPi)) + 2.0 * log_beta(0.5 * nu, 0.5) -
         (2.0 + nu) / nu +
         (1.0 + nu) * (digamma(0.5 * (nu + 1.0)) - digamma(0.5 * nu));
}

double mi_t(double rho, double nu) {
  return mi_gaussian(rho) + excess_information(nu);
}

double student_entropy(const CorrelationMatrix& sigma, double nu) {
  require_nu(nu, "student_entropy");
  const double d = double(sigma.dim());
  return 0.5 * (d * std::log(kPi * nu) + sigma.log_det()) +
         log_beta(0.5 * nu, 0.5 * d) - log_gamma(0.5 * d) +
         0.5 * (nu + d) * (digamma(0.5 * (nu + d)) - digamma(0.5 * nu));
}

double mi_t_multivariate(const CorrelationMatrix& sigma, double nu) {
  require_nu(nu, "mi_t_multivariate");
  if (sigma.dim() < 2) {
    throw DomainError("mi_t_multivariate: dimension must be >= 2");
  }
  const double d = double(sigma.dim());
  double log_const = d * log_beta(0.5 * nu, 0.5) + log_gamma(0.5 * d) -
                     0.5 * d * std::log(kPi) - log_beta(0.5 * nu, 0.5 * d);
  return -0.5 * sigma.log_det() + log_const -
         0.5 * nu * (d - 1.0) * digamma(0.5 * nu) +
         0.5 * d * (nu + 1.0) * digamma(0.5 * (nu + 1.0)) -
         0.5 * (nu + d) * digamma(0.5 * (nu + d));
}

PseudoObservations sample_copula(const CopulaModel& m, std::size_t n,
                                 std::uint64_t seed) {
  if (n < 1) throw DomainError("sample_copula: n must be >= 1");
  Rng rng(seed);
  const double rho = m.rho;
  const double tail = std::sqrt((1.0 - rho) * (1.0 + rho));
  PseudoObservations p;
  p.u.resize(n);
  p.v.resize(n);
  if (m.family == CopulaModel::Family::gaussian) {
    for (std::size_t i = 0; i < n; ++i) {
      auto [z1, z2] = rng.normal_pair();
      p.u[i] = std_normal_cdf(z1);
      p.v[i] = std_normal_cdf(rho * z1 + tail * z2);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      auto [z1, z2] = rng.normal_pair();
      double g = rng.chi_square(m.nu);
      double scale = std::sqrt(m.nu / g);
      p.u[i] = student_t_cdf(z1 * scale, m.nu);
      p.v[i] = student_t_cdf((rho * z1 + tail * z2) * scale, m.nu);
    }
  }
  // CDF values of continuous scores land strictly inside (0,1) except for
  // astronomically extreme draws; clamp those to the representable edge.
  for (std::size_t i = 0; i < n; ++i) {
    p.u[i] = std::min(std::max(p.u[i], 1e-300), 1.0 - 1e-16);
    p.v[i] = std::min(std::max(p.v[i], 1e-300), 1.0 - 1e-16);
  }
  return p;
}

SamplePairs apply_marginals(const PseudoObservations& p, const MarginalSpec& mx,
                            const MarginalSpec& my) {
  SamplePairs s;
  s.x.resize(p.size());
  s.y.resize(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    s.x[i] = mx.quantile(p.u[i]);
    s.y[i] = my.quantile(p.v[i]);
  }
  return s;
}

}  // namespace copinfo
