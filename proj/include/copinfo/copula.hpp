#pragma once

#include <cstdint>
#include <vector>

#include "copinfo/rank.hpp"

namespace copinfo {

// Parametric bivariate copula: Gaussian(rho) or Student-T(rho, nu).
struct CopulaModel {
  enum class Family { gaussian, student_t };

  Family family = Family::gaussian;
  double rho = 0.0;
  double nu = 0.0;  // meaningful for student_t only

  static CopulaModel gaussian(double rho);
  static CopulaModel student_t(double rho, double nu);
};

// Symmetric positive definite matrix with unit diagonal.
class CorrelationMatrix {
 public:
  // Entries in row-major order, d*d of them.
  CorrelationMatrix(std::size_t d, std::vector<double> entries);

  static CorrelationMatrix identity(std::size_t d);
  // 2x2 matrix [[1, rho], [rho, 1]].
  static CorrelationMatrix from_rho(double rho);

  std::size_t dim() const { return d_; }
  double operator()(std::size_t i, std::size_t j) const {
    return entries_[i * d_ + j];
  }
  // ln det, via Cholesky; throws DomainError if not positive definite.
  double log_det() const;

 private:
  std::size_t d_;
  std::vector<double> entries_;
};

// Continuous marginal distribution exposing its quantile function.
struct MarginalSpec {
  enum class Kind { uniform, gaussian, student_t, log_normal };

  Kind kind = Kind::uniform;
  double mu = 0.0;
  double sigma = 1.0;
  double nu = 1.0;

  static MarginalSpec uniform();
  static MarginalSpec gaussian(double mu, double sigma);
  static MarginalSpec student_t(double nu);
  static MarginalSpec log_normal(double mu, double sigma);

  // Strictly increasing on (0,1).
  double quantile(double p) const;
};

// Copula log-density evaluated at scores (a, b), i.e. at the marginal
// quantiles a = Q(u), b = Q(v) where Q is the normal quantile for the
// Gaussian family and the t_nu quantile for Student-T.  Exposed because
// likelihood and integration work is better conditioned in score space.
double copula_log_density_scores(const CopulaModel& m, double a, double b);

// Copula density c[u, v]; u, v strictly inside (0,1).
double copula_density(const CopulaModel& m, double u, double v);

// Mean of log copula_density over the sample, in nats per observation.
double copula_log_likelihood(const CopulaModel& m, const PseudoObservations& p);

// -0.5 ln(1 - rho^2): mutual information of the Gaussian copula.
double mi_gaussian(double rho);

// Information excess of the T copula over the Gaussian one with the same
// rho.  Strictly decreasing in nu, -> 0 as nu -> infinity.
double excess_information(double nu);

// mi_gaussian(rho) + excess_information(nu).
double mi_t(double rho, double nu);

// Differential entropy of the d-dimensional Student-t distribution with
// correlation matrix sigma, in nats.
double student_entropy(const CorrelationMatrix& sigma, double nu);

// Mutual information of the d-dimensional Student-t distribution, d >= 2.
double mi_t_multivariate(const CorrelationMatrix& sigma, double nu);

// Draws n pairs from the copula.  Deterministic given seed.
PseudoObservations sample_copula(const CopulaModel& m, std::size_t n,
                                 std::uint64_t seed);

// x_t = quantile_mx(u_t), y_t = quantile_my(v_t).  Rank statistics of the
// output equal those of the input exactly.
SamplePairs apply_marginals(const PseudoObservations& p, const MarginalSpec& mx,
                            const MarginalSpec& my);

}  // namespace copinfo
