#pragma once

#include <cstdint>
#include <optional>

#include "copinfo/copula.hpp"
#include "copinfo/ksg.hpp"
#include "copinfo/rank.hpp"

namespace copinfo {

// Largest excess the inversion accepts: the nu -> excess curve evaluated
// at the lower end of the search bracket (nu = 0.5).
double max_invertible_excess();

// Invert excess_information.  The curve is strictly decreasing in nu, so a
// bisection on log nu over [0.5, 1e6] pins the result down to
// |excess_information(result) - e| <= 1e-9.
// Throws DomainError when e <= 0 (no excess, so no T copula is called for:
// the Gaussian verdict) or when e exceeds the nu = 0.5 ceiling.
double invert_excess(double e);

struct FitConfig {
  KsgConfig ksg{};
  int replicates = 200;
  double level = 0.90;
  std::uint64_t seed = 1;
  // Attempt the nu inversion even when the excess interval covers zero.
  bool force_nu = false;
  // Reliability floor: below this the MI interval spans most of the excess
  // curve and any nu estimate is noise.
  std::size_t min_n = 100;
  int threads = 0;
};

struct FitReport {
  double tau = 0.0;
  double rho_hat = 0.0;  // sin(pi * tau / 2)
  MiEstimate mi{};
  // excess = mi.value - mi_gaussian(rho_hat); the interval is the MI
  // interval shifted by the same amount (rho_hat treated as noiseless,
  // its sampling error being an order of magnitude below the MI's).
  double excess = 0.0;
  double excess_ci_low = 0.0;
  double excess_ci_high = 0.0;
  // Engaged iff the excess interval excludes zero (one-sided at the
  // bootstrap level) or force_nu is set; disengaged reads "Gaussian".
  std::optional<double> nu_hat{};
  // Mean log copula density of the fitted model over the
  // pseudo-observations.
  double loglik_at_fit = 0.0;
  // Sample divergence of the data copula from the fitted one,
  // mi.value - loglik_at_fit; nonnegative in population, so values below
  // minus the interval half-width flag a bad fit.
  double kl_diagnostic = 0.0;
};

// Identify the T copula matching the sample: Kendall tau gives rho_hat,
// the information excess over the Gaussian curve at rho_hat gives nu_hat.
FitReport fit_t_copula(const SamplePairs& s, const FitConfig& cfg = {});

struct GaussianityReport {
  double excess = 0.0;
  double excess_ci_low = 0.0;
  double excess_ci_high = 0.0;
  // True when the excess interval reaches zero or below, i.e. the linear
  // correlation alone could explain the dependence.
  bool is_gaussian = true;
};

GaussianityReport gaussianity_test(const SamplePairs& s,
                                   const FitConfig& cfg = {});

}  // namespace copinfo
