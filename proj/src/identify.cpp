#include "copinfo/identify.hpp"

#include <cmath>
#include <cstddef>
#include <string>

#include "copinfo/errors.hpp"

namespace copinfo {

namespace {

constexpr double kNuMin = 0.5;
constexpr double kNuMax = 1e6;

// Shared front half of fit_t_copula and gaussianity_test: rank statistics,
// the bootstrap MI interval, and the excess over the Gaussian curve.
struct ExcessCore {
  double tau = 0.0;
  double rho_hat = 0.0;
  MiEstimate mi{};
  double excess = 0.0;
  double excess_ci_low = 0.0;
  double excess_ci_high = 0.0;
};

ExcessCore excess_core(const SamplePairs& s, const FitConfig& cfg) {
  if (s.x.size() != s.y.size()) {
    throw DataError("fit: x and y lengths differ");
  }
  if (s.x.size() < cfg.min_n) {
    throw DataError("fit: n = " + std::to_string(s.x.size()) +
                    " is below the reliability floor of " +
                    std::to_string(cfg.min_n) + " observations");
  }
  ExcessCore core;
  core.tau = kendall_tau(s);
  core.rho_hat = tau_to_rho(core.tau);
  core.mi = bootstrap_mi(s, cfg.ksg, cfg.replicates, cfg.level, cfg.seed,
                         cfg.threads);
  const double gauss = mi_gaussian(core.rho_hat);
  core.excess = core.mi.value - gauss;
  core.excess_ci_low = core.mi.ci_low - gauss;
  core.excess_ci_high = core.mi.ci_high - gauss;
  return core;
}

}  // namespace

double max_invertible_excess() { return excess_information(kNuMin); }

double invert_excess(double e) {
  if (!(e > 0.0)) {
    throw DomainError("invert_excess: excess " + std::to_string(e) +
                      " is not positive, so no T copula is called for "
                      "(Gaussian verdict)");
  }
  const double ceiling = max_invertible_excess();
  if (e > ceiling) {
    throw DomainError("invert_excess: excess " + std::to_string(e) +
                      " exceeds " + std::to_string(ceiling) +
                      ", the value of the curve at nu = " +
                      std::to_string(kNuMin));
  }
  // excess_information decreases strictly in nu, so bisect on log nu.
  double lo = std::log(kNuMin);
  double hi = std::log(kNuMax);
  double mid = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    mid = 0.5 * (lo + hi);
    const double got = excess_information(std::exp(mid));
    if (std::fabs(got - e) <= 1e-9) break;
    if (got > e) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::exp(mid);
}

FitReport fit_t_copula(const SamplePairs& s, const FitConfig& cfg) {
  const ExcessCore core = excess_core(s, cfg);

  FitReport rep;
  rep.tau = core.tau;
  rep.rho_hat = core.rho_hat;
  rep.mi = core.mi;
  rep.excess = core.excess;
  rep.excess_ci_low = core.excess_ci_low;
  rep.excess_ci_high = core.excess_ci_high;

  // One-sided rule at the bootstrap level: only the lower bound is
  // tested.  Estimator noise can push the point excess below zero, and
  // no inversion exists there, forced or not.
  if ((cfg.force_nu || rep.excess_ci_low > 0.0) && rep.excess > 0.0) {
    rep.nu_hat = invert_excess(rep.excess);
  }

  const CopulaModel fitted =
      rep.nu_hat ? CopulaModel::student_t(rep.rho_hat, *rep.nu_hat)
                 : CopulaModel::gaussian(rep.rho_hat);
  const PseudoObservations pobs = pseudo_observations(s);
  rep.loglik_at_fit = copula_log_likelihood(fitted, pobs);
  rep.kl_diagnostic = rep.mi.value - rep.loglik_at_fit;
  return rep;
}

GaussianityReport gaussianity_test(const SamplePairs& s,
                                   const FitConfig& cfg) {
  const ExcessCore core = excess_core(s, cfg);
  GaussianityReport rep;
  rep.excess = core.excess;
  rep.excess_ci_low = core.excess_ci_low;
  rep.excess_ci_high = core.excess_ci_high;
  rep.is_gaussian = core.excess_ci_low <= 0.0;
  return rep;
}

}  // namespace copinfo
