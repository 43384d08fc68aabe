#pragma once

#include <cstdint>
#include <vector>

namespace copinfo {

// An ordered sample of (x, y) pairs, stored column-wise.
struct SamplePairs {
  std::vector<double> x;
  std::vector<double> y;

  std::size_t size() const { return x.size(); }
};

// Pseudo-observations: per-coordinate ranks mapped into the open unit
// interval, u_t = rank(x_t)/(n+1), v_t = rank(y_t)/(n+1).
struct PseudoObservations {
  std::vector<double> u;
  std::vector<double> v;

  std::size_t size() const { return u.size(); }
};

enum class TiePolicy {
  // Tied values share their mean rank.
  average_rank,
  // Ties are broken deterministically (keyed by seed), so every rank is
  // distinct.  Tie-free coordinates are unaffected.
  jitter,
};

// 1-based ranks with tied values averaged.
std::vector<double> average_ranks(const std::vector<double>& values);

PseudoObservations pseudo_observations(const SamplePairs& s,
                                       TiePolicy policy = TiePolicy::average_rank,
                                       std::uint64_t jitter_seed = 0);

// Tie-corrected Kendall's tau-b, O(n log n) via merge-sort inversion
// counting.
double kendall_tau(const SamplePairs& s);

// Pearson correlation of average ranks.
double spearman_rho(const SamplePairs& s);

// Pearson product-moment correlation.
double linear_correlation(const SamplePairs& s);

// rho = sin(pi * tau / 2); valid under elliptical-copula models.
double tau_to_rho(double tau);

// rho = 2 sin(pi * rho_rank / 6); valid under elliptical-copula models.
double rank_to_rho_gaussian(double rho_rank);

}  // namespace copinfo
