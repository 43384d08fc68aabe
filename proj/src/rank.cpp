#include "copinfo/rank.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "copinfo/errors.hpp"

namespace copinfo {

namespace {

void require_sample(const SamplePairs& s, const char* fn) {
  if (s.x.size() != s.y.size()) {
    throw DomainError(std::string(fn) + ": x/y length mismatch");
  }
  if (s.size() < 2) {
    throw DomainError(std::string(fn) + ": need at least 2 pairs");
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
      throw DomainError(std::string(fn) + ": values must be finite");
    }
  }
}

std::uint64_t mix64(std::uint64_t z) {
  // splitmix64 finalizer.
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Ranks with ties broken by a seeded hash of the original index.  The
// relative order of distinct values is untouched, so strictly monotone
// transforms of the input leave the result unchanged.
std::vector<double> jitter_ranks(const std::vector<double>& values,
                                 std::uint64_t seed) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (values[a] != values[b]) return values[a] < values[b];
    return mix64(seed ^ mix64(a)) < mix64(seed ^ mix64(b));
  });
  std::vector<double> ranks(n);
  for (std::size_t pos = 0; pos < n; ++pos) ranks[order[pos]] = double(pos + 1);
  return ranks;
}

struct Moments {
  double mean_x, mean_y, var_x, var_y, cov;
};

Moments central_moments(const std::vector<double>& x,
                        const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= double(n);
  my /= double(n);
  double vx = 0.0, vy = 0.0, cv = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = x[i] - mx;
    double dy = y[i] - my;
    vx += dx * dx;
    vy += dy * dy;
    cv += dx * dy;
  }
  return {mx, my, vx, vy, cv};
}

double pearson(const std::vector<double>& x, const std::vector<double>& y,
               const char* fn) {
  Moments m = central_moments(x, y);
  if (m.var_x <= 0.0 || m.var_y <= 0.0) {
    throw DegenerateInputError(std::string(fn) + ": a coordinate has zero variance");
  }
  double r = m.cov / std::sqrt(m.var_x * m.var_y);
  return std::clamp(r, -1.0, 1.0);
}

// Counts inversions while merge-sorting values in place.
std::int64_t merge_count(std::vector<double>& v, std::vector<double>& tmp,
                         std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t count = merge_count(v, tmp, lo, mid) + merge_count(v, tmp, mid, hi);
  std::size_t a = lo, b = mid, out = lo;
  while (a < mid && b < hi) {
    if (v[b] < v[a]) {
      count += std::int64_t(mid - a);
      tmp[out++] = v[b++];
    } else {
      tmp[out++] = v[a++];
    }
  }
  while (a < mid) tmp[out++] = v[a++];
  while (b < hi) tmp[out++] = v[b++];
  std::copy(tmp.begin() + lo, tmp.begin() + hi, v.begin() + lo);
  return count;
}

std::int64_t tie_pairs(std::int64_t run) { return run * (run - 1) / 2; }

}  // namespace

std::vector<double> average_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    // Positions i..j share the mean of ranks i+1..j+1.
    double rank = 0.5 * double(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

PseudoObservations pseudo_observations(const SamplePairs& s, TiePolicy policy,
                                       std::uint64_t jitter_seed) {
  require_sample(s, "pseudo_observations");
  const double scale = 1.0 / double(s.size() + 1);
  std::vector<double> rx, ry;
  if (policy == TiePolicy::average_rank) {
    rx = average_ranks(s.x);
    ry = average_ranks(s.y);
  } else {
    rx = jitter_ranks(s.x, mix64(jitter_seed ^ 0x78b3ULL));
    ry = jitter_ranks(s.y, mix64(jitter_seed ^ 0x1f9dULL));
  }
  PseudoObservations p;
  p.u.resize(s.size());
  p.v.resize(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    p.u[i] = rx[i] * scale;
    p.v[i] = ry[i] * scale;
  }
  return p;
}

double kendall_tau(const SamplePairs& s) {
  require_sample(s, "kendall_tau");
  const std::size_t n = s.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (s.x[a] != s.x[b]) return s.x[a] < s.x[b];
    return s.y[a] < s.y[b];
  });

  // Tie bookkeeping in the (x, y)-sorted order.
  std::int64_t ties_x = 0, ties_xy = 0;
  {
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j + 1 < n && s.x[order[j + 1]] == s.x[order[i]]) ++j;
      ties_x += tie_pairs(std::int64_t(j - i + 1));
      std::size_t a = i;
      while (a <= j) {
        std::size_t b = a;
        while (b + 1 <= j && s.y[order[b + 1]] == s.y[order[a]]) ++b;
        ties_xy += tie_pairs(std::int64_t(b - a + 1));
        a = b + 1;
      }
      i = j + 1;
    }
  }

  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = s.y[order[i]];
  std::vector<double> tmp(n);
  std::int64_t swaps = merge_count(ys, tmp, 0, n);

  // ys is now sorted; count y ties from runs.
  std::int64_t ties_y = 0;
  {
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j + 1 < n && ys[j + 1] == ys[i]) ++j;
      ties_y += tie_pairs(std::int64_t(j - i + 1));
      i = j + 1;
    }
  }

  const std::int64_t total = tie_pairs(std::int64_t(n));
  if (total == ties_x || total == ties_y) {
    throw DegenerateInputError("kendall_tau: a coordinate is entirely tied");
  }
  // Knight's identity: concordant - discordant in terms of the swap count.
  std::int64_t con_minus_dis = total - ties_x - ties_y + ties_xy - 2 * swaps;
  return double(con_minus_dis) /
         std::sqrt(double(total - ties_x) * double(total - ties_y));
}

double spearman_rho(const SamplePairs& s) {
  require_sample(s, "spearman_rho");
  return pearson(average_ranks(s.x), average_ranks(s.y), "spearman_rho");
}

double linear_correlation(const SamplePairs& s) {
  require_sample(s, "linear_correlation");
  return pearson(s.x, s.y, "linear_correlation");
}

double tau_to_rho(double tau) {
  if (!(std::fabs(tau) < 1.0)) {
    throw DomainError("tau_to_rho: |tau| must be < 1");
  }
  return std::sin(std::numbers::pi * tau / 2.0);
}

double rank_to_rho_gaussian(double rho_rank) {
  if (!(std::fabs(rho_rank) < 1.0)) {
    throw DomainError("rank_to_rho_gaussian: |rho_rank| must be < 1");
  }
  return 2.0 * std::sin(std::numbers::pi * rho_rank / 6.0);
}

}  // namespace copinfo
