#include "copinfo/ksg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "copinfo/errors.hpp"
#include "copinfo/parallel.hpp"
#include "copinfo/rng.hpp"
#include "copinfo/special.hpp"

namespace copinfo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Fixed internal seed for the rank jitter applied by the
// pseudo-observation transform; any constant works, it only has to be
// the same for every call so the estimator stays deterministic.
constexpr std::uint64_t kTieBreakSeed = 0x5bd1e995u;

// ---- kd-tree over (x, y) with Chebyshev (max-norm) distances ----

struct KdNode {
  double xmin = kInf, xmax = -kInf, ymin = kInf, ymax = -kInf;
  int left = -1, right = -1;
  int begin = 0, end = 0;
};

class KdTree {
 public:
  KdTree(std::span<const double> xs, std::span<const double> ys)
      : xs_(xs), ys_(ys), idx_(xs.size()) {
    std::iota(idx_.begin(), idx_.end(), 0);
    nodes_.reserve(2 * idx_.size() / kLeafSize + 2);
    build(0, int(idx_.size()));
  }

  // Chebyshev distance from point q to its k-th nearest neighbor, q
  // itself excluded.  heap is caller-provided scratch space.
  double kth_distance(int q, int k, std::vector<double>& heap) const {
    heap.clear();
    search(0, q, std::size_t(k), heap);
    return heap.front();
  }

 private:
  static constexpr int kLeafSize = 16;

  // Appends the node for [begin, end) and returns its index.
  int build(int begin, int end) {
    int id = int(nodes_.size());
    nodes_.emplace_back();
    double xmin = kInf, xmax = -kInf, ymin = kInf, ymax = -kInf;
    for (int i = begin; i < end; ++i) {
      double x = xs_[idx_[i]], y = ys_[idx_[i]];
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
    nodes_[id].xmin = xmin;
    nodes_[id].xmax = xmax;
    nodes_[id].ymin = ymin;
    nodes_[id].ymax = ymax;
    if (end - begin <= kLeafSize) {
      nodes_[id].begin = begin;
      nodes_[id].end = end;
      return id;
    }
    int mid = begin + (end - begin) / 2;
    auto by_x = [&](int a, int b) { return xs_[a] < xs_[b]; };
    auto by_y = [&](int a, int b) { return ys_[a] < ys_[b]; };
    if (xmax - xmin >= ymax - ymin) {
      std::nth_element(idx_.begin() + begin, idx_.begin() + mid,
                       idx_.begin() + end, by_x);
    } else {
      std::nth_element(idx_.begin() + begin, idx_.begin() + mid,
                       idx_.begin() + end, by_y);
    }
    int l = build(begin, mid);
    int r = build(mid, end);
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
  }

  static double interval_distance(double v, double lo, double hi) {
    if (v < lo) return lo - v;
    if (v > hi) return v - hi;
    return 0.0;
  }

  double box_distance(int node, double qx, double qy) const {
    const KdNode& nd = nodes_[node];
    return std::max(interval_distance(qx, nd.xmin, nd.xmax),
                    interval_distance(qy, nd.ymin, nd.ymax));
  }

  void search(int node, int q, std::size_t k, std::vector<double>& heap) const {
    const KdNode& nd = nodes_[node];
    if (heap.size() == k &&
        box_distance(node, xs_[q], ys_[q]) >= heap.front()) {
      return;
    }
    if (nd.left < 0) {
      const double qx = xs_[q], qy = ys_[q];
      for (int i = nd.begin; i < nd.end; ++i) {
        int j = idx_[i];
        if (j == q) continue;
        double d = std::max(std::fabs(xs_[j] - qx), std::fabs(ys_[j] - qy));
        if (heap.size() < k) {
          heap.push_back(d);
          std::push_heap(heap.begin(), heap.end());
        } else if (d < heap.front()) {
          std::pop_heap(heap.begin(), heap.end());
          heap.back() = d;
          std::push_heap(heap.begin(), heap.end());
        }
      }
      return;
    }
    double dl = box_distance(nd.left, xs_[q], ys_[q]);
    double dr = box_distance(nd.right, xs_[q], ys_[q]);
    if (dl <= dr) {
      search(nd.left, q, k, heap);
      search(nd.right, q, k, heap);
    } else {
      search(nd.right, q, k, heap);
      search(nd.left, q, k, heap);
    }
  }

  std::span<const double> xs_, ys_;
  std::vector<int> idx_;
  std::vector<KdNode> nodes_;
};

// Points with |v - center| strictly below eps, center's own slot excluded.
// partition_point keeps the comparisons identical to the brute-force
// predicate fabs(v - center) < eps, so counts agree bit-for-bit.
int count_within(const std::vector<double>& sorted, double center, double eps) {
  auto lo = std::partition_point(
      sorted.begin(), sorted.end(),
      [&](double v) { return center - v >= eps; });
  auto hi = std::partition_point(
      lo, sorted.end(), [&](double v) { return v - center < eps; });
  return int(hi - lo) - 1;
}

// Ranks 1..n of `primary`, ties broken first by the companion coordinate
// and finally by a seeded index hash.  Breaking full-duplicate ties with
// the same hash on both axes keeps the transformed point multiset
// invariant under input permutation.
std::vector<double> coupled_ranks(const std::vector<double>& primary,
                                  const std::vector<double>& companion,
                                  std::uint64_t seed) {
  const std::size_t n = primary.size();
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (primary[a] != primary[b]) return primary[a] < primary[b];
    if (companion[a] != companion[b]) return companion[a] < companion[b];
    return derive_seed(seed, a) < derive_seed(seed, b);
  });
  std::vector<double> ranks(n);
  for (std::size_t pos = 0; pos < n; ++pos) ranks[order[pos]] = double(pos + 1);
  return ranks;
}

std::vector<double> psi_table(std::size_t nmax) {
  std::vector<double> t(nmax + 1, 0.0);
  for (std::size_t m = 1; m <= nmax; ++m) t[m] = digamma(double(m));
  return t;
}

void check_config(std::size_t n, int k, const char* fn) {
  if (k < 1) throw DomainError(std::string(fn) + ": k must be >= 1");
  if (n < std::size_t(k) + 1) {
    throw DomainError(std::string(fn) + ": need at least k + 1 points");
  }
}

NeighborStats neighbor_stats_impl(std::span<const double> xs,
                                  std::span<const double> ys, int k) {
  const std::size_t n = xs.size();
  KdTree tree(xs, ys);
  std::vector<double> sorted_x(xs.begin(), xs.end());
  std::vector<double> sorted_y(ys.begin(), ys.end());
  std::sort(sorted_x.begin(), sorted_x.end());
  std::sort(sorted_y.begin(), sorted_y.end());
  NeighborStats st;
  st.eps.resize(n);
  st.nx.resize(n);
  st.ny.resize(n);
  std::vector<double> heap;
  heap.reserve(std::size_t(k) + 1);
  for (std::size_t i = 0; i < n; ++i) {
    double eps = tree.kth_distance(int(i), k, heap);
    if (!(eps > 0.0)) {
      throw DegenerateInputError(
          "ksg_mi: identical points (k-th neighbor at distance zero); "
          "use the pseudo-observation transform or jitter the data");
    }
    st.eps[i] = eps;
    st.nx[i] = count_within(sorted_x, xs[i], eps);
    st.ny[i] = count_within(sorted_y, ys[i], eps);
  }
  return st;
}

double mi_from_stats(const NeighborStats& st, int k,
                     const std::vector<double>& psi) {
  const std::size_t n = st.eps.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += psi[std::size_t(st.nx[i]) + 1] + psi[std::size_t(st.ny[i]) + 1];
  }
  return psi[std::size_t(k)] + psi[n] - acc / double(n);
}

struct TransformedSample {
  std::vector<double> xs, ys;
};

// Deterministic offset in (-1/2, 1/2) keyed by a rank value.  Ranks form
// an exact lattice, where huge numbers of neighbor distances coincide and
// the strict counting rule resolves those ties by floating-point rounding
// accident, biasing the estimator upward by ~0.08/sqrt(n).  Spreading
// each rank inside its own grid cell removes the coincidences.  Keying
// the offset by rank (not by element index) and sharing it between the
// axes keeps the transformed point multiset exactly invariant under input
// permutation and under coordinate swap.
double degrid_offset(double rank, std::uint64_t seed) {
  std::uint64_t h = derive_seed(seed, std::uint64_t(rank));
  return (double(h >> 11) * 0x1.0p-53 - 0.5) * 0.999;
}

TransformedSample transform_sample(const std::vector<double>& x,
                                   const std::vector<double>& y,
                                   InputTransform transform,
                                   std::uint64_t tie_seed) {
  TransformedSample t;
  if (transform == InputTransform::raw) {
    t.xs = x;
    t.ys = y;
    return t;
  }
  const double scale = 1.0 / double(x.size() + 1);
  const std::uint64_t noise_seed = derive_seed(tie_seed, 0x6eu);
  t.xs = coupled_ranks(x, y, derive_seed(tie_seed, 0x75u));
  t.ys = coupled_ranks(y, x, derive_seed(tie_seed, 0x76u));
  for (double& v : t.xs) v = (v + degrid_offset(v, noise_seed)) * scale;
  for (double& v : t.ys) v = (v + degrid_offset(v, noise_seed)) * scale;
  return t;
}

void check_finite(const SamplePairs& s, const char* fn) {
  if (s.x.size() != s.y.size()) {
    throw DomainError(std::string(fn) + ": x/y length mismatch");
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
      throw DomainError(std::string(fn) + ": values must be finite");
    }
  }
}

// Percentile with linear interpolation between order statistics.
double percentile(const std::vector<double>& sorted, double q) {
  if (sorted.size() == 1) return sorted[0];
  double pos = q * double(sorted.size() - 1);
  std::size_t lo = std::size_t(pos);
  if (lo + 1 >= sorted.size()) return sorted.back();
  double frac = pos - double(lo);
  return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

}  // namespace

NeighborStats ksg_neighbor_stats(std::span<const double> xs,
                                 std::span<const double> ys, int k) {
  if (xs.size() != ys.size()) {
    throw DomainError("ksg_neighbor_stats: x/y length mismatch");
  }
  check_config(xs.size(), k, "ksg_neighbor_stats");
  return neighbor_stats_impl(xs, ys, k);
}

double ksg_mi(const SamplePairs& s, const KsgConfig& cfg) {
  check_finite(s, "ksg_mi");
  check_config(s.size(), cfg.k, "ksg_mi");
  TransformedSample t = transform_sample(s.x, s.y, cfg.transform, kTieBreakSeed);
  NeighborStats st = neighbor_stats_impl(t.xs, t.ys, cfg.k);
  return mi_from_stats(st, cfg.k, psi_table(s.size()));
}

MiEstimate bootstrap_mi(const SamplePairs& s, const KsgConfig& cfg,
                        int replicates, double level, std::uint64_t seed,
                        int threads) {
  check_finite(s, "bootstrap_mi");
  check_config(s.size(), cfg.k, "bootstrap_mi");
  if (replicates < 1) {
    throw DomainError("bootstrap_mi: replicates must be >= 1");
  }
  if (!(level > 0.0 && level < 1.0)) {
    throw DomainError("bootstrap_mi: level must lie in (0, 1)");
  }
  const std::size_t n = s.size();
  const std::vector<double> psi = psi_table(n);

  TransformedSample full = transform_sample(s.x, s.y, cfg.transform, kTieBreakSeed);
  const double point = mi_from_stats(neighbor_stats_impl(full.xs, full.ys, cfg.k),
                                     cfg.k, psi);

  // Replicates estimate on half-size subsamples drawn without
  // replacement.  Resampling whole pairs with replacement would hand the
  // estimator duplicate points, whose collapsed neighbor radii both shift
  // the replicates far off the estimate and inflate their spread; a
  // k-nearest-neighbor functional needs duplicate-free replicates.  The
  // half-sample deviations are rescaled by sqrt(m/n) to the full-sample
  // scale around the point estimate.
  const std::size_t m = std::max(std::size_t(cfg.k) + 1, n / 2);
  const double rescale = std::sqrt(double(m) / double(n));

  std::vector<double> reps(std::size_t(replicates), 0.0);
  parallel_for(std::size_t(replicates), threads, [&](std::size_t r) {
    const std::uint64_t sub_seed = derive_seed(seed, r);
    Rng rng(sub_seed);
    // Partial Fisher-Yates: the first m slots become the subsample.
    std::vector<std::uint32_t> pick(n);
    std::iota(pick.begin(), pick.end(), 0);
    for (std::size_t i = 0; i < m; ++i) {
      std::size_t j = i + std::size_t(rng.uniform01() * double(n - i));
      if (j >= n) j = n - 1;
      std::swap(pick[i], pick[j]);
    }
    std::vector<double> rx(m), ry(m);
    for (std::size_t i = 0; i < m; ++i) {
      rx[i] = s.x[pick[i]];
      ry[i] = s.y[pick[i]];
    }
    TransformedSample t = transform_sample(rx, ry, cfg.transform, sub_seed);
    reps[r] = mi_from_stats(neighbor_stats_impl(t.xs, t.ys, cfg.k), cfg.k,
                            psi);
  });

  // Percentiles of the deviations around the replicate mean, rescaled and
  // recentered at the full-sample estimate.
  double mean = 0.0;
  for (double v : reps) mean += v;
  mean /= double(reps.size());
  for (double& v : reps) v = point + rescale * (v - mean);

  std::sort(reps.begin(), reps.end());
  const double alpha = 0.5 * (1.0 - level);
  MiEstimate est;
  est.value = point;
  est.n = n;
  est.k = cfg.k;
  est.transform = cfg.transform;
  // The percentile bracket contains the point estimate by construction
  // except under extreme replicate skew; the interval contract requires it.
  est.ci_low = std::min(percentile(reps, alpha), point);
  est.ci_high = std::max(percentile(reps, 1.0 - alpha), point);
  est.level = level;
  est.replicates = replicates;
  est.seed = seed;
  return est;
}

}  // namespace copinfo
