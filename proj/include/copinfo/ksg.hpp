#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "copinfo/rank.hpp"

namespace copinfo {

enum class InputTransform {
  // Use the raw coordinates.  Identical points are rejected.
  raw,
  // Rank both coordinates into (0,1) first (ties jittered), which makes
  // the estimate exactly invariant under monotone marginal transforms.
  pseudo_observations,
};

struct KsgConfig {
  int k = 3;
  InputTransform transform = InputTransform::pseudo_observations;
};

// Per-point k-nearest-neighbor geometry: eps is the Chebyshev distance to
// the k-th nearest neighbor, nx/ny count the points strictly within eps
// along each axis (the query point itself excluded).
struct NeighborStats {
  std::vector<double> eps;
  std::vector<int> nx;
  std::vector<int> ny;
};

NeighborStats ksg_neighbor_stats(std::span<const double> xs,
                                 std::span<const double> ys, int k);

// k-nearest-neighbor mutual information estimate, in nats.  Deterministic
// for fixed input; may be slightly negative for independent data and is
// never clipped.
double ksg_mi(const SamplePairs& s, const KsgConfig& cfg = {});

struct MiEstimate {
  double value = 0.0;  // nats, estimated from the full sample
  std::size_t n = 0;
  int k = 0;
  InputTransform transform = InputTransform::pseudo_observations;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double level = 0.0;
  int replicates = 0;
  std::uint64_t seed = 0;
};

// Bootstrap confidence interval around ksg_mi.  Replicates re-estimate on
// half-size subsamples drawn without replacement (with-replacement
// resampling would feed the estimator duplicate points and wreck the
// neighbor radii); their rescaled deviations give the percentile interval.
// Replicates run as a deterministic parallel map: replicate r uses a seed
// derived from (seed, r), so the result is reproducible regardless of
// thread count.  Always ci_low <= value <= ci_high.
MiEstimate bootstrap_mi(const SamplePairs& s, const KsgConfig& cfg,
                        int replicates, double level, std::uint64_t seed,
                        int threads = 0);

}  // namespace copinfo
