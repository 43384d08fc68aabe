#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "copinfo/copula.hpp"
#include "copinfo/dataio.hpp"
#include "copinfo/identify.hpp"

namespace copinfo {

struct ScanRow {
  std::string ticker_a;
  std::string ticker_b;
  std::size_t n = 0;          // pairwise-complete observations
  std::uint64_t seed = 0;     // per-pair seed derived from the master seed
  std::optional<FitReport> fit{};
  std::string skip_reason;    // set when fit is disengaged
};

// One row per unordered ticker pair, sorted by (ticker_a, ticker_b) with
// ticker_a < ticker_b.  Pair p (in that order) is fitted with seed
// derive_seed(cfg.seed, p), so a row reproduces exactly as a single fit
// of the same pair file with that seed.  Pairs whose fit cannot proceed
// (too few common observations, degenerate ranks) carry a skip reason
// instead.  Pairs run as a deterministic parallel map.
std::vector<ScanRow> scan_pairs(const ReturnPanel& panel, const FitConfig& cfg);

struct SimulateConfig {
  CopulaModel model = CopulaModel::gaussian(0.0);
  MarginalSpec marginal_x{};
  MarginalSpec marginal_y{};
  std::size_t n = 4700;
  int runs = 20;
  std::uint64_t seed = 1;
  KsgConfig ksg{};
  int threads = 0;
};

struct SimRun {
  int run = 0;
  double mi = 0.0;       // KSG point estimate on the simulated sample
  double tau = 0.0;
  double mi_true = 0.0;  // analytic MI of the generating model
};

// Estimator-vs-truth study: each run samples the copula, applies the
// marginals, and estimates MI and tau.  Run r samples with seed
// derive_seed(seed, r).
std::vector<SimRun> simulate_runs(const SimulateConfig& cfg);

}  // namespace copinfo
