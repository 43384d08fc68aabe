#include "copinfo/scan.hpp"

#include <string>
#include <utility>

#include "copinfo/errors.hpp"
#include "copinfo/ksg.hpp"
#include "copinfo/parallel.hpp"
#include "copinfo/rng.hpp"

namespace copinfo {

std::vector<ScanRow> scan_pairs(const ReturnPanel& panel,
                                const FitConfig& cfg) {
  const std::size_t t = panel.tickers.size();
  if (t < 2) throw DataError("scan: need at least two tickers");

  // Sorted ticker order fixes both the pair enumeration and the per-pair
  // seeds, independent of column order in the input file.
  std::vector<std::size_t> order(t);
  for (std::size_t i = 0; i < t; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return panel.tickers[a] < panel.tickers[b];
  });

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < t; ++i) {
    for (std::size_t j = i + 1; j < t; ++j) {
      pairs.emplace_back(order[i], order[j]);
    }
  }

  std::vector<ScanRow> rows(pairs.size());
  parallel_for(pairs.size(), cfg.threads, [&](std::size_t p) {
    ScanRow& row = rows[p];
    row.ticker_a = panel.tickers[pairs[p].first];
    row.ticker_b = panel.tickers[pairs[p].second];
    row.seed = derive_seed(cfg.seed, p);

    const SamplePairs s = complete_pairs(panel, pairs[p].first, pairs[p].second);
    row.n = s.size();
    if (row.n < cfg.min_n) {
      row.skip_reason = "n = " + std::to_string(row.n) + " below the floor of " +
                        std::to_string(cfg.min_n);
      return;
    }
    FitConfig pair_cfg = cfg;
    pair_cfg.seed = row.seed;
    pair_cfg.threads = 1;  // parallelism lives at the pair level
    try {
      row.fit = fit_t_copula(s, pair_cfg);
    } catch (const DomainError& e) {
      // A wild pair (constant series, perfectly monotone ranks) must not
      // abort the rest of the scan.
      row.skip_reason = e.what();
    }
  });
  return rows;
}

std::vector<SimRun> simulate_runs(const SimulateConfig& cfg) {
  if (cfg.runs < 1) throw DomainError("simulate: runs must be >= 1");
  if (cfg.n < 2) throw DomainError("simulate: n must be >= 2");

  const double mi_true = cfg.model.family == CopulaModel::Family::gaussian
                             ? mi_gaussian(cfg.model.rho)
                             : mi_t(cfg.model.rho, cfg.model.nu);

  std::vector<SimRun> runs(std::size_t(cfg.runs));
  parallel_for(runs.size(), cfg.threads, [&](std::size_t r) {
    const PseudoObservations p =
        sample_copula(cfg.model, cfg.n, derive_seed(cfg.seed, r));
    const SamplePairs s = apply_marginals(p, cfg.marginal_x, cfg.marginal_y);
    SimRun& out = runs[r];
    out.run = int(r);
    out.mi = ksg_mi(s, cfg.ksg);
    out.tau = kendall_tau(s);
    out.mi_true = mi_true;
  });
  return runs;
}

}  // namespace copinfo
