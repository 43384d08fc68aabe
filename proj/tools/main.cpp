// Command-line front end: MI estimates, T-copula fits, pairwise scans,
// simulation studies, and excess-curve tables over the copinfo library.
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "copinfo/copula.hpp"
#include "copinfo/dataio.hpp"
#include "copinfo/errors.hpp"
#include "copinfo/identify.hpp"
#include "copinfo/ksg.hpp"
#include "copinfo/scan.hpp"

using json = nlohmann::ordered_json;
using namespace copinfo;

namespace {

struct EstimatorOpts {
  int k = 3;
  std::string transform = "pseudo";
  int replicates = 200;
  double level = 0.90;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string format = "json";
};

void add_estimator_flags(CLI::App* cmd, EstimatorOpts& o, bool bootstrap) {
  cmd->add_option("--k", o.k, "Nearest-neighbor order")->capture_default_str();
  cmd->add_option("--transform", o.transform, "Input transform")
      ->check(CLI::IsMember({"pseudo", "raw"}))
      ->capture_default_str();
  if (bootstrap) {
    cmd->add_option("--replicates", o.replicates, "Bootstrap replicates")
        ->capture_default_str();
    cmd->add_option("--level", o.level, "Confidence level")
        ->capture_default_str();
  }
  cmd->add_option("--seed", o.seed, "Master RNG seed")->capture_default_str();
  cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)")
      ->capture_default_str();
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

KsgConfig ksg_config(const EstimatorOpts& o) {
  KsgConfig cfg;
  cfg.k = o.k;
  cfg.transform = o.transform == "raw" ? InputTransform::raw
                                       : InputTransform::pseudo_observations;
  return cfg;
}

FitConfig fit_config(const EstimatorOpts& o, bool force_nu) {
  FitConfig cfg;
  cfg.ksg = ksg_config(o);
  cfg.replicates = o.replicates;
  cfg.level = o.level;
  cfg.seed = o.seed;
  cfg.force_nu = force_nu;
  cfg.threads = o.threads;
  return cfg;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json meta_json(const EstimatorOpts& o, bool bootstrap) {
  json m;
  m["units"] = "nats";
  m["k"] = o.k;
  m["transform"] = o.transform;
  if (bootstrap) {
    m["replicates"] = o.replicates;
    m["level"] = o.level;
  }
  m["seed"] = o.seed;
  return m;
}

std::string meta_csv(const EstimatorOpts& o, bool bootstrap) {
  char level[32];
  std::snprintf(level, sizeof level, "%g", o.level);
  std::string s = "# units=nats k=" + std::to_string(o.k) +
                  " transform=" + o.transform;
  if (bootstrap) {
    s += " replicates=" + std::to_string(o.replicates) + " level=" + level;
  }
  s += " seed=" + std::to_string(o.seed);
  return s + "\n";
}

json mi_json(const MiEstimate& mi) {
  json j;
  j["value"] = mi.value;
  j["ci_low"] = mi.ci_low;
  j["ci_high"] = mi.ci_high;
  j["n"] = mi.n;
  return j;
}

void run_mi(const std::string& path, const EstimatorOpts& o) {
  const SamplePairs s = read_pair_file(path);
  const MiEstimate mi = bootstrap_mi(s, ksg_config(o), o.replicates, o.level,
                                     o.seed, o.threads);
  if (o.format == "json") {
    json j;
    j["command"] = "mi";
    j["meta"] = meta_json(o, true);
    j.update(mi_json(mi));
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << meta_csv(o, true) << "value,ci_low,ci_high,n\n"
              << fmt(mi.value) << ',' << fmt(mi.ci_low) << ','
              << fmt(mi.ci_high) << ',' << mi.n << "\n";
  }
}

json fit_json(const FitReport& r) {
  json j;
  j["tau"] = r.tau;
  j["rho_hat"] = r.rho_hat;
  j["mi"] = r.mi.value;
  j["ci_low"] = r.mi.ci_low;
  j["ci_high"] = r.mi.ci_high;
  j["n"] = r.mi.n;
  j["excess"] = r.excess;
  j["excess_ci_low"] = r.excess_ci_low;
  j["excess_ci_high"] = r.excess_ci_high;
  if (r.nu_hat) {
    j["nu_hat_or_gaussian"] = *r.nu_hat;
  } else {
    j["nu_hat_or_gaussian"] = "gaussian";
  }
  j["loglik_at_fit"] = r.loglik_at_fit;
  j["kl_diagnostic"] = r.kl_diagnostic;
  return j;
}

constexpr const char* kFitColumns =
    "tau,rho_hat,mi,ci_low,ci_high,excess,excess_ci_low,excess_ci_high,"
    "nu_hat_or_gaussian,loglik_at_fit,kl_diagnostic";

std::string fit_csv(const FitReport& r) {
  std::string nu = r.nu_hat ? fmt(*r.nu_hat) : std::string("gaussian");
  return fmt(r.tau) + "," + fmt(r.rho_hat) + "," + fmt(r.mi.value) + "," +
         fmt(r.mi.ci_low) + "," + fmt(r.mi.ci_high) + "," + fmt(r.excess) +
         "," + fmt(r.excess_ci_low) + "," + fmt(r.excess_ci_high) + "," + nu +
         "," + fmt(r.loglik_at_fit) + "," + fmt(r.kl_diagnostic);
}

void run_fit(const std::string& path, const EstimatorOpts& o, bool force_nu) {
  const SamplePairs s = read_pair_file(path);
  const FitReport r = fit_t_copula(s, fit_config(o, force_nu));
  if (o.format == "json") {
    json j;
    j["command"] = "fit";
    j["meta"] = meta_json(o, true);
    j.update(fit_json(r));
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << meta_csv(o, true) << "n," << kFitColumns << "\n"
              << r.mi.n << ',' << fit_csv(r) << "\n";
  }
}

void run_scan(const std::string& path, const EstimatorOpts& o,
              const std::string& mode) {
  const PricePanel panel = read_price_panel(path);
  const ReturnPanel returns =
      ingest_returns(panel, mode == "close-close"
                                ? ReturnMode::close_over_prev_close
                                : ReturnMode::close_over_open);
  const std::vector<ScanRow> rows = scan_pairs(returns, fit_config(o, false));

  if (o.format == "json") {
    json j;
    j["command"] = "scan";
    j["meta"] = meta_json(o, true);
    j["meta"]["mode"] = mode;
    json out = json::array();
    for (const ScanRow& row : rows) {
      json rj;
      rj["ticker_a"] = row.ticker_a;
      rj["ticker_b"] = row.ticker_b;
      rj["n"] = row.n;
      rj["seed"] = row.seed;
      if (row.fit) {
        rj.update(fit_json(*row.fit));
      } else {
        rj["skip_reason"] = row.skip_reason;
      }
      out.push_back(std::move(rj));
    }
    j["rows"] = std::move(out);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << meta_csv(o, true) << "ticker_a,ticker_b,n,seed,"
              << kFitColumns << ",skip_reason\n";
    for (const ScanRow& row : rows) {
      std::cout << row.ticker_a << ',' << row.ticker_b << ',' << row.n << ','
                << row.seed << ',';
      if (row.fit) {
        std::cout << fit_csv(*row.fit) << ',';
      } else {
        std::cout << ",,,,,,,,,,," << row.skip_reason;
      }
      std::cout << "\n";
    }
  }
}

// NAME[:p1[,p2]] with NAME in {uniform, gaussian, lognormal, student-t}.
MarginalSpec parse_marginal(const std::string& text) {
  MarginalSpec spec;
  std::string name = text;
  std::vector<double> params;
  if (const std::size_t colon = text.find(':'); colon != std::string::npos) {
    name = text.substr(0, colon);
    std::string rest = text.substr(colon + 1);
    std::size_t start = 0;
    while (start <= rest.size()) {
      const std::size_t comma = rest.find(',', start);
      const std::string tok =
          rest.substr(start, comma == std::string::npos ? std::string::npos
                                                        : comma - start);
      try {
        std::size_t used = 0;
        params.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw CLI::ValidationError("--marginals: bad parameter `" + tok + "`");
      }
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  auto want = [&](std::size_t max) {
    if (params.size() > max) {
      throw CLI::ValidationError("--marginals: too many parameters for " + name);
    }
  };
  if (name == "uniform") {
    want(0);
    spec.kind = MarginalSpec::Kind::uniform;
  } else if (name == "gaussian") {
    want(2);
    spec.kind = MarginalSpec::Kind::gaussian;
  } else if (name == "lognormal") {
    want(2);
    spec.kind = MarginalSpec::Kind::log_normal;
  } else if (name == "student-t") {
    want(1);
    spec.kind = MarginalSpec::Kind::student_t;
    spec.nu = 3.0;
    if (!params.empty()) spec.nu = params[0];
    return spec;
  } else {
    throw CLI::ValidationError("--marginals: unknown distribution `" + name + "`");
  }
  if (params.size() > 0) spec.mu = params[0];
  if (params.size() > 1) spec.sigma = params[1];
  return spec;
}

void run_simulate(const EstimatorOpts& o, double rho,
                  const std::optional<double>& nu,
                  const std::string& marginals, std::size_t n, int runs) {
  SimulateConfig cfg;
  cfg.model = nu ? CopulaModel::student_t(rho, *nu) : CopulaModel::gaussian(rho);
  cfg.marginal_x = parse_marginal(marginals);
  cfg.marginal_y = cfg.marginal_x;
  cfg.n = n;
  cfg.runs = runs;
  cfg.seed = o.seed;
  cfg.ksg = ksg_config(o);
  cfg.threads = o.threads;
  const std::vector<SimRun> out = simulate_runs(cfg);

  if (o.format == "json") {
    json j;
    j["command"] = "simulate";
    j["meta"] = meta_json(o, false);
    j["meta"]["rho"] = rho;
    if (nu) {
      j["meta"]["nu"] = *nu;
    } else {
      j["meta"]["family"] = "gaussian";
    }
    j["meta"]["marginals"] = marginals;
    j["meta"]["n"] = n;
    j["meta"]["runs"] = runs;
    json rows = json::array();
    for (const SimRun& r : out) {
      rows.push_back({{"run", r.run},
                      {"mi", r.mi},
                      {"tau", r.tau},
                      {"mi_true", r.mi_true}});
    }
    j["rows"] = std::move(rows);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << meta_csv(o, false);
    std::cout << "# rho=" << fmt(rho)
              << (nu ? " nu=" + fmt(*nu) : std::string(" family=gaussian"))
              << " marginals=" << marginals << " n=" << n << " runs=" << runs
              << "\n";
    std::cout << "run,mi,tau,mi_true\n";
    for (const SimRun& r : out) {
      std::cout << r.run << ',' << fmt(r.mi) << ',' << fmt(r.tau) << ','
                << fmt(r.mi_true) << "\n";
    }
  }
}

void run_excess_curve(double nu_min, double nu_max, int steps) {
  const bool single = steps == 1 && nu_min == nu_max;
  if (!single && !(nu_min > 0.0 && nu_min < nu_max && steps >= 2)) {
    throw CLI::ValidationError(
        "excess-curve: need 0 < nu-min < nu-max and steps >= 2");
  }
  if (!(nu_min > 0.0)) {
    throw CLI::ValidationError("excess-curve: nu must be positive");
  }
  std::cout << "nu,excess\n";
  const double la = std::log(nu_min);
  const double lb = std::log(nu_max);
  for (int i = 0; i < steps; ++i) {
    // Endpoints are pinned so the table covers exactly [nu-min, nu-max];
    // exp(log x) alone would miss them by an ulp or two.
    double nu = nu_min;
    if (i == steps - 1 && !single) nu = nu_max;
    if (i > 0 && i < steps - 1) {
      nu = std::exp(la + (lb - la) * double(i) / double(steps - 1));
    }
    std::cout << fmt(nu) << ',' << fmt(excess_information(nu)) << "\n";
  }
}

std::string error_object(const std::string& type, const std::string& message) {
  json j;
  j["error"] = {{"type", type}, {"message", message}};
  return j.dump() + "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dependence measurement with copulas and k-NN mutual information"};
  app.require_subcommand(1);

  EstimatorOpts mi_opts;
  std::string mi_path;
  CLI::App* mi_cmd = app.add_subcommand("mi", "KSG mutual information with bootstrap interval");
  mi_cmd->add_option("file", mi_path, "Two-column pair file")->required();
  add_estimator_flags(mi_cmd, mi_opts, true);
  mi_cmd->callback([&] { run_mi(mi_path, mi_opts); });

  EstimatorOpts fit_opts;
  std::string fit_path;
  bool force_nu = false;
  CLI::App* fit_cmd = app.add_subcommand("fit", "Identify the T copula of a pair file");
  fit_cmd->add_option("file", fit_path, "Two-column pair file")->required();
  add_estimator_flags(fit_cmd, fit_opts, true);
  fit_cmd->add_flag("--force-nu", force_nu,
                    "Invert nu even when the excess interval covers zero");
  fit_cmd->callback([&] { run_fit(fit_path, fit_opts, force_nu); });

  EstimatorOpts scan_opts;
  std::string scan_path;
  std::string scan_mode = "close-open";
  CLI::App* scan_cmd = app.add_subcommand("scan", "Fit every ticker pair of a price panel");
  scan_cmd->add_option("file", scan_path, "Price panel CSV")->required();
  scan_cmd->add_option("--mode", scan_mode, "Return definition")
      ->check(CLI::IsMember({"close-open", "close-close"}))
      ->capture_default_str();
  add_estimator_flags(scan_cmd, scan_opts, true);
  scan_cmd->callback([&] { run_scan(scan_path, scan_opts, scan_mode); });

  EstimatorOpts sim_opts;
  double sim_rho = 0.0;
  std::optional<double> sim_nu;
  bool sim_gaussian = false;
  std::string sim_marginals = "uniform";
  std::size_t sim_n = 4700;
  int sim_runs = 20;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "Sample a copula and estimate MI per run");
  sim_cmd->add_option("--rho", sim_rho, "Copula correlation")->capture_default_str();
  CLI::Option* nu_opt = sim_cmd->add_option("--nu", sim_nu, "T-copula degrees of freedom (omit for Gaussian)");
  sim_cmd->add_flag("--gaussian", sim_gaussian, "Use the Gaussian copula")->excludes(nu_opt);
  sim_cmd->add_option("--marginals", sim_marginals,
                      "Marginal distribution NAME[:p1[,p2]]; uniform, gaussian, lognormal, student-t")
      ->capture_default_str();
  sim_cmd->add_option("--n", sim_n, "Sample size per run")->capture_default_str();
  sim_cmd->add_option("--runs", sim_runs, "Number of runs")->capture_default_str();
  add_estimator_flags(sim_cmd, sim_opts, false);
  sim_cmd->callback([&] {
    run_simulate(sim_opts, sim_rho, sim_nu, sim_marginals, sim_n, sim_runs);
  });

  double curve_min = 1.0, curve_max = 1e6;
  int curve_steps = 61;
  CLI::App* curve_cmd = app.add_subcommand("excess-curve",
                                           "Tabulate the nu -> excess information curve (CSV)");
  curve_cmd->add_option("--nu-min", curve_min, "Smallest nu")->capture_default_str();
  curve_cmd->add_option("--nu-max", curve_max, "Largest nu")->capture_default_str();
  curve_cmd->add_option("--steps", curve_steps, "Grid size (log-spaced)")->capture_default_str();
  curve_cmd->callback([&] { run_excess_curve(curve_min, curve_max, curve_steps); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << error_object("usage", e.what());
    return 2;
  } catch (const DataError& e) {
    std::cerr << error_object("data", e.what());
    return 3;
  } catch (const DomainError& e) {
    std::cerr << error_object("domain", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::cerr << error_object("internal", e.what());
    return 1;
  }
  return 0;
}
