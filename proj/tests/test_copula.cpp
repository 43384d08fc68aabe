#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "copinfo/copula.hpp"
#include "copinfo/errors.hpp"
#include "copinfo/rank.hpp"
#include "copinfo/special.hpp"
#include "doctest.h"
#include "support/quad.hpp"

using namespace copinfo;

TEST_SUITE("copula") {

TEST_CASE("gaussian information against quadrature and closed values") {
  CHECK(mi_gaussian(0.0) == 0.0);
  CHECK(mi_gaussian(0.5) ==
        doctest::Approx(0.14384103622589045).epsilon(1e-14));
  CHECK(mi_gaussian(0.9) ==
        doctest::Approx(0.8303656034108255).epsilon(1e-14));
  CHECK(mi_gaussian(-0.5) == mi_gaussian(0.5));
  for (double rho : {0.3, 0.8}) {
    CHECK(std::fabs(mi_gaussian(rho) - oracle::mi_gauss_quad(rho)) <= 1e-6);
  }
  CHECK_THROWS_AS(mi_gaussian(1.0), DomainError);
  CHECK_THROWS_AS(mi_gaussian(-1.0), DomainError);
}

TEST_CASE("t information against direct quadrature") {
  struct Cell {
    double rho, nu;
  };
  // The heavy-tail corner nu = 1 is the hard case for the integration,
  // which is why the oracle integrates radially.
  const Cell cells[] = {{0.0, 1.0}, {0.0, 5.0}, {0.5, 1.0},
                        {0.5, 3.0}, {0.8, 4.0}};
  for (const Cell& c : cells) {
    CAPTURE(c.rho);
    CAPTURE(c.nu);
    CHECK(std::fabs(mi_t(c.rho, c.nu) - oracle::mi_t_quad(c.rho, c.nu)) <=
          1e-5);
  }
  // The decomposition into gaussian part plus nu-only excess is exact.
  CHECK(mi_t(0.7, 2.5) == mi_gaussian(0.7) + excess_information(2.5));
}

TEST_CASE("excess information closed value, monotonicity, tail") {
  // nu = 1: ln(8 pi) - 3.
  CHECK(std::fabs(excess_information(1.0) -
                  (std::log(8.0 * std::numbers::pi) - 3.0)) <= 1e-11);

  const double grid[] = {0.5, 0.7, 1.0, 2.0, 4.0, 8.0,
                         16.0, 64.0, 256.0, 1e3, 1e4};
  for (std::size_t i = 1; i < std::size(grid); ++i) {
    CHECK(excess_information(grid[i]) < excess_information(grid[i - 1]));
  }
  CHECK(excess_information(1e4) > 0.0);

  // Far tail: excess ~ 1 / (2 nu^2).
  for (double nu : {100.0, 1000.0}) {
    const double scaled = 2.0 * nu * nu * excess_information(nu);
    CAPTURE(nu);
    CHECK(std::fabs(scaled - 1.0) < 0.02);
  }
  // Cancellation noise dominates the true 5e-13 by nu = 1e6, but the
  // result must still be indistinguishable from zero at coarse scale.
  CHECK(std::fabs(excess_information(1e6)) <= 1e-5);

  CHECK_THROWS_AS(excess_information(0.0), DomainError);
  CHECK_THROWS_AS(excess_information(-3.0), DomainError);
  CHECK_THROWS_AS(excess_information(1.0 / 0.0), DomainError);
}

TEST_CASE("density, scores, and likelihood are one consistent surface") {
  const CopulaModel models[] = {CopulaModel::gaussian(0.6),
                                CopulaModel::student_t(0.6, 4.0),
                                CopulaModel::student_t(-0.3, 1.5)};
  const double us[] = {0.03, 0.25, 0.5, 0.77, 0.99};
  for (const CopulaModel& m : models) {
    for (double u : us) {
      for (double v : us) {
        const double a = m.family == CopulaModel::Family::gaussian
                             ? std_normal_quantile(u)
                             : student_t_quantile(u, m.nu);
        const double b = m.family == CopulaModel::Family::gaussian
                             ? std_normal_quantile(v)
                             : student_t_quantile(v, m.nu);
        const double direct = copula_density(m, u, v);
        const double via_scores = std::exp(copula_log_density_scores(m, a, b));
        CHECK(direct == doctest::Approx(via_scores).epsilon(1e-12));
        // Exchangeable in (u, v) up to instruction-level rounding (fused
        // multiply-add contraction breaks bitwise symmetry of the form).
        CHECK(copula_density(m, v, u) == doctest::Approx(direct).epsilon(1e-14));
      }
    }
  }

  // The gaussian copula at rho = 0 is the independence copula; the t
  // copula at rho = 0 is not.
  CHECK(copula_density(CopulaModel::gaussian(0.0), 0.3, 0.8) == 1.0);
  CHECK(copula_density(CopulaModel::student_t(0.0, 3.0), 0.05, 0.05) != 1.0);

  CHECK_THROWS_AS(copula_density(models[0], 0.0, 0.5), DomainError);
  CHECK_THROWS_AS(copula_density(models[0], 0.5, 1.0), DomainError);
  CHECK_THROWS_AS(copula_log_likelihood(models[0], PseudoObservations{}),
                  DomainError);
  CHECK_THROWS_AS(
      copula_log_likelihood(models[0], PseudoObservations{{0.5, 1.0}, {0.5, 0.5}}),
      DomainError);
}

TEST_CASE("log likelihood of a self-sample approaches the information") {
  // E[ln c(U, V)] under the copula is exactly its mutual information.
  const CopulaModel m = CopulaModel::student_t(0.5, 4.0);
  const PseudoObservations p = sample_copula(m, 200000, 99);
  CHECK(std::fabs(copula_log_likelihood(m, p) - mi_t(0.5, 4.0)) < 0.01);

  const CopulaModel g = CopulaModel::gaussian(0.7);
  const PseudoObservations q = sample_copula(g, 200000, 17);
  CHECK(std::fabs(copula_log_likelihood(g, q) - mi_gaussian(0.7)) < 0.01);
}

TEST_CASE("univariate student entropy against quadrature") {
  for (double nu : {1.0, 3.0, 10.0}) {
    CAPTURE(nu);
    CHECK(std::fabs(student_entropy(CorrelationMatrix::identity(1), nu) -
                    oracle::t_entropy_quad(nu)) <= 1e-6);
  }
  // Large nu approaches the gaussian entropy d/2 (1 + ln 2 pi).
  const double gauss2 = 1.0 + std::log(2.0 * std::numbers::pi);
  CHECK(std::fabs(student_entropy(CorrelationMatrix::identity(2), 1e6) -
                  gauss2) <= 1e-4);
}

TEST_CASE("bivariate specialization of the multivariate information") {
  for (double rho : {0.5, 0.8}) {
    for (double nu : {3.0, 7.0}) {
      CHECK(std::fabs(mi_t_multivariate(CorrelationMatrix::from_rho(rho), nu) -
                      mi_t(rho, nu)) <= 1e-10);
    }
  }
  CHECK_THROWS_AS(mi_t_multivariate(CorrelationMatrix::identity(1), 3.0),
                  DomainError);
}

TEST_CASE("multivariate information against monte carlo at d = 3") {
  const double nu = 5.0;
  const CorrelationMatrix sigma(3, {1.0, 0.5, 0.3,  //
                                    0.5, 1.0, 0.2,  //
                                    0.3, 0.2, 1.0});
  const double formula = mi_t_multivariate(sigma, nu);

  // Hand-rolled Cholesky factor of sigma; the library's own is not used.
  double L10 = 0.5, L20 = 0.3;
  double L11 = std::sqrt(1.0 - 0.25);
  double L21 = (0.2 - 0.3 * 0.5) / L11;
  double L22 = std::sqrt(1.0 - L20 * L20 - L21 * L21);
  const double log_det = 2.0 * (std::log(L11) + std::log(L22));
  const double log_cj = std::lgamma(0.5 * (nu + 3.0)) -
                        std::lgamma(0.5 * nu) -
                        1.5 * std::log(nu * std::numbers::pi) - 0.5 * log_det;
  const double log_c1 = std::lgamma(0.5 * (nu + 1.0)) -
                        std::lgamma(0.5 * nu) -
                        0.5 * std::log(nu * std::numbers::pi);

  // I = E[ln f_joint(X) - sum ln f_marginal(X_i)] under X ~ t_nu(0, sigma);
  // X = sqrt(nu / W) L eps with eps standard normal and W chi-square nu.
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::chi_squared_distribution<double> chi2(nu);
  const std::size_t draws = 4000000;
  double acc = 0.0;
  for (std::size_t i = 0; i < draws; ++i) {
    const double e0 = gauss(rng), e1 = gauss(rng), e2 = gauss(rng);
    const double scale = std::sqrt(nu / chi2(rng));
    const double x0 = e0 * scale;
    const double x1 = (L10 * e0 + L11 * e1) * scale;
    const double x2 = (L20 * e0 + L21 * e1 + L22 * e2) * scale;
    // Forward solve L w = x gives the quadratic form as |w|^2.
    const double w0 = x0;
    const double w1 = (x1 - L10 * w0) / L11;
    const double w2 = (x2 - L20 * w0 - L21 * w1) / L22;
    const double qf = w0 * w0 + w1 * w1 + w2 * w2;
    const double log_joint = log_cj - 0.5 * (nu + 3.0) * std::log1p(qf / nu);
    const double log_margs =
        3.0 * log_c1 -
        0.5 * (nu + 1.0) *
            (std::log1p(x0 * x0 / nu) + std::log1p(x1 * x1 / nu) +
             std::log1p(x2 * x2 / nu));
    acc += log_joint - log_margs;
  }
  const double mc = acc / double(draws);
  CAPTURE(mc);
  CAPTURE(formula);
  CHECK(std::fabs(mc - formula) <= 4e-3);
}

TEST_CASE("copula sampling hits the tau it promises") {
  const PseudoObservations p =
      sample_copula(CopulaModel::student_t(0.5, 4.0), 200000, 31);
  bool inside = true;
  for (std::size_t i = 0; i < p.size(); ++i) {
    inside = inside && p.u[i] > 0.0 && p.u[i] < 1.0 && p.v[i] > 0.0 &&
             p.v[i] < 1.0;
  }
  CHECK(inside);
  double mean_u = 0.0;
  for (double u : p.u) mean_u += u;
  CHECK(std::fabs(mean_u / double(p.size()) - 0.5) < 0.004);
  // tau = (2 / pi) asin(rho) = 1/3 for rho = 0.5; sd ~ 1.5e-3 at this n.
  CHECK(std::fabs(kendall_tau(SamplePairs{p.u, p.v}) - 1.0 / 3.0) < 0.01);

  const PseudoObservations g =
      sample_copula(CopulaModel::gaussian(0.8), 100000, 32);
  const double tau_true = 2.0 / std::numbers::pi * std::asin(0.8);
  CHECK(std::fabs(kendall_tau(SamplePairs{g.u, g.v}) - tau_true) < 0.01);

  // Determinism in the seed.
  const PseudoObservations r1 =
      sample_copula(CopulaModel::student_t(0.2, 2.0), 1000, 5);
  const PseudoObservations r2 =
      sample_copula(CopulaModel::student_t(0.2, 2.0), 1000, 5);
  CHECK(r1.u == r2.u);
  CHECK(r1.v == r2.v);
  CHECK_THROWS_AS(sample_copula(CopulaModel::gaussian(0.1), 0, 1), DomainError);
}

TEST_CASE("apply_marginals reshapes values but not ranks") {
  const PseudoObservations p =
      sample_copula(CopulaModel::student_t(0.3, 3.0), 5000, 7);
  const SamplePairs s = apply_marginals(p, MarginalSpec::log_normal(0.0, 1.2),
                                        MarginalSpec::student_t(3.0));
  CHECK(kendall_tau(s) == kendall_tau(SamplePairs{p.u, p.v}));
  CHECK(spearman_rho(s) == spearman_rho(SamplePairs{p.u, p.v}));
  CHECK(linear_correlation(s) != linear_correlation(SamplePairs{p.u, p.v}));
  bool positive = true;
  for (double x : s.x) positive = positive && x > 0.0;
  CHECK(positive);  // log-normal support
}

TEST_CASE("marginal quantile functions") {
  CHECK(MarginalSpec::uniform().quantile(0.37) == 0.37);
  CHECK(MarginalSpec::gaussian(2.0, 3.0).quantile(0.5) == 2.0);
  CHECK(MarginalSpec::student_t(4.0).quantile(0.5) == 0.0);
  CHECK(MarginalSpec::log_normal(0.0, 1.0).quantile(0.5) == 1.0);
  // Strictly increasing.
  const MarginalSpec specs[] = {
      MarginalSpec::uniform(), MarginalSpec::gaussian(-1.0, 0.5),
      MarginalSpec::student_t(2.0), MarginalSpec::log_normal(0.1, 1.2)};
  for (const MarginalSpec& m : specs) {
    double prev = m.quantile(0.01);
    for (double grid = 0.1; grid < 1.0; grid += 0.1) {
      const double q = m.quantile(grid);
      CHECK(q > prev);
      prev = q;
    }
  }
  CHECK_THROWS_AS(MarginalSpec::uniform().quantile(0.0), DomainError);
  CHECK_THROWS_AS(MarginalSpec::uniform().quantile(1.0), DomainError);
  CHECK_THROWS_AS(MarginalSpec::gaussian(0.0, 0.0), DomainError);
  CHECK_THROWS_AS(MarginalSpec::gaussian(1.0 / 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(MarginalSpec::student_t(-1.0), DomainError);
  CHECK_THROWS_AS(MarginalSpec::log_normal(0.0, -2.0), DomainError);
}

TEST_CASE("model and matrix validation") {
  CHECK_THROWS_AS(CopulaModel::gaussian(1.0), DomainError);
  CHECK_THROWS_AS(CopulaModel::student_t(0.5, 0.0), DomainError);
  CHECK_THROWS_AS(CopulaModel::student_t(-1.5, 3.0), DomainError);
  CHECK_THROWS_AS(CopulaModel::student_t(0.5, 1.0 / 0.0), DomainError);

  CHECK(CorrelationMatrix::identity(3).log_det() == 0.0);
  CHECK(CorrelationMatrix::from_rho(0.5).log_det() == std::log(0.75));
  const CorrelationMatrix m(2, {1.0, 0.25, 0.25, 1.0});
  CHECK(m(0, 1) == 0.25);
  CHECK(m.dim() == 2);

  CHECK_THROWS_AS(CorrelationMatrix(2, {1.0, 0.5, 0.5}), DomainError);
  CHECK_THROWS_AS(CorrelationMatrix(2, {2.0, 0.5, 0.5, 1.0}), DomainError);
  CHECK_THROWS_AS(CorrelationMatrix(2, {1.0, 0.5, 0.3, 1.0}), DomainError);
  CHECK_THROWS_AS(CorrelationMatrix(3, {1.0, 0.9, -0.9,  //
                                        0.9, 1.0, 0.9,   //
                                        -0.9, 0.9, 1.0}),
                  DomainError);
  CHECK_THROWS_AS(CorrelationMatrix::from_rho(-1.0), DomainError);
}

}  // TEST_SUITE
