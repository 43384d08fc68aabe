#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>

namespace copinfo {

// Deterministic random source.  All sampling in the library goes through
// this class so that a seed fully determines every draw; distribution
// mappings are fixed here rather than delegated to unspecified standard
// library distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform draw strictly inside (0, 1).
  double uniform01() {
    return (double((gen_() >> 11)) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller.
  double normal() { return normal_pair().first; }

  std::pair<double, double> normal_pair() {
    double u1 = uniform01();
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    return {r * std::cos(a), r * std::sin(a)};
  }

  // Gamma(shape, scale=1), shape > 0, via Marsaglia-Tsang squeeze with
  // the usual boost for shape < 1.
  double gamma(double shape);

  double chi_square(double nu) { return 2.0 * gamma(0.5 * nu); }

 private:
  std::mt19937_64 gen_;
};

// Derives an independent stream seed from a master seed and an index
// (bootstrap replicate, simulation run, scan pair, ...).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace copinfo
