#pragma once

#include <cmath>
#include <cstdint>

#include "cellrobust/errors.hpp"

namespace cellrobust {

// SplitMix64 counter-based generator. The state advances by a fixed gamma and
// the output is a bijective hash of the counter, so streams seeded with
// distinct 64-bit seeds are independent for simulation purposes and every
// draw sequence is reproducible across platforms. Replication r of a study
// uses seed = base_seed + r.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double prob) { return next_double() < prob; }

  double uniform(double lo, double hi) { return lo + next_double() * (hi - lo); }

  // Unbiased integer in [0, n) by rejection.
  std::uint64_t uniform_int(std::uint64_t n) {
    if (n == 0) throw DomainError("uniform_int: n must be positive");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t draw;
    do {
      draw = next_u64();
    } while (draw >= limit);
    return draw % n;
  }

  // Standard normal via Box-Muller; the second variate of each pair is cached.
  double next_normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = next_double();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double u2 = next_double();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    cached_ = radius * std::sin(angle);
    have_cached_ = true;
    return radius * std::cos(angle);
  }

  double next_normal(double mean, double stddev) { return mean + stddev * next_normal(); }

  // Gamma(shape, rate) by the Marsaglia-Tsang squeeze; shapes below 1 are
  // boosted to shape + 1 and corrected by a U^{1/shape} factor.
  double next_gamma(double shape, double rate) {
    if (!(shape > 0.0) || !(rate > 0.0))
      throw DomainError("next_gamma: shape and rate must be positive");
    double boost = 1.0;
    if (shape < 1.0) {
      double u = next_double();
      if (u <= 0.0) u = 0x1.0p-53;
      boost = std::pow(u, 1.0 / shape);
      shape += 1.0;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x;
      double v;
      do {
        x = next_normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      double u = next_double();
      if (u <= 0.0) u = 0x1.0p-53;
      const double x2 = x * x;
      if (u < 1.0 - 0.0331 * x2 * x2) return boost * d * v / rate;
      if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return boost * d * v / rate;
    }
  }

 private:
  std::uint64_t state_;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace cellrobust
