#pragma once

#include <cstdint>
#include <random>

namespace kinex {

/// Reproducible random source. The engine is std::mt19937_64 seeded through
/// std::seed_seq with (seed, stream); both algorithms are fixed by the
/// standard, and all variate transforms below are written out here instead
/// of using <random> distributions, whose output is implementation-defined.
/// Equal (seed, stream) pairs therefore give bit-identical sequences on any
/// conforming toolchain.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();

  /// Uniform integer in [0, bound), bound > 0, without modulo bias.
  std::uint64_t uniform_index(std::uint64_t bound);

  double standard_normal();
  double exponential();

  /// Gamma(shape, scale 1). Marsaglia-Tsang rejection, no squeeze; shapes
  /// below 1 are boosted via Gamma(a) = Gamma(a + 1) * U^(1/a).
  double gamma(double shape);

  /// Beta(a, b) as X1 / (X1 + X2) with independent Gamma(a), Gamma(b).
  double beta(double a, double b);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_normal_ = false;
};

}  // namespace kinex
