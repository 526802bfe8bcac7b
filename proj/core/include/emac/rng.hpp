#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace emac {

/// Seedable generator with library-independent conversions.
///
/// The engine is std::mt19937_64 (fully specified by the standard); the
/// mapping from raw 64-bit words to uniforms, Bernoulli draws, indices and
/// Gumbel variates is implemented here rather than through <random>
/// distributions, whose algorithms are implementation-defined. Streams are
/// therefore reproducible bit-for-bit across toolchains.
///
/// `Rng(seed, stream)` derives independent sub-streams from one seed via
/// std::seed_seq, so components (arrivals, grants, exploration, replay
/// sampling) never share state.
class Rng {
 public:
  Rng() : Rng(0) {}
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform();

  /// Uniform on the open interval (0, 1).
  double uniform_open();

  /// Always consumes exactly one variate.
  bool bernoulli(double p) { return uniform() < p; }

  /// Unbiased index in [0, n). Requires n >= 1.
  std::size_t uniform_index(std::size_t n);

  /// Standard Gumbel(0, 1) variate.
  double gumbel();

  bool operator==(const Rng&) const = default;

 private:
  std::mt19937_64 engine_;
};

}  // namespace emac
