// rng.hpp: deterministic, splittable pseudo-random source.
//
// Every stochastic routine in the library takes an explicit Rng&.  A run is
// reproduced bit-for-bit by reseeding with the same master seed; independent
// trials derive their own streams with split(), so adding or reordering draws
// inside one trial never perturbs another.
#pragma once

#include <cmath>
#include <cstdint>

namespace rpd {

/// Counter-based generator built on the splitmix64 permutation.  The state is
/// a single 64-bit word advanced by the golden-ratio increment; each output is
/// the finalized mix of the new state.  Period 2^64, no warm-up required.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  /// Next raw 64-bit word.
  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal via the Marsaglia polar method; the second variate of
  /// each pair is cached so consecutive calls consume draws at half rate.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double v1, v2, s;
    do {
      v1 = 2.0 * uniform() - 1.0;
      v2 = 2.0 * uniform() - 1.0;
      s = v1 * v1 + v2 * v2;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v2 * m;
    has_spare_ = true;
    return v1 * m;
  }

  /// Uniform integer in [0, n).  n must be positive.
  std::uint64_t uniform_index(std::uint64_t n) {
    // Rejection from the top keeps the distribution exact.
    const std::uint64_t limit = ~0ULL - (~0ULL % n);
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return x % n;
  }

  /// Derive an independent stream for sub-task `index` (trial, worker, ...).
  /// The derivation hashes (state-seed, index) through the same permutation,
  /// so streams for different indices are decorrelated and stable under
  /// changes to how much the parent stream itself is consumed.
  static Rng split(std::uint64_t master_seed, std::uint64_t index) {
    Rng mix(master_seed ^ (0x94d049bb133111ebULL * (index + 1)));
    // Burn one output so the child state is a finalized mix, not a raw xor.
    std::uint64_t s = mix.next_u64();
    return Rng(s);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace rpd
