#pragma once

#include <cstdint>
#include <span>

namespace radeval {

/// Deterministic splitmix64 generator. Every random decision in this project
/// goes through this type so that seeded runs reproduce bit-for-bit across
/// platforms and standard-library versions (std:: distributions do not give
/// that guarantee).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

  /// Index drawn from an explicit probability vector (inverse CDF walk).
  /// Probabilities must sum to ~1; the last index absorbs rounding slack.
  std::size_t categorical(std::span<const double> probs) {
    const double u = uniform();
    double cum = 0.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
      cum += probs[i];
      if (u < cum) return i;
    }
    return probs.empty() ? 0 : probs.size() - 1;
  }

 private:
  std::uint64_t state_;
};

}  // namespace radeval
