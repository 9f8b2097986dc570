#ifndef STOPPROFILER_RNG_HPP
#define STOPPROFILER_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>

namespace stopprofiler {

// Deterministic 64-bit linear congruential generator using Knuth's MMIX
// constants:
//
//   state <- state * 6364136223846793005 + 1442695040888963407   (mod 2^64)
//
// Every derived draw (uniform, normal, poisson) is defined purely in terms of
// this recurrence, so any implementation of the same arithmetic reproduces
// every seeded result in this library bit for bit. Uniform doubles take the
// top 53 bits of the state.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
    return state_;
  }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in (0, 1]; safe as a log argument.
  double uniform_pos() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform index in [0, n). n must be positive.
  std::size_t index(std::size_t n) {
    auto i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return i < n ? i : n - 1;
  }

  // Standard normal via Box-Muller, cosine branch only: each call consumes
  // exactly two uniforms and the stream position never depends on the values
  // drawn.
  double normal() {
    const double u1 = uniform_pos();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  // Poisson count by Knuth's product method. Means above 30 are split into
  // independent chunks, exact because Poisson(a) + Poisson(b) ~ Poisson(a+b).
  std::int64_t poisson(double mean) {
    std::int64_t total = 0;
    while (mean > 30.0) {
      total += poisson_small(30.0);
      mean -= 30.0;
    }
    return total + poisson_small(mean);
  }

  // Stream splitter (splitmix64 finalizer) for derived per-item seeds. The
  // generator for item i of a run seeded with s is Rng(derive(s, i)).
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

private:
  std::int64_t poisson_small(double mean) {
    if (mean <= 0.0) return 0;
    const double limit = std::exp(-mean);
    std::int64_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > limit);
    return k - 1;
  }

  std::uint64_t state_;
};

}  // namespace stopprofiler

#endif  // STOPPROFILER_RNG_HPP
