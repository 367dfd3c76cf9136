#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>

namespace flexauc {

/// Seedable generator with portable draws.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The standard distributions are not, so the conversions to
/// uniform reals, bounded integers and normals are done here, which keeps
/// every draw bit-identical across standard library implementations.
///
/// Stream splitting: `Rng::derive(parent, index)` mixes a parent seed with a
/// stream index through splitmix64. Scenario generation uses
/// master -> WSP i (index i) -> user j (index j), so adding a WSP or a user
/// never perturbs draws made for earlier ones.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  static constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

  static constexpr std::uint64_t derive(std::uint64_t parent, std::uint64_t index) {
    return splitmix64(splitmix64(parent) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
  }

  Rng substream(std::uint64_t index) const { return Rng(derive(seed_, index)); }

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next() { return engine_(); }

  // [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Inclusive [lo, hi], unbiased by rejection.
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t span = hi - lo;
    if (span == std::numeric_limits<std::uint64_t>::max()) {
      return engine_();
    }
    const std::uint64_t range = span + 1;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % range;
    std::uint64_t x = engine_();
    while (x >= limit) {
      x = engine_();
    }
    return lo + x % range;
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Box-Muller, one variate per call (no cached second value, so the stream
  // position depends only on the number of calls).
  double normal(double mean, double sigma) {
    double u1 = uniform();
    while (u1 <= 0.0) {
      u1 = uniform();
    }
    const double u2 = uniform();
    return mean + sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace flexauc
