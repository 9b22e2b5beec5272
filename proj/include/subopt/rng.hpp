#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace subopt {

// Counter-based PRNG: draw i of a stream is a pure function of (key, i),
// so substreams can be split off without consuming state and the same seed
// reproduces the same draws on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : key_(mix(seed ^ kGolden)) {}

  // Derived stream; deterministic in (parent key, tags).
  Rng substream(std::uint64_t a, std::uint64_t b = 0) const {
    return Rng(mix(key_ ^ mix(a + kGolden)) ^ mix(b + 2 * kGolden), 0);
  }

  std::uint64_t next_u64() { return mix(key_ + kGolden * ++counter_); }

  // Uniform in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [0, bound). Rejection sampling keeps it unbiased.
  std::uint64_t next_below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return v % bound;
  }

  bool next_bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return next_double() < p;
  }

  // Standard normal via Box-Muller; pinned here rather than using
  // std::normal_distribution so streams are implementation-independent.
  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1, u2;
    do {
      u1 = next_double();
    } while (u1 <= 0.0);
    u2 = next_double();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 6.283185307179586476925286766559 * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  // Fisher-Yates.
  template <class T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(next_below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  Rng(std::uint64_t key, int) : key_(key) {}

  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

  // SplitMix64 finalizer.
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace subopt
