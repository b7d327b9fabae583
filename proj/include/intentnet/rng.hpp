#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace intentnet {

// Mixes a 64-bit value into an independent-looking stream seed. Used to
// derive per-stage seeds (init vs. shuffle vs. generator) from one base seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Deterministic RNG wrapper. mt19937_64 output is pinned by the standard and
// all derived draws below avoid std::*_distribution (whose mapping is
// implementation-defined), so sequences are reproducible everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1) with 53 bits of mantissa.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform integer in [0, n) via 128-bit multiply (no rejection, no modulo
  // bias worth caring about at our scales, and bit-for-bit portable).
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(gen_()) * n) >> 64);
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace intentnet
