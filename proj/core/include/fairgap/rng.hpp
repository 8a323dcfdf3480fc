#pragma once

#include <cstdint>
#include <random>

namespace fairgap {

// SplitMix64 finalizer, used both as a mixing step for derived seeds and to
// decorrelate caller-supplied seeds before feeding the main generator.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic per-(n, trial) seed derivation so parallel trials are
// independent of execution order.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
  return splitmix64(splitmix64(base ^ splitmix64(a + 0x51ed2701)) ^ splitmix64(b + 0x9e3779b9));
}

// Thin deterministic wrapper around mt19937_64. The uniform transform is
// spelled out (53-bit mantissa) so outputs are bit-identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(splitmix64(seed)) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform integer in {0, ..., n-1} (n small; modulo bias is negligible and
  // determinism matters more here than exact uniformity).
  int uniform_int(int n) { return static_cast<int>(gen_() % static_cast<std::uint64_t>(n)); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace fairgap
