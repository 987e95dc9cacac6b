#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace treegram {

// Seeded random source used everywhere determinism is promised. mt19937_64
// output is pinned by the standard, and we avoid std distributions (whose
// output is implementation-defined), so identical seeds give identical
// results on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, n). Modulo bias is negligible for the small n used here.
  std::size_t below(std::size_t n) {
    return n == 0 ? 0 : static_cast<std::size_t>(next() % n);
  }

  // Uniform integer in [lo, hi], inclusive.
  int range(int lo, int hi) {
    return lo + static_cast<int>(below(static_cast<std::size_t>(hi - lo + 1)));
  }

  bool chance(double p) {
    return static_cast<double>(next()) < p * 18446744073709551616.0;  // 2^64
  }

  template <typename T>
  const T& pick(const std::vector<T>& items) {
    return items[below(items.size())];
  }

  // Fisher-Yates, driven by below() so the permutation is reproducible.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace treegram
