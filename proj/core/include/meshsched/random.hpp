#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace meshsched {

// Stateless 64-bit mixer used to split one master seed into independent
// sub-seeds. The same (seed, tags) always maps to the same value.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> tags);

// mt19937_64 plus draw helpers whose results do not depend on the standard
// library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1).
  double unit();
  // Uniform on [lo, hi).
  double uniform(double lo, double hi);
  // Uniform integer on [0, n). n must be > 0.
  std::uint64_t below(std::uint64_t n);
  bool bernoulli(double p) { return unit() < p; }

  template <class Range>
  const auto& pick(const Range& r) {
    return r[static_cast<std::size_t>(below(static_cast<std::uint64_t>(r.size())))];
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace meshsched
