#pragma once

#include <cmath>
#include <cstdint>

#include "smi/types.hpp"

namespace smi {

// splitmix64 step. Small, fast, and fully specified, so every platform
// reproduces the same stream bit for bit.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Counter-based stream derivation: the sub-stream for (seed, index) does not
// depend on how many other sub-streams were consumed before it.
inline std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = seed ^ (0xA0761D6478BD642FULL * (index + 1));
  return splitmix64(s);
}

// Deterministic generator with hand-rolled uniform and Box-Muller normal
// draws; std::*_distribution is not bit-stable across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64(state_); }

  // Uniform on [0, 1).
  Real uniform01() { return static_cast<Real>(next_u64() >> 11) * 0x1.0p-53; }

  Real uniform(Real lo, Real hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal via Box-Muller (the spare is cached).
  Real normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const Real u1 = static_cast<Real>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
    const Real u2 = uniform01();
    const Real r = std::sqrt(-2.0 * std::log(u1));
    const Real a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  // Circularly-symmetric complex normal with the given per-component stddev.
  Complex cnormal(Real component_stddev) {
    const Real re = normal() * component_stddev;
    const Real im = normal() * component_stddev;
    return {re, im};
  }

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  Real spare_ = 0.0;
};

// Matrix with i.i.d. complex Gaussian entries, filled column-major.
inline CMatrix complex_gaussian(Index rows, Index cols, Real component_stddev, Rng& rng) {
  CMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = rng.cnormal(component_stddev);
  return m;
}

}  // namespace smi
