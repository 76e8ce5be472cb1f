#pragma once

#include <cstdint>

#include "heavenly/types.hpp"

namespace heavenly {

/// Deterministic RNG with a platform-independent output sequence
/// (xoshiro-style splitmix64 core; identical doubles everywhere).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  complex complex_in_disk(double radius) {
    // rejection-free: uniform modulus^2, uniform angle
    const double r = radius * std::sqrt(uniform());
    const double th = uniform(0.0, 6.283185307179586);
    return complex(r * std::cos(th), r * std::sin(th));
  }

  complex complex_in_annulus(double rmin, double rmax) {
    const double r = std::sqrt(uniform(rmin * rmin, rmax * rmax));
    const double th = uniform(0.0, 6.283185307179586);
    return complex(r * std::cos(th), r * std::sin(th));
  }

  int uniform_int(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::uint64_t state_;
};

}  // namespace heavenly
