// Copyright 2026 The planedet Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PLANEDET_RNG_HPP
#define PLANEDET_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace planedet {

// Reproducibility contract: every randomized routine in this library draws
// from std::mt19937_64 seeded by the caller, through the helpers below.
// mt19937_64 output is fixed by the C++ standard; the standard library's
// distribution classes are not, so they are never used here. Identical
// seeds therefore reproduce identical results on any conforming toolchain.

/// Uniform integer in [0, n), n >= 1. Rejection-samples the raw 64-bit
/// stream so every residue class is equally likely.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % n;
  }
}

/// Three distinct indices drawn uniformly from [0, n), n >= 3.
/// Partial Fisher-Yates: later draws are shifted past earlier picks.
inline std::array<std::size_t, 3> sample3_distinct(std::mt19937_64& rng,
                                                   std::size_t n) {
  const std::size_t a = static_cast<std::size_t>(uniform_below(rng, n));
  std::size_t b = static_cast<std::size_t>(uniform_below(rng, n - 1));
  if (b >= a) ++b;
  std::size_t c = static_cast<std::size_t>(uniform_below(rng, n - 2));
  const std::size_t lo = a < b ? a : b;
  const std::size_t hi = a < b ? b : a;
  if (c >= lo) ++c;
  if (c >= hi) ++c;
  return {a, b, c};
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Standard normal deviates via the trigonometric Box-Muller transform.
/// Consumes exactly two generator words per pair, so the stream position
/// after any number of samples is well defined.
class NormalSampler {
 public:
  explicit NormalSampler(std::mt19937_64& rng) : rng_(rng) {}

  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform_unit(rng_);  // (0, 1], log-safe
    const double u2 = uniform_unit(rng_);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64& rng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace planedet

#endif  // PLANEDET_RNG_HPP
