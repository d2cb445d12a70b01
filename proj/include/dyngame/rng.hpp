// Copyright 2026 The dyngame Authors
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

#ifndef DYNGAME_RNG_HPP
#define DYNGAME_RNG_HPP

#include <cmath>
#include <cstdint>

namespace dyngame {

// Counter-based generator: every draw is a pure function of (stream key,
// counter), so results do not depend on call order or worker count.
// Algorithm name for output metadata: "splitmix64+box-muller".
namespace rng {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Derive a substream key from a parent key and an index.
inline std::uint64_t derive(std::uint64_t key, std::uint64_t index) {
  return mix(key + kGolden * (index + 1));
}

inline std::uint64_t bits(std::uint64_t key, std::uint64_t counter) {
  return mix(key ^ mix(counter * kGolden + 0x2545F4914F6CDD1DULL));
}

// Uniform in (0, 1), never exactly 0 or 1.
inline double uniform(std::uint64_t key, std::uint64_t counter) {
  return (static_cast<double>(bits(key, counter) >> 11) + 0.5) * 0x1.0p-53;
}

// Standard normal via Box-Muller; the counter indexes individual draws.
inline double normal(std::uint64_t key, std::uint64_t counter) {
  const std::uint64_t pair = counter / 2;
  const double u1 = uniform(key, 2 * pair);
  const double u2 = uniform(key, 2 * pair + 1);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  return (counter % 2 == 0) ? radius * std::cos(angle)
                            : radius * std::sin(angle);
}

inline const char* algorithm_name() { return "splitmix64+box-muller"; }

}  // namespace rng
}  // namespace dyngame

#endif  // DYNGAME_RNG_HPP
