// Copyright 2026 The Authors.
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

#pragma once

#include <cstdint>
#include <initializer_list>

namespace adasub {

// Counter-based random streams. A draw is a pure function of (seed, keys...),
// so each consumer addresses its own stream and inserting a new consumer never
// shifts the numbers another one sees.
//
// Derivation: h = mix(seed); for each key k: h = mix(h ^ (k + golden)); the
// final h is the 64-bit draw. mix is the SplitMix64 finalizer.
namespace rng {

constexpr std::uint64_t mix(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t draw(std::uint64_t seed,
                             std::initializer_list<std::uint64_t> keys) noexcept {
  std::uint64_t h = mix(seed);
  for (std::uint64_t k : keys) h = mix(h ^ (k + 0x9e3779b97f4a7c15ULL));
  return h;
}

// Uniform in [0, 1) with 53 random bits.
constexpr double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline double uniform(std::uint64_t seed,
                      std::initializer_list<std::uint64_t> keys) noexcept {
  return to_unit(draw(seed, keys));
}

// Stream purposes, so that draws made for different jobs never collide.
enum Purpose : std::uint64_t {
  kPriorSample = 1,
  kMarginal = 2,
  kExpectation = 3,
  kPolicyEvaluation = 4,
};

}  // namespace rng
}  // namespace adasub
