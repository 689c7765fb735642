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

// Probabilistic substrate: items, realizations, partial realizations and
// priors over realizations.
//
// Notation used throughout the docs: a realization phi assigns a state to
// every item; a partial realization psi is the sequence of (item, state)
// observations made so far and dom(psi) is the set of items it covers. We
// write phi ~ psi when phi agrees with every observation in psi.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace adasub {

using ItemId = std::uint32_t;
using StateId = std::uint32_t;

inline constexpr double kProbabilityTolerance = 1e-12;
inline constexpr double kDefaultSupportCap = 1048576.0;  // 2^20

struct Item {
  ItemId id = 0;
  double cost = 1.0;
  std::string label;
};

// Full assignment of a state to every item, indexed by ItemId.
using Realization = std::vector<StateId>;

struct Observation {
  ItemId item = 0;
  StateId state = 0;

  friend bool operator==(const Observation&, const Observation&) = default;
  friend auto operator<=>(const Observation&, const Observation&) = default;
};

// Ordered observations. Order is the selection order; consistency and value
// computations treat psi as a set.
class PartialRealization {
 public:
  PartialRealization() = default;
  explicit PartialRealization(std::vector<Observation> observations);

  std::span<const Observation> observations() const { return observations_; }
  std::size_t size() const { return observations_.size(); }
  bool empty() const { return observations_.empty(); }

  bool contains(ItemId item) const;
  std::optional<StateId> state_of(ItemId item) const;

  // Copy extended by one observation; throws kAlreadySelected on a repeat.
  PartialRealization with(Observation next) const;

  // First `count` observations.
  PartialRealization prefix(std::size_t count) const;

  // Observations sorted by item id; equal sets give equal canonical forms.
  PartialRealization canonical() const;

  // Subset relation on observation sets (order ignored).
  bool is_subset_of(const PartialRealization& other) const;

  // Order-insensitive 64-bit key.
  std::uint64_t hash() const;

  friend bool operator==(const PartialRealization&,
                         const PartialRealization&) = default;

 private:
  std::vector<Observation> observations_;
};

struct SupportPoint {
  Realization states;
  double probability = 0.0;
};

// Distribution over realizations: an explicit table of support points, or a
// product of independent per-item categorical factors.
class Prior {
 public:
  enum class Kind { kTabular, kIndependent };

  // Drops zero-probability points; probabilities must sum to 1.
  static Prior tabular(std::vector<StateId> state_counts,
                       std::vector<SupportPoint> support);
  static Prior independent(std::vector<std::vector<double>> factors);
  // Single realization with probability 1.
  static Prior point_mass(std::vector<StateId> state_counts,
                          Realization states);

  Kind kind() const { return kind_; }
  std::size_t item_count() const { return state_counts_.size(); }
  StateId state_count(ItemId item) const { return state_counts_.at(item); }
  std::span<const StateId> state_counts() const { return state_counts_; }

  // Tabular only.
  std::span<const SupportPoint> support() const { return support_; }
  // Independent only.
  std::span<const double> factor(ItemId item) const { return factors_.at(item); }

  // Number of realizations with positive probability (as a double, since
  // product priors overflow any integer type quickly).
  double support_size() const;

 private:
  Prior() = default;

  Kind kind_ = Kind::kTabular;
  std::vector<StateId> state_counts_;
  std::vector<SupportPoint> support_;
  std::vector<std::vector<double>> factors_;
};

// True iff phi agrees with every observation in psi.
bool consistent(const Realization& phi, const PartialRealization& psi);

// Prior mass of realizations consistent with psi.
double posterior_mass(const Prior& prior, const PartialRealization& psi);

// p(phi | psi). Tabular priors are filtered and renormalized; independent
// priors condition factor-wise. Throws kInconsistentObservation on zero mass.
Prior condition(const Prior& prior, const PartialRealization& psi);

// P(Phi(item) = s | psi) for every state s of `item`.
std::vector<double> state_distribution(const Prior& prior,
                                       const PartialRealization& psi,
                                       ItemId item);

// All positive-probability realizations. Throws kSupportTooLarge when an
// independent prior has more than `cap` realizations.
std::vector<SupportPoint> enumerate_support(const Prior& prior,
                                            double cap = kDefaultSupportCap);

// Draw number `draw_index` from the stream identified by `seed`.
Realization sample(const Prior& prior, std::uint64_t seed,
                   std::uint64_t draw_index);

// Draw from p(. | psi) without materializing the posterior. For independent
// priors each item's state depends only on (seed, draw_index, item).
Realization sample_posterior(const Prior& prior, const PartialRealization& psi,
                             std::uint64_t seed, std::uint64_t draw_index);

}  // namespace adasub
