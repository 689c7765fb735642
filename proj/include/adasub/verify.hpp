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

// Ground truth for small instances: exhaustive adaptive monotonicity and
// submodularity checks, and exact optimal policies by memoized recursion over
// partial realizations.

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "adasub/greedy.hpp"
#include "adasub/instance.hpp"

namespace adasub {

struct Witness {
  PartialRealization psi;        // smaller observation set
  PartialRealization psi_prime;  // larger one (equals psi for monotonicity)
  ItemId item = 0;
  double delta_psi = 0.0;
  double delta_psi_prime = 0.0;
};

struct CheckReport {
  enum class Property { kMonotone, kSubmodular };

  Property property = Property::kMonotone;
  bool passed = true;
  std::vector<Witness> witnesses;  // capped at VerifyOptions::witness_limit
  std::size_t violations = 0;
  std::size_t pairs_checked = 0;
};

struct VerifyOptions {
  double support_cap = kDefaultSupportCap;
  std::size_t state_cap = 1000000;  // reachable partial realizations
  double tolerance = 1e-12;
  std::size_t witness_limit = 64;
};

// Every positive-mass partial realization in canonical (item-sorted) form,
// ordered by size then lexicographically. Throws kTooLarge past state_cap.
std::vector<PartialRealization> reachable_partial_realizations(
    const Prior& prior, std::size_t state_cap);

// Delta(e | psi) >= -tol for every positive-mass psi and e outside dom(psi).
CheckReport check_adaptive_monotone(const Objective& objective, const Prior& prior,
                                    const VerifyOptions& options = {});

// Delta(e | psi') <= Delta(e | psi) + tol for every positive-mass psi strictly
// contained in psi' and e outside dom(psi').
CheckReport check_adaptive_submodular(const Objective& objective,
                                      const Prior& prior,
                                      const VerifyOptions& options = {});

struct OracleOptions {
  std::size_t max_items = 8;
  double max_support = 64;
};

struct OracleResult {
  double optimum = 0.0;  // expected value, or expected cost for coverage
  PolicyTree policy;
  std::size_t states_explored = 0;
};

// Best expected value of any adaptive policy that selects at most k more
// items after `root`.
OracleResult oracle_max(const Instance& instance, std::size_t k,
                        const PartialRealization& root = {},
                        const OracleOptions& options = {});

// Least expected cost of any adaptive policy that certifies f >= quota on
// every branch.
OracleResult oracle_cover(const Instance& instance, double quota,
                          const OracleOptions& options = {});

// The largest eta with: f(S, phi) > Q - eta implies f(S, phi) >= Q, over all
// item subsets S and support realizations phi. Equivalently the smallest
// positive shortfall Q - f(S, phi). Returns Q when no shortfall is positive.
double coverage_eta(const Instance& instance, double quota,
                    std::size_t max_items = 16);

// Non-adaptive greedy on a set function, lowest id first on ties.
std::vector<ItemId> classic_greedy(const SetFunction& f, std::size_t k);

struct ClassicLazyResult {
  std::vector<ItemId> sequence;
  std::size_t evaluations = 0;
};
ClassicLazyResult classic_lazy_greedy(const SetFunction& f, std::size_t k);

}  // namespace adasub
