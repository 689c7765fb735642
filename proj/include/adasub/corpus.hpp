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

// Named small instances and seeded random generators used by the tests, the
// acceptance suite and the bench command.

#pragma once

#include <cstdint>

#include "adasub/instance.hpp"

namespace adasub::corpus {

// Two-item stochastic cover. item1 (id 0) has the single state "on" and
// covers {a}; item2 (id 1) is "good" (covers {b}) or "bad" (covers nothing)
// with probability 1/2 each.
Instance sc2(Prior::Kind kind = Prior::Kind::kIndependent,
             double cost_item1 = 1.0, double cost_item2 = 1.0);

// Three equally likely hypotheses, two yes/no queries: q1 separates {h1}
// from {h2, h3}, q2 separates {h1, h2} from {h3}.
Instance al3();

// Cascade on the path A -> B with edge probability 1/2.
Instance cascade_path();

// Two items worth nothing alone and 1 together.
Instance complementarity();

// f({0}) = 1, f({0, 1}) = 0: adaptive monotonicity fails.
Instance decreasing();

struct RandomCoverageOptions {
  std::size_t items = 4;
  StateId states = 2;
  std::size_t ground = 6;
  double cover_probability = 0.35;
  int max_weight = 3;
  double min_state_probability = 0.1;
  int max_cost = 1;  // costs drawn from 1..max_cost
};

// Coverage over a random ground set with an independent prior. Identical
// (seed, options) give identical instances.
Instance random_coverage(std::uint64_t seed, const RandomCoverageOptions& options = {});

// Monotone coverage set function over random subsets of a ground set.
SetFunction random_coverage_function(std::uint64_t seed, std::size_t items,
                                     std::size_t ground);

}  // namespace adasub::corpus
