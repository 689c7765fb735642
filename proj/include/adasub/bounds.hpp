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

#include <cstddef>
#include <string>
#include <vector>

#include "adasub/greedy.hpp"
#include "adasub/instance.hpp"

namespace adasub {

// Upper bound on the best expected value reachable from psi with k more
// selections, valid for adaptive monotone submodular objectives.
struct BoundCertificate {
  PartialRealization psi;
  std::size_t k = 0;
  double current = 0.0;  // E[f(dom(psi), Phi) | psi]
  double slack = 0.0;
  double bound = 0.0;    // current + slack
  std::string formula;   // "top-k-marginals" or "fractional-knapsack"
};

// bound = E[f | psi] + sum of the k largest Delta(e | psi).
BoundCertificate opt_upper_bound(const Instance& instance,
                                 const PartialRealization& psi, std::size_t k,
                                 const ExpectationOptions& options = {});

// Budgeted variant: slack is the fractional knapsack optimum over the
// (Delta(e | psi), c(e)) pairs with capacity `budget_left`.
BoundCertificate opt_upper_bound_budget(const Instance& instance,
                                        const PartialRealization& psi,
                                        double budget_left,
                                        const ExpectationOptions& options = {});

// One certificate per internal node of `policy` in preorder, using
// k - depth remaining selections (clamped at zero).
std::vector<BoundCertificate> bound_trace(const PolicyTree& policy,
                                          const Instance& instance, std::size_t k,
                                          const ExpectationOptions& options = {});

}  // namespace adasub
