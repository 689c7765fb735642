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

#include "adasub/bounds.hpp"

#include <algorithm>
#include <functional>

namespace adasub {

namespace {

std::vector<MarginalBenefit> all_marginals(const Instance& instance,
                                           const PartialRealization& psi,
                                           const ExpectationOptions& options) {
  std::vector<MarginalBenefit> out;
  for (ItemId e = 0; e < instance.item_count(); ++e) {
    if (!psi.contains(e)) {
      out.push_back(marginal(*instance.objective, e, psi, instance.prior, options));
    }
  }
  return out;
}

}  // namespace

BoundCertificate opt_upper_bound(const Instance& instance,
                                 const PartialRealization& psi, std::size_t k,
                                 const ExpectationOptions& options) {
  BoundCertificate cert;
  cert.psi = psi;
  cert.k = k;
  cert.formula = "top-k-marginals";
  cert.current = expected_value(*instance.objective, psi, instance.prior, options).mean;
  if (k > 0) {
    std::vector<double> deltas;
    for (const MarginalBenefit& m : all_marginals(instance, psi, options)) {
      deltas.push_back(std::max(0.0, m.value));
    }
    std::sort(deltas.begin(), deltas.end(), std::greater<>());
    for (std::size_t i = 0; i < std::min(k, deltas.size()); ++i) cert.slack += deltas[i];
  }
  cert.bound = cert.current + cert.slack;
  return cert;
}

BoundCertificate opt_upper_bound_budget(const Instance& instance,
                                        const PartialRealization& psi,
                                        double budget_left,
                                        const ExpectationOptions& options) {
  BoundCertificate cert;
  cert.psi = psi;
  cert.formula = "fractional-knapsack";
  cert.current = expected_value(*instance.objective, psi, instance.prior, options).mean;
  std::vector<MarginalBenefit> ms = all_marginals(instance, psi, options);
  std::stable_sort(ms.begin(), ms.end(), [&](const MarginalBenefit& a, const MarginalBenefit& b) {
    return a.value / instance.cost(a.item) > b.value / instance.cost(b.item);
  });
  double room = std::max(0.0, budget_left);
  for (const MarginalBenefit& m : ms) {
    if (room <= 0.0 || m.value <= 0.0) break;
    const double c = instance.cost(m.item);
    const double fraction = std::min(1.0, room / c);
    cert.slack += fraction * m.value;
    room -= fraction * c;
    if (fraction == 1.0) ++cert.k;
  }
  cert.bound = cert.current + cert.slack;
  return cert;
}

std::vector<BoundCertificate> bound_trace(const PolicyTree& policy,
                                          const Instance& instance, std::size_t k,
                                          const ExpectationOptions& options) {
  std::vector<BoundCertificate> out;
  std::function<void(std::size_t, const PartialRealization&)> walk =
      [&](std::size_t node, const PartialRealization& psi) {
        const PolicyNode& n = policy.node(node);
        if (!n.item) return;
        const std::size_t remaining = psi.size() < k ? k - psi.size() : 0;
        out.push_back(opt_upper_bound(instance, psi, remaining, options));
        for (const auto& [state, child] : n.children) walk(child, psi.with({*n.item, state}));
      };
  walk(PolicyTree::kRoot, PartialRealization{});
  return out;
}

}  // namespace adasub
