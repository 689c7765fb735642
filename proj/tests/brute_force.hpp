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

// Test-only reference computations. These walk the hidden worlds directly
// from an instance's prior table and objective, without going through
// conditioning, state distributions or marginal().

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "adasub/instance.hpp"

namespace adasub::testing {

struct World {
  Realization states;
  double probability;
};

// Explicit product over factors, or the tabular table verbatim.
inline std::vector<World> worlds(const Prior& prior) {
  std::vector<World> out;
  if (prior.kind() == Prior::Kind::kTabular) {
    for (const SupportPoint& p : prior.support()) out.push_back({p.states, p.probability});
    return out;
  }
  out.push_back({{}, 1.0});
  for (ItemId i = 0; i < prior.item_count(); ++i) {
    std::vector<World> next;
    auto f = prior.factor(i);
    for (const World& w : out) {
      for (StateId s = 0; s < f.size(); ++s) {
        if (f[s] == 0.0) continue;
        World x = w;
        x.states.push_back(s);
        x.probability *= f[s];
        next.push_back(std::move(x));
      }
    }
    out = std::move(next);
  }
  return out;
}

inline bool agrees(const Realization& phi, const PartialRealization& psi) {
  for (const Observation& o : psi.observations()) {
    if (phi[o.item] != o.state) return false;
  }
  return true;
}

inline double brute_expected_value(const Instance& inst, const PartialRealization& psi) {
  double mass = 0.0, total = 0.0;
  for (const World& w : worlds(inst.prior)) {
    if (!agrees(w.states, psi)) continue;
    mass += w.probability;
    total += w.probability * inst.objective->value(psi, w.states);
  }
  return total / mass;
}

inline double brute_marginal(const Instance& inst, ItemId e, const PartialRealization& psi) {
  double mass = 0.0, total = 0.0;
  for (const World& w : worlds(inst.prior)) {
    if (!agrees(w.states, psi)) continue;
    std::vector<Observation> more(psi.observations().begin(), psi.observations().end());
    more.push_back({e, w.states[e]});
    mass += w.probability;
    total += w.probability * (inst.objective->value(PartialRealization(more), w.states) -
                              inst.objective->value(psi, w.states));
  }
  return total / mass;
}

// Live worlds of psi grouped by the state of item e, with their masses.
inline std::map<StateId, double> split(const std::vector<World>& all, const PartialRealization& psi,
                                       ItemId e) {
  std::map<StateId, double> out;
  for (const World& w : all) {
    if (agrees(w.states, psi)) out[w.states[e]] += w.probability;
  }
  return out;
}

// Best expected value over adaptive policies making at most r more picks.
inline double brute_oracle_max(const Instance& inst, const std::vector<World>& all,
                               const PartialRealization& psi, std::size_t r) {
  double best = brute_expected_value(inst, psi);
  if (r == 0) return best;
  for (ItemId e = 0; e < inst.item_count(); ++e) {
    if (psi.contains(e)) continue;
    const auto groups = split(all, psi, e);
    double mass = 0.0, total = 0.0;
    for (const auto& [s, m] : groups) {
      mass += m;
      total += m * brute_oracle_max(inst, all, psi.with({e, s}), r - 1);
    }
    best = std::max(best, total / mass);
  }
  return best;
}

// Least expected cost until every live world reaches the quota.
inline double brute_oracle_cover(const Instance& inst, const std::vector<World>& all,
                                 const PartialRealization& psi, double quota) {
  bool covered = true;
  for (const World& w : all) {
    if (agrees(w.states, psi) && inst.objective->value(psi, w.states) < quota - 1e-12) {
      covered = false;
    }
  }
  if (covered) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (ItemId e = 0; e < inst.item_count(); ++e) {
    if (psi.contains(e)) continue;
    const auto groups = split(all, psi, e);
    double mass = 0.0, total = 0.0;
    for (const auto& [s, m] : groups) {
      mass += m;
      total += m * brute_oracle_cover(inst, all, psi.with({e, s}), quota);
    }
    best = std::min(best, inst.cost(e) + total / mass);
  }
  return best;
}

}  // namespace adasub::testing
