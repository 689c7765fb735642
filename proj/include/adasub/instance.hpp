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

#include <optional>
#include <string>
#include <vector>

#include "adasub/model.hpp"
#include "adasub/objectives.hpp"

namespace adasub {

// Everything a policy needs: items with costs, named states, the prior and
// the objective. f_max is computed from the support when it enumerates, or
// supplied by the instance file otherwise.
struct Instance {
  std::string name;
  std::vector<Item> items;
  std::vector<std::vector<std::string>> state_names;
  Prior prior;
  ObjectivePtr objective;
  std::optional<double> f_max;

  std::size_t item_count() const { return items.size(); }
  double cost(ItemId item) const { return items.at(item).cost; }
  const std::string& state_name(ItemId item, StateId state) const {
    return state_names.at(item).at(state);
  }
  std::optional<StateId> find_state(ItemId item, const std::string& name) const;
};

// Builds an instance after checking that items, state names, prior and
// objective agree on sizes. Fills f_max when the support enumerates.
Instance make_instance(std::string name, std::vector<Item> items,
                       std::vector<std::vector<std::string>> state_names,
                       Prior prior, ObjectivePtr objective,
                       std::optional<double> f_max = std::nullopt);

// Unit-cost items named "item<i>" with states "s0".."s<k-1>".
std::vector<Item> unit_items(std::size_t count);
std::vector<std::vector<std::string>> default_state_names(
    std::span<const StateId> state_counts);

// A wrapped set function under a point-mass prior.
Instance deterministic_instance(const SetFunction& table,
                                std::vector<double> costs = {});

}  // namespace adasub
