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

#include "adasub/instance.hpp"

#include <cmath>

#include "adasub/error.hpp"

namespace adasub {

std::optional<StateId> Instance::find_state(ItemId item,
                                            const std::string& name) const {
  const auto& names = state_names.at(item);
  for (StateId s = 0; s < names.size(); ++s) {
    if (names[s] == name) return s;
  }
  return std::nullopt;
}

Instance make_instance(std::string name, std::vector<Item> items,
                       std::vector<std::vector<std::string>> state_names,
                       Prior prior, ObjectivePtr objective,
                       std::optional<double> f_max) {
  if (!objective) throw Error(ErrorCode::kInvalidArgument, "missing objective");
  if (items.size() != prior.item_count() || state_names.size() != items.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "items, state names and prior disagree on the item count");
  }
  for (ItemId i = 0; i < items.size(); ++i) {
    if (items[i].id != i) {
      throw Error(ErrorCode::kInvalidArgument, "item ids must be dense 0..n-1");
    }
    if (!(items[i].cost > 0.0) || !std::isfinite(items[i].cost)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "item " + std::to_string(i) + " needs a positive cost");
    }
    if (state_names[i].size() != prior.state_count(i)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "item " + std::to_string(i) + " state names disagree with the prior");
    }
  }
  Instance instance{std::move(name), std::move(items), std::move(state_names),
                    std::move(prior), std::move(objective), f_max};
  if (!instance.f_max) {
    try {
      instance.f_max = compute_f_max(*instance.objective, instance.prior);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kSupportTooLarge) throw;
    }
  }
  return instance;
}

std::vector<Item> unit_items(std::size_t count) {
  std::vector<Item> items;
  for (ItemId i = 0; i < count; ++i) items.push_back({i, 1.0, "item" + std::to_string(i)});
  return items;
}

std::vector<std::vector<std::string>> default_state_names(
    std::span<const StateId> state_counts) {
  std::vector<std::vector<std::string>> names;
  for (StateId count : state_counts) {
    auto& row = names.emplace_back();
    for (StateId s = 0; s < count; ++s) row.push_back("s" + std::to_string(s));
  }
  return names;
}

Instance deterministic_instance(const SetFunction& table,
                                std::vector<double> costs) {
  const std::size_t n = table.item_count();
  std::vector<Item> items = unit_items(n);
  if (!costs.empty()) {
    if (costs.size() != n) {
      throw Error(ErrorCode::kInvalidArgument, "one cost per item required");
    }
    for (ItemId i = 0; i < n; ++i) items[i].cost = costs[i];
  }
  std::vector<StateId> counts(n, 1);
  auto names = default_state_names(counts);
  return make_instance("deterministic", std::move(items), std::move(names),
                       Prior::point_mass(counts, Realization(n, 0)),
                       make_deterministic(table));
}

}  // namespace adasub
