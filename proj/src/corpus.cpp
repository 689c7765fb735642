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

#include "adasub/corpus.hpp"

#include <algorithm>
#include <random>

namespace adasub::corpus {

Instance sc2(Prior::Kind kind, double cost_item1, double cost_item2) {
  std::vector<Item> items{{0, cost_item1, "item1"}, {1, cost_item2, "item2"}};
  std::vector<std::vector<std::string>> names{{"on"}, {"good", "bad"}};
  auto objective = std::make_shared<const CoverageObjective>(
      std::vector<std::string>{"a", "b"},
      std::vector<std::vector<std::vector<std::size_t>>>{{{0}}, {{1}, {}}});
  Prior prior = kind == Prior::Kind::kIndependent
                    ? Prior::independent({{1.0}, {0.5, 0.5}})
                    : Prior::tabular({1, 2}, {{{0, 0}, 0.5}, {{0, 1}, 0.5}});
  return make_instance("sc2", std::move(items), std::move(names), std::move(prior),
                       std::move(objective));
}

Instance al3() {
  std::vector<Item> items{{0, 1.0, "q1"}, {1, 1.0, "q2"}};
  std::vector<std::vector<std::string>> names{{"yes", "no"}, {"yes", "no"}};
  const double third = 1.0 / 3.0;
  auto objective = std::make_shared<const VersionSpaceObjective>(
      std::vector<std::string>{"h1", "h2", "h3"}, std::vector<double>{third, third, third},
      std::vector<std::vector<StateId>>{{0, 1, 1}, {0, 0, 1}});
  Prior prior = objective->prior({2, 2});
  return make_instance("al3", std::move(items), std::move(names), std::move(prior),
                       std::move(objective));
}

Instance cascade_path() {
  CascadeModel model = make_cascade(2, {{0, 1, 0.5}});
  std::vector<Item> items{{0, 1.0, "A"}, {1, 1.0, "B"}};
  return make_instance("cascade_path", std::move(items), std::move(model.state_names),
                       std::move(model.prior), model.objective);
}

Instance complementarity() {
  Instance out = deterministic_instance(SetFunction(2, {0.0, 0.0, 0.0, 1.0}));
  out.name = "complementarity";
  return out;
}

Instance decreasing() {
  Instance out = deterministic_instance(SetFunction(2, {0.0, 1.0, 0.0, 0.0}));
  out.name = "decreasing";
  return out;
}

Instance random_coverage(std::uint64_t seed, const RandomCoverageOptions& options) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> weight(1, std::max(1, options.max_weight));
  std::uniform_int_distribution<int> cost(1, std::max(1, options.max_cost));

  std::vector<std::string> ground;
  std::vector<double> weights;
  for (std::size_t g = 0; g < options.ground; ++g) {
    ground.push_back("g" + std::to_string(g));
    weights.push_back(weight(gen));
  }
  std::vector<std::vector<std::vector<std::size_t>>> covers(options.items);
  std::vector<std::vector<double>> factors(options.items);
  std::vector<Item> items = unit_items(options.items);
  for (ItemId i = 0; i < options.items; ++i) {
    items[i].cost = cost(gen);
    covers[i].resize(options.states);
    for (StateId s = 0; s < options.states; ++s) {
      for (std::size_t g = 0; g < options.ground; ++g) {
        if (unit(gen) < options.cover_probability) covers[i][s].push_back(g);
      }
    }
    // Each state keeps at least the minimum mass; the remainder is split by
    // uniform draws.
    const double spare = 1.0 - options.min_state_probability * options.states;
    std::vector<double> raw(options.states);
    double total = 0.0;
    for (double& r : raw) total += (r = unit(gen) + 1e-3);
    double assigned = 0.0;
    for (StateId s = 0; s < options.states; ++s) {
      double p = options.min_state_probability + spare * raw[s] / total;
      if (s + 1 == options.states) p = 1.0 - assigned;
      factors[i].push_back(p);
      assigned += p;
    }
  }
  std::vector<StateId> counts(options.items, options.states);
  auto objective = std::make_shared<const CoverageObjective>(
      std::move(ground), std::move(covers), std::move(weights));
  return make_instance("random_coverage_" + std::to_string(seed), std::move(items),
                       default_state_names(counts), Prior::independent(std::move(factors)),
                       std::move(objective));
}

SetFunction random_coverage_function(std::uint64_t seed, std::size_t items,
                                     std::size_t ground) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<std::size_t> size(1, std::max<std::size_t>(1, ground / 2));
  std::vector<std::vector<std::size_t>> sets(items);
  std::vector<std::size_t> pool(ground);
  for (std::size_t g = 0; g < ground; ++g) pool[g] = g;
  for (auto& set : sets) {
    std::shuffle(pool.begin(), pool.end(), gen);
    set.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(size(gen)));
    std::sort(set.begin(), set.end());
  }
  return coverage_set_function(sets);
}

}  // namespace adasub::corpus
