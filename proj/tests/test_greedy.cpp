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

#include <algorithm>
#include <cmath>
#include <limits>

#include "doctest.h"

#include "adasub/corpus.hpp"
#include "adasub/error.hpp"
#include "adasub/greedy.hpp"
#include "adasub/verify.hpp"

using namespace adasub;

namespace {

constexpr double kTol = 1e-12;

template <typename F>
void expect_code(ErrorCode code, F&& f) {
  try {
    f();
    FAIL("expected " << to_string(code));
  } catch (const Error& e) {
    CHECK(e.code() == code);
  }
}

double path_cost(const Instance& inst, const PartialRealization& psi) {
  double c = 0.0;
  for (const Observation& o : psi.observations()) c += inst.cost(o.item);
  return c;
}

}  // namespace

TEST_CASE("greedy_step examples") {
  const Instance sc2 = corpus::sc2();
  StepResult r = greedy_step(sc2, {});
  CHECK(r.item == 0);
  CHECK(std::abs(r.benefit.value - 1.0) <= kTol);

  const Instance costly = corpus::sc2(Prior::Kind::kIndependent, 4.0, 1.0);
  CHECK(greedy_step(costly, {}, SelectionRule::kBenefitPerCost).item == 1);
  CHECK(greedy_step(costly, {}, SelectionRule::kBenefit).item == 0);

  const Instance al3 = corpus::al3();
  r = greedy_step(al3, {});
  CHECK(r.item == 0);
  CHECK(std::abs(r.benefit.value - 4.0 / 9.0) <= kTol);

  std::size_t evaluations = 0;
  greedy_step(sc2, *sc2.objective, {}, SelectionRule::kBenefit, {},
              std::numeric_limits<double>::infinity(), evaluations);
  CHECK(evaluations == 2);

  expect_code(ErrorCode::kExhausted,
              [&] { greedy_step(sc2, PartialRealization({{0, 0}, {1, 0}})); });
}

TEST_CASE("lazy_greedy_step examples") {
  const Instance sc2 = corpus::sc2();
  LazyQueue queue = LazyQueue::initial(2);
  std::size_t evaluations = 0;
  const double inf = std::numeric_limits<double>::infinity();
  StepResult r = lazy_greedy_step(sc2, *sc2.objective, {}, queue, SelectionRule::kBenefit, {},
                                  inf, evaluations);
  CHECK(r.item == 0);
  CHECK(evaluations == 2);

  evaluations = 0;
  r = lazy_greedy_step(sc2, *sc2.objective, PartialRealization({{0, 0}}), queue,
                       SelectionRule::kBenefit, {}, inf, evaluations);
  CHECK(r.item == 1);
  CHECK(std::abs(r.benefit.value - 0.5) <= kTol);
  CHECK(r.benefit.stamp == 1);
  CHECK(evaluations == 1);

  CHECK(queue.empty());
  expect_code(ErrorCode::kExhausted, [&] {
    lazy_greedy_step(sc2, *sc2.objective, PartialRealization({{0, 0}, {1, 0}}), queue,
                     SelectionRule::kBenefit, {}, inf, evaluations);
  });
}

TEST_CASE("lazy beats naive on a 20-item instance") {
  const Instance inst = corpus::random_coverage(7, {.items = 20, .ground = 12});
  const EngineComparison cmp = compare_engines(inst, StoppingRule::cardinality(4));
  CHECK(cmp.trees_equal);
  CHECK(cmp.naive.policy == cmp.lazy.policy);
  CHECK(cmp.lazy.metrics.evaluation_count < cmp.naive.metrics.evaluation_count);
  CHECK(cmp.lazy.metrics.avg_value == cmp.naive.metrics.avg_value);
}

TEST_CASE("build_policy examples") {
  const Instance sc2 = corpus::sc2();
  SUBCASE("k = 1") {
    const BuiltPolicy b = build_policy(sc2, StoppingRule::cardinality(1));
    CHECK(b.policy.node(PolicyTree::kRoot).item == ItemId{0});
    CHECK(b.policy.internal_count() == 1);
    CHECK(std::abs(b.metrics.avg_value - 1.0) <= kTol);
  }
  SUBCASE("k = 2") {
    for (Engine engine : {Engine::kNaive, Engine::kLazy}) {
      const BuiltPolicy b = build_policy(sc2, StoppingRule::cardinality(2), {.engine = engine});
      CHECK(b.policy.depth() == 2);
      CHECK(std::abs(b.metrics.avg_value - 1.5) <= kTol);
      CHECK(b.metrics.avg_cost == 2.0);
      CHECK(b.metrics.worst_case_cost == 2.0);
      CHECK(b.metrics.evaluation_count == 3);
      const PartialRealization leaf = execute_policy(b.policy, {0, 1});
      CHECK(leaf == PartialRealization({{0, 0}, {1, 1}}));
    }
  }
  SUBCASE("AL3 quota 1") {
    const Instance al3 = corpus::al3();
    const BuiltPolicy b = build_policy(al3, StoppingRule::quota(1.0));
    const PolicyNode& root = b.policy.node(PolicyTree::kRoot);
    CHECK(root.item == ItemId{0});
    REQUIRE(root.children.size() == 2);
    CHECK_FALSE(b.policy.node(root.children.at(0)).item.has_value());
    CHECK(b.policy.node(root.children.at(1)).item == ItemId{1});
    CHECK(std::abs(b.metrics.avg_cost - 5.0 / 3.0) <= kTol);
    CHECK(b.metrics.worst_case_cost == 2.0);
    // h1 answers yes to q1 and stops.
    CHECK(execute_policy(b.policy, {0, 0}) == PartialRealization({{0, 0}}));
  }
  SUBCASE("budget") {
    const Instance costly = corpus::sc2(Prior::Kind::kIndependent, 4.0, 1.0);
    const BuiltPolicy b = build_policy(costly, StoppingRule::budget(3.0),
                                       {.rule = SelectionRule::kBenefitPerCost});
    CHECK(b.policy.node(PolicyTree::kRoot).item == ItemId{1});
    CHECK(b.policy.depth() == 1);
    CHECK(b.metrics.worst_case_cost == 1.0);
  }
}

TEST_CASE("min-sum evaluation") {
  // Shortfalls after q1: h1 covered, h2 and h3 at 2/3. After q2 all covered.
  // Expected sum = (2/3) * (1/3) = 2/9.
  const Instance al3 = corpus::al3();
  const BuiltPolicy b = build_policy(al3, StoppingRule::min_sum(1.0));
  CHECK(std::abs(b.metrics.min_sum - 2.0 / 9.0) <= kTol);
  const BuiltPolicy q = build_policy(al3, StoppingRule::quota(1.0));
  CHECK(b.policy == q.policy);
  CHECK(q.metrics.min_sum == 0.0);
}

TEST_CASE("evaluate_policy on the empty policy") {
  const Instance sc2 = corpus::sc2();
  const PolicyMetrics m = evaluate_policy(PolicyTree{}, sc2, 1.0);
  CHECK(m.avg_value == 0.0);
  CHECK(m.avg_cost == 0.0);
  CHECK(m.worst_case_cost == 0.0);
  CHECK(m.min_sum == 0.0);
  CHECK(execute_policy(PolicyTree{}, {0, 1}).size() == 0);
}

TEST_CASE("malformed policies") {
  const Instance sc2 = corpus::sc2();
  PolicyTree repeat;
  repeat.set_item(PolicyTree::kRoot, 1);
  for (StateId s : {0u, 1u}) {
    const std::size_t child = repeat.add_node();
    repeat.add_child(PolicyTree::kRoot, s, child);
    repeat.set_item(child, 1);
    repeat.add_child(child, s, repeat.add_node());
  }
  expect_code(ErrorCode::kMalformedPolicy, [&] { evaluate_policy(repeat, sc2); });

  PolicyTree missing;
  missing.set_item(PolicyTree::kRoot, 1);
  missing.add_child(PolicyTree::kRoot, 0, missing.add_node());
  expect_code(ErrorCode::kMalformedPolicy, [&] { execute_policy(missing, {0, 1}); });
  expect_code(ErrorCode::kMalformedPolicy, [&] { evaluate_policy(missing, sc2); });
}

TEST_CASE("stopping rule validation") {
  const Instance sc2 = corpus::sc2();
  // The bad realization never reaches 2.
  try {
    build_policy(sc2, StoppingRule::quota(2.0));
    FAIL("expected InfeasibleQuota");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInfeasibleQuota);
    CHECK(std::string(e.what()).find("bad") != std::string::npos);
  }
  expect_code(ErrorCode::kInvalidArgument, [&] { build_policy(sc2, StoppingRule::quota(0.0)); });
  expect_code(ErrorCode::kInvalidArgument,
              [&] { build_policy(sc2, StoppingRule::cardinality(0)); });
  expect_code(ErrorCode::kInvalidArgument, [&] { build_policy(sc2, StoppingRule::budget(0.5)); });
}

TEST_CASE("property: greedy policy invariants on random instances") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    CAPTURE(seed);
    const Instance inst = corpus::random_coverage(seed, {.items = 5, .max_cost = 3});
    const auto support = enumerate_support(inst.prior);

    for (Engine engine : {Engine::kNaive, Engine::kLazy}) {
      const GreedyOptions opts{.engine = engine};
      const BuiltPolicy a = build_policy(inst, StoppingRule::cardinality(3), opts);
      const BuiltPolicy b = build_policy(inst, StoppingRule::cardinality(3), opts);
      CHECK(a.policy == b.policy);
      CHECK(a.metrics.avg_value == b.metrics.avg_value);
      CHECK(a.metrics.evaluation_count == b.metrics.evaluation_count);
      CHECK(a.metrics.worst_case_cost >= a.metrics.avg_cost - kTol);
      CHECK(a.metrics.evaluation_count >= a.policy.internal_count());

      for (const PartialRealization& leaf : leaf_histories(a.policy)) {
        CHECK(leaf.size() <= 3);
        double previous = 0.0;
        for (std::size_t t = 0; t <= leaf.size(); ++t) {
          const double v = expected_value(*inst.objective, leaf.prefix(t), inst.prior).mean;
          CHECK(v >= previous - kTol);
          previous = v;
        }
      }
    }

    const BuiltPolicy naive = build_policy(inst, StoppingRule::cardinality(3), {.engine = Engine::kNaive});
    const BuiltPolicy lazy = build_policy(inst, StoppingRule::cardinality(3), {.engine = Engine::kLazy});
    CHECK(naive.policy == lazy.policy);
    CHECK(lazy.metrics.evaluation_count <= naive.metrics.evaluation_count);

    // Budget feasibility under the per-cost rule.
    const BuiltPolicy budgeted = build_policy(inst, StoppingRule::budget(4.0),
                                              {.rule = SelectionRule::kBenefitPerCost});
    for (const PartialRealization& leaf : leaf_histories(budgeted.policy)) {
      CHECK(path_cost(inst, leaf) <= 4.0 + kTol);
    }

    // Quota soundness: every leaf is covered under every consistent world.
    double quota = std::numeric_limits<double>::infinity();
    PartialRealization everything;
    for (const auto& point : support) {
      std::vector<Observation> obs;
      for (ItemId i = 0; i < inst.item_count(); ++i) obs.push_back({i, point.states[i]});
      quota = std::min(quota, inst.objective->value(PartialRealization(obs), point.states));
    }
    if (quota <= 0.0) continue;
    const BuiltPolicy cover = build_policy(inst, StoppingRule::quota(quota));
    for (const PartialRealization& leaf : leaf_histories(cover.policy)) {
      for (const auto& point : support) {
        if (!consistent(point.states, leaf)) continue;
        CHECK(inst.objective->value(leaf, point.states) >= quota - kTol);
      }
    }
  }
}

TEST_CASE("property: deterministic priors reduce to classic greedy") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const SetFunction f = corpus::random_coverage_function(seed, 7, 10);
    const Instance inst = deterministic_instance(f);
    for (Engine engine : {Engine::kNaive, Engine::kLazy}) {
      const BuiltPolicy b = build_policy(inst, StoppingRule::cardinality(4), {.engine = engine});
      std::vector<ItemId> sequence;
      std::size_t node = PolicyTree::kRoot;
      while (b.policy.node(node).item) {
        sequence.push_back(*b.policy.node(node).item);
        REQUIRE(b.policy.node(node).children.size() == 1);
        node = b.policy.node(node).children.begin()->second;
      }
      CHECK(sequence == classic_lazy_greedy(f, 4).sequence);
      CHECK(sequence == classic_greedy(f, 4));
    }
  }
}
