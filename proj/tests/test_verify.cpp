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
#include <bit>
#include <cmath>
#include <limits>

#include "doctest.h"

#include "adasub/corpus.hpp"
#include "adasub/error.hpp"
#include "adasub/verify.hpp"
#include "brute_force.hpp"

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

Instance modular(std::size_t n) {
  std::vector<double> table(std::size_t{1} << n);
  for (std::uint64_t m = 0; m < table.size(); ++m) table[m] = std::popcount(m);
  return deterministic_instance(SetFunction(n, table));
}

}  // namespace

TEST_CASE("reachable partial realizations") {
  const Instance sc2 = corpus::sc2();
  CHECK(reachable_partial_realizations(sc2.prior, 100).size() == 6);
  expect_code(ErrorCode::kTooLarge, [&] { reachable_partial_realizations(sc2.prior, 3); });
}

TEST_CASE("checker examples") {
  for (const Instance& inst : {corpus::sc2(), corpus::sc2(Prior::Kind::kTabular), corpus::al3(),
                               corpus::cascade_path(), modular(3)}) {
    CAPTURE(inst.name);
    const CheckReport mono = check_adaptive_monotone(*inst.objective, inst.prior);
    const CheckReport sub = check_adaptive_submodular(*inst.objective, inst.prior);
    CHECK(mono.passed);
    CHECK(sub.passed);
    CHECK(mono.witnesses.empty());
    CHECK(sub.witnesses.empty());
    CHECK(mono.pairs_checked > 0);
    CHECK(sub.pairs_checked > 0);
  }

  const Instance dec = corpus::decreasing();
  const CheckReport mono = check_adaptive_monotone(*dec.objective, dec.prior);
  CHECK_FALSE(mono.passed);
  REQUIRE_FALSE(mono.witnesses.empty());
  CHECK(mono.witnesses[0].delta_psi < 0.0);

  const Instance comp = corpus::complementarity();
  CHECK(check_adaptive_monotone(*comp.objective, comp.prior).passed);
  const CheckReport sub = check_adaptive_submodular(*comp.objective, comp.prior);
  CHECK_FALSE(sub.passed);
  CHECK(sub.violations == sub.witnesses.size());
  bool found = false;
  for (const Witness& w : sub.witnesses) {
    found |= w.psi.size() == 0 && w.psi_prime.size() == 1 && w.delta_psi == 0.0 &&
             w.delta_psi_prime == 1.0;
  }
  CHECK(found);
}

TEST_CASE("checkers refuse huge priors") {
  const Instance big = corpus::random_coverage(1, {.items = 25});
  expect_code(ErrorCode::kTooLarge, [&] { check_adaptive_monotone(*big.objective, big.prior); });
  expect_code(ErrorCode::kTooLarge,
              [&] { check_adaptive_submodular(*big.objective, big.prior); });
}

TEST_CASE("witness list is capped") {
  // Strictly decreasing in every extra item: many violations.
  std::vector<double> table(16);
  for (std::uint64_t m = 1; m < 16; ++m) table[m] = 10.0 - std::popcount(m);
  const Instance inst = deterministic_instance(SetFunction(4, table));
  const CheckReport r = check_adaptive_monotone(*inst.objective, inst.prior, {.witness_limit = 3});
  CHECK_FALSE(r.passed);
  CHECK(r.witnesses.size() == 3);
  CHECK(r.violations > 3);
}

TEST_CASE("oracle_max examples") {
  const Instance sc2 = corpus::sc2();
  CHECK(oracle_max(sc2, 0).optimum == 0.0);
  CHECK(std::abs(oracle_max(sc2, 1).optimum - 1.0) <= kTol);
  const OracleResult two = oracle_max(sc2, 2);
  CHECK(std::abs(two.optimum - 1.5) <= kTol);
  CHECK(two.states_explored > 0);
  CHECK(std::abs(evaluate_policy(two.policy, sc2).avg_value - 1.5) <= kTol);
  CHECK(std::abs(oracle_max(sc2, 1, PartialRealization({{0, 0}})).optimum - 1.5) <= kTol);
  expect_code(ErrorCode::kTooLarge, [&] { oracle_max(corpus::random_coverage(2, {.items = 9}), 1); });
  expect_code(ErrorCode::kTooLarge,
              [&] { oracle_max(corpus::random_coverage(2, {.items = 7}), 1); });
}

TEST_CASE("oracle_cover examples") {
  const Instance al3 = corpus::al3();
  const OracleResult r = oracle_cover(al3, 1.0);
  CHECK(std::abs(r.optimum - 5.0 / 3.0) <= kTol);
  CHECK(std::abs(evaluate_policy(r.policy, al3).avg_cost - 5.0 / 3.0) <= kTol);

  const Instance single = deterministic_instance(SetFunction(1, {0.0, 1.0}), {2.5});
  CHECK(oracle_cover(single, 1.0).optimum == 2.5);

  expect_code(ErrorCode::kInvalidArgument, [&] { oracle_cover(al3, 0.0); });
  expect_code(ErrorCode::kInfeasibleQuota, [&] { oracle_cover(corpus::sc2(), 2.0); });
}

TEST_CASE("classic greedy examples") {
  std::vector<double> table(8);
  for (std::uint64_t m = 0; m < 8; ++m) table[m] = std::popcount(m);
  const SetFunction card(3, table);
  CHECK(classic_greedy(card, 2) == std::vector<ItemId>{0, 1});
  CHECK(classic_lazy_greedy(card, 2).sequence == std::vector<ItemId>{0, 1});

  const SetFunction cover = coverage_set_function({{0, 1}, {1}, {2}});
  CHECK(classic_greedy(cover, 2) == std::vector<ItemId>{0, 2});
  CHECK(classic_lazy_greedy(cover, 2).sequence == std::vector<ItemId>{0, 2});
  CHECK(classic_greedy(cover, 0).empty());
  CHECK(classic_greedy(cover, 5).size() == 3);
}

TEST_CASE("coverage eta") {
  CHECK(coverage_eta(corpus::sc2(), 1.0) == 1.0);
  CHECK(std::abs(coverage_eta(corpus::al3(), 1.0) - 1.0 / 3.0) <= kTol);
  // Weighted coverage with weights 2 and 3, quota 5: shortfalls 5, 3, 2.
  auto obj = std::make_shared<const CoverageObjective>(
      std::vector<std::string>{"x", "y"},
      std::vector<std::vector<std::vector<std::size_t>>>{{{0}}, {{1}}}, std::vector<double>{2, 3});
  const Instance w = make_instance("w", unit_items(2), {{"s0"}, {"s0"}},
                                   Prior::point_mass({1, 1}, {0, 0}), obj);
  CHECK(coverage_eta(w, 5.0) == 2.0);
}

TEST_CASE("property: oracles match direct recursion and dominate greedy") {
  std::size_t cover_cases = 0;
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    CAPTURE(seed);
    const Instance inst = corpus::random_coverage(seed, {.items = 3 + seed % 3, .max_cost = 3});
    const auto all = testing::worlds(inst.prior);
    for (std::size_t k = 1; k <= 3; ++k) {
      const OracleResult opt = oracle_max(inst, k);
      CHECK(std::abs(opt.optimum - testing::brute_oracle_max(inst, all, {}, k)) <= 1e-12);
      CHECK(std::abs(evaluate_policy(opt.policy, inst).avg_value - opt.optimum) <= 1e-12);
      for (const PartialRealization& leaf : leaf_histories(opt.policy)) CHECK(leaf.size() <= k);
      const BuiltPolicy greedy = build_policy(inst, StoppingRule::cardinality(k));
      CHECK(opt.optimum >= greedy.metrics.avg_value - 1e-12);
    }
    // Largest quota every world can reach.
    double quota = std::numeric_limits<double>::infinity();
    for (const auto& w : all) {
      PartialRealization full;
      for (ItemId i = 0; i < inst.item_count(); ++i) full = full.with({i, w.states[i]});
      quota = std::min(quota, inst.objective->value(full, w.states));
    }
    if (quota <= 0.0) continue;
    ++cover_cases;
    const OracleResult cover = oracle_cover(inst, quota);
    CHECK(std::abs(cover.optimum - testing::brute_oracle_cover(inst, all, {}, quota)) <= 1e-12);
    CHECK(std::abs(evaluate_policy(cover.policy, inst).avg_cost - cover.optimum) <= 1e-12);
    const BuiltPolicy greedy = build_policy(inst, StoppingRule::quota(quota),
                                            {.rule = SelectionRule::kBenefitPerCost});
    CHECK(greedy.metrics.avg_cost >= cover.optimum - 1e-12);
  }
  CHECK(cover_cases >= 10);
}

TEST_CASE("property: checkers accept coverage and reject supermodular tables") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Instance inst = corpus::random_coverage(seed, {.items = 3 + seed % 2});
    CHECK(check_adaptive_monotone(*inst.objective, inst.prior).passed);
    CHECK(check_adaptive_submodular(*inst.objective, inst.prior).passed);
  }
  for (std::size_t n = 2; n <= 5; ++n) {
    std::vector<double> table(std::size_t{1} << n);
    for (std::uint64_t m = 0; m < table.size(); ++m) {
      table[m] = std::pow(std::popcount(m), 2);
    }
    const Instance inst = deterministic_instance(SetFunction(n, table));
    CHECK(check_adaptive_monotone(*inst.objective, inst.prior).passed);
    CHECK_FALSE(check_adaptive_submodular(*inst.objective, inst.prior).passed);
  }
}

TEST_CASE("property: classic lazy greedy matches plain greedy with fewer evaluations") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const SetFunction f = corpus::random_coverage_function(seed, 12, 20);
    const ClassicLazyResult lazy = classic_lazy_greedy(f, 6);
    CHECK(lazy.sequence == classic_greedy(f, 6));
    // Plain greedy evaluates 12 + 11 + ... + 7 gains.
    CHECK(lazy.evaluations <= 57);
  }
}
