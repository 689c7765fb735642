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

// Adaptive greedy policies: selection steps (plain and lazy), decision-tree
// construction under cardinality, budget, quota and min-sum stopping rules,
// and exact or sampled policy evaluation.

#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "adasub/instance.hpp"
#include "adasub/model.hpp"
#include "adasub/objectives.hpp"

namespace adasub {

enum class SelectionRule { kBenefit, kBenefitPerCost };
enum class Engine { kNaive, kLazy };

struct StoppingRule {
  enum class Kind { kCardinality, kBudget, kQuota, kMinSum };

  Kind kind = Kind::kCardinality;
  double parameter = 1.0;

  static StoppingRule cardinality(std::size_t k) {
    return {Kind::kCardinality, static_cast<double>(k)};
  }
  static StoppingRule budget(double b) { return {Kind::kBudget, b}; }
  static StoppingRule quota(double q) { return {Kind::kQuota, q}; }
  static StoppingRule min_sum(double q) { return {Kind::kMinSum, q}; }

  bool is_coverage() const {
    return kind == Kind::kQuota || kind == Kind::kMinSum;
  }
};

struct PolicyNode {
  std::optional<ItemId> item;  // empty at a leaf
  std::map<StateId, std::size_t> children;
};

// Decision tree stored as a node array; node 0 is the root. A default
// constructed tree is the empty policy (a single leaf).
class PolicyTree {
 public:
  PolicyTree() : nodes_(1) {}

  static constexpr std::size_t kRoot = 0;

  const PolicyNode& node(std::size_t index) const { return nodes_.at(index); }
  std::size_t size() const { return nodes_.size(); }
  std::size_t internal_count() const;
  std::size_t depth() const;

  std::size_t add_node() {
    nodes_.emplace_back();
    return nodes_.size() - 1;
  }
  void set_item(std::size_t index, ItemId item) { nodes_.at(index).item = item; }
  void add_child(std::size_t index, StateId state, std::size_t child) {
    nodes_.at(index).children[state] = child;
  }

  // Structural equality from the root, independent of node numbering.
  friend bool operator==(const PolicyTree& a, const PolicyTree& b);

 private:
  std::vector<PolicyNode> nodes_;
};

struct PolicyMetrics {
  double avg_value = 0.0;
  double avg_cost = 0.0;
  double worst_case_cost = 0.0;
  double min_sum = 0.0;
  std::size_t evaluation_count = 0;  // marginal() calls during construction
  // Non-zero only for sampled evaluation.
  bool sampled = false;
  double avg_value_std_error = 0.0;
  double avg_cost_std_error = 0.0;
  double min_sum_std_error = 0.0;
};

struct StepResult {
  ItemId item = 0;
  MarginalBenefit benefit;
};

// Priority queue of possibly stale marginals, ordered by score descending then
// item id ascending. An entry is fresh when its stamp equals |psi|.
class LazyQueue {
 public:
  // One never-computed entry (score +inf) per item not in `exclude`.
  static LazyQueue initial(std::size_t item_count,
                           const PartialRealization& exclude = {});

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  struct Entry {
    double score = std::numeric_limits<double>::infinity();
    MarginalBenefit benefit;
    bool computed = false;
  };
  struct Order {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.score != b.score) return a.score > b.score;
      return a.benefit.item < b.benefit.item;
    }
  };
  const std::set<Entry, Order>& entries() const { return entries_; }

 private:
  friend StepResult lazy_greedy_step(const Instance&, const Objective&,
                                     const PartialRealization&, LazyQueue&,
                                     SelectionRule, const ExpectationOptions&,
                                     double, std::size_t&);
  std::set<Entry, Order> entries_;
};

// argmax over unselected items with cost <= budget_left of Delta(e|psi), or
// of Delta(e|psi)/c(e); ties go to the lowest id. Adds one to `evaluations`
// per candidate. Throws kExhausted when no candidate remains.
StepResult greedy_step(const Instance& instance, const Objective& objective,
                       const PartialRealization& psi, SelectionRule rule,
                       const ExpectationOptions& options, double budget_left,
                       std::size_t& evaluations);

StepResult greedy_step(const Instance& instance, const PartialRealization& psi,
                       SelectionRule rule = SelectionRule::kBenefit,
                       const ExpectationOptions& options = {});

// Same selection as greedy_step, recomputing only entries that could still
// win. Stale values upper-bound fresh ones for adaptive submodular objectives.
// The selected item leaves the queue.
StepResult lazy_greedy_step(const Instance& instance, const Objective& objective,
                            const PartialRealization& psi, LazyQueue& queue,
                            SelectionRule rule, const ExpectationOptions& options,
                            double budget_left, std::size_t& evaluations);

struct GreedyOptions {
  Engine engine = Engine::kLazy;
  SelectionRule rule = SelectionRule::kBenefit;
  ExpectationOptions expectation;
  // Only applies with the sampling backend.
  std::size_t max_sampled_depth = 12;
};

struct BuiltPolicy {
  PolicyTree policy;
  PolicyMetrics metrics;
};

// Expands the greedy decision tree over every positive-posterior state.
// Quota and min-sum branches stop once f >= Q under every realization
// consistent with the branch. Throws kInfeasibleQuota if some realization
// cannot reach Q.
BuiltPolicy build_policy(const Instance& instance, const StoppingRule& stop,
                         const GreedyOptions& options = {});

// Objective greedy selects on for `stop`: min(Q, f) for coverage rules when Q
// is below f's bound, f otherwise.
ObjectivePtr selection_objective(const Instance& instance,
                                 const StoppingRule& stop);

// avg/worst-case cost and average value over the prior. min_sum is
//   sum_phi p(phi) sum_{t=1..|path|} (Q - E[min(Q, f(psi_t, Phi))])
// when min_sum_quota is set, 0 otherwise.
PolicyMetrics evaluate_policy(const PolicyTree& policy, const Instance& instance,
                              std::optional<double> min_sum_quota = std::nullopt,
                              const ExpectationOptions& options = {});

// Observations collected when running the policy in world phi.
PartialRealization execute_policy(const PolicyTree& policy, const Realization& phi);

// Naive and lazy construction of the same greedy policy.
struct EngineComparison {
  BuiltPolicy naive;
  BuiltPolicy lazy;
  double naive_wall_ms = 0.0;
  double lazy_wall_ms = 0.0;
  bool trees_equal = false;
};
EngineComparison compare_engines(const Instance& instance, const StoppingRule& stop,
                                 GreedyOptions options = {});

// Observation sequence at every leaf, in preorder.
std::vector<PartialRealization> leaf_histories(const PolicyTree& policy);

}  // namespace adasub
