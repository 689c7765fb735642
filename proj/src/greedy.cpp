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

#include "adasub/greedy.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "adasub/error.hpp"
#include "adasub/rng.hpp"

namespace adasub {

namespace {

constexpr double kBudgetTolerance = 1e-12;

double score_of(const Instance& instance, SelectionRule rule,
                const MarginalBenefit& benefit) {
  return rule == SelectionRule::kBenefit
             ? benefit.value
             : benefit.value / instance.cost(benefit.item);
}

bool affordable(const Instance& instance, ItemId item, double budget_left) {
  return instance.cost(item) <= budget_left + kBudgetTolerance;
}

// Recomputing near-ties as well keeps lazy selection identical to the plain
// argmax when rounding lets a recomputed value creep above its stale bound.
double tie_window(double score) {
  return 1e-10 * std::max(1.0, std::abs(score));
}

bool structurally_equal(const PolicyTree& a, std::size_t ia, const PolicyTree& b,
                        std::size_t ib) {
  const PolicyNode& na = a.node(ia);
  const PolicyNode& nb = b.node(ib);
  if (na.item != nb.item || na.children.size() != nb.children.size()) return false;
  auto it = nb.children.begin();
  for (const auto& [state, child] : na.children) {
    if (state != it->first || !structurally_equal(a, child, b, it->second)) {
      return false;
    }
    ++it;
  }
  return true;
}

std::string describe(const Instance& instance, const Realization& phi) {
  std::ostringstream out;
  out << "{";
  for (ItemId i = 0; i < phi.size(); ++i) {
    out << (i ? ", " : "") << i << ":" << instance.state_name(i, phi[i]);
  }
  out << "}";
  return out.str();
}

std::string describe(const Instance& instance, const PartialRealization& psi) {
  std::ostringstream out;
  out << "[";
  bool first = true;
  for (const Observation& o : psi.observations()) {
    out << (first ? "" : ", ") << o.item << ":" << instance.state_name(o.item, o.state);
    first = false;
  }
  out << "]";
  return out.str();
}

PartialRealization full_observation(const Realization& phi) {
  std::vector<Observation> obs;
  for (ItemId i = 0; i < phi.size(); ++i) obs.push_back({i, phi[i]});
  return PartialRealization(std::move(obs));
}

void validate_stop(const Instance& instance, const StoppingRule& stop) {
  const double p = stop.parameter;
  switch (stop.kind) {
    case StoppingRule::Kind::kCardinality:
      if (!(p >= 1.0) || p != std::floor(p)) {
        throw Error(ErrorCode::kInvalidArgument, "cardinality k must be an integer >= 1");
      }
      return;
    case StoppingRule::Kind::kBudget: {
      if (!(p > 0.0)) throw Error(ErrorCode::kInvalidArgument, "budget must be positive");
      double cheapest = std::numeric_limits<double>::infinity();
      for (const Item& item : instance.items) cheapest = std::min(cheapest, item.cost);
      if (p < cheapest) {
        throw Error(ErrorCode::kInvalidArgument,
                    "budget is below the cheapest item cost");
      }
      return;
    }
    case StoppingRule::Kind::kQuota:
    case StoppingRule::Kind::kMinSum: {
      if (!(p > 0.0)) throw Error(ErrorCode::kInvalidArgument, "quota must be positive");
      if (instance.f_max && p > *instance.f_max + kQuotaTolerance) {
        std::ostringstream msg;
        msg << "quota " << p << " exceeds f_max " << *instance.f_max;
        throw Error(ErrorCode::kInfeasibleQuota, msg.str());
      }
      std::vector<SupportPoint> support;
      try {
        support = enumerate_support(instance.prior);
      } catch (const Error& e) {
        // Unenumerable: infeasibility surfaces when a branch runs out of items.
        if (e.code() == ErrorCode::kSupportTooLarge) return;
        throw;
      }
      for (const SupportPoint& point : support) {
        const double reached =
            instance.objective->value(full_observation(point.states), point.states);
        if (reached < p - kQuotaTolerance) {
          std::ostringstream msg;
          msg << "quota " << p << " unattainable in realization "
              << describe(instance, point.states) << " (max " << reached << ")";
          throw Error(ErrorCode::kInfeasibleQuota, msg.str());
        }
      }
      return;
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------

std::size_t PolicyTree::internal_count() const {
  return static_cast<std::size_t>(std::count_if(
      nodes_.begin(), nodes_.end(), [](const PolicyNode& n) { return n.item.has_value(); }));
}

std::size_t PolicyTree::depth() const {
  std::function<std::size_t(std::size_t)> walk = [&](std::size_t i) -> std::size_t {
    std::size_t best = 0;
    for (const auto& [state, child] : nodes_[i].children) best = std::max(best, walk(child));
    return nodes_[i].item ? best + 1 : 0;
  };
  return walk(kRoot);
}

bool operator==(const PolicyTree& a, const PolicyTree& b) {
  return structurally_equal(a, PolicyTree::kRoot, b, PolicyTree::kRoot);
}

LazyQueue LazyQueue::initial(std::size_t item_count,
                             const PartialRealization& exclude) {
  LazyQueue queue;
  for (ItemId i = 0; i < item_count; ++i) {
    if (exclude.contains(i)) continue;
    queue.entries_.insert(Entry{std::numeric_limits<double>::infinity(),
                                MarginalBenefit{i, 0.0, 0}, false});
  }
  return queue;
}

// ---------------------------------------------------------------------------

StepResult greedy_step(const Instance& instance, const Objective& objective,
                       const PartialRealization& psi, SelectionRule rule,
                       const ExpectationOptions& options, double budget_left,
                       std::size_t& evaluations) {
  std::optional<StepResult> best;
  double best_score = 0.0;
  for (ItemId e = 0; e < instance.item_count(); ++e) {
    if (psi.contains(e) || !affordable(instance, e, budget_left)) continue;
    const MarginalBenefit benefit = marginal(objective, e, psi, instance.prior, options);
    ++evaluations;
    const double score = score_of(instance, rule, benefit);
    // Strict comparison in id order keeps the lowest id among ties.
    if (!best || score > best_score) {
      best = StepResult{e, benefit};
      best_score = score;
    }
  }
  if (!best) throw Error(ErrorCode::kExhausted, "no selectable item remains");
  return *best;
}

StepResult greedy_step(const Instance& instance, const PartialRealization& psi,
                       SelectionRule rule, const ExpectationOptions& options) {
  std::size_t evaluations = 0;
  return greedy_step(instance, *instance.objective, psi, rule, options,
                     std::numeric_limits<double>::infinity(), evaluations);
}

StepResult lazy_greedy_step(const Instance& instance, const Objective& objective,
                            const PartialRealization& psi, LazyQueue& queue,
                            SelectionRule rule, const ExpectationOptions& options,
                            double budget_left, std::size_t& evaluations) {
  auto& entries = queue.entries_;
  const auto stale = [&psi](const LazyQueue::Entry& e) {
    return !e.computed || e.benefit.stamp != psi.size();
  };
  const auto refresh = [&](std::set<LazyQueue::Entry, LazyQueue::Order>::iterator it) {
    const ItemId item = it->benefit.item;
    entries.erase(it);
    LazyQueue::Entry entry;
    entry.benefit = marginal(objective, item, psi, instance.prior, options);
    entry.score = score_of(instance, rule, entry.benefit);
    entry.computed = true;
    ++evaluations;
    entries.insert(entry);
  };

  while (!entries.empty()) {
    auto top = entries.begin();
    const ItemId item = top->benefit.item;
    if (psi.contains(item) || !affordable(instance, item, budget_left)) {
      // Budgets only shrink down a branch, so the item never returns.
      entries.erase(top);
      continue;
    }
    if (stale(*top)) {
      refresh(top);
      continue;
    }
    std::vector<ItemId> contenders;
    const double floor = top->score - tie_window(top->score);
    for (auto it = std::next(top); it != entries.end() && it->score >= floor; ++it) {
      if (stale(*it) && !psi.contains(it->benefit.item) &&
          affordable(instance, it->benefit.item, budget_left)) {
        contenders.push_back(it->benefit.item);
      }
    }
    if (!contenders.empty()) {
      for (ItemId c : contenders) {
        auto it = std::find_if(entries.begin(), entries.end(),
                               [c](const LazyQueue::Entry& e) { return e.benefit.item == c; });
        refresh(it);
      }
      continue;
    }
    StepResult result{item, top->benefit};
    entries.erase(top);
    return result;
  }
  throw Error(ErrorCode::kExhausted, "no selectable item remains");
}

// ---------------------------------------------------------------------------

ObjectivePtr selection_objective(const Instance& instance,
                                 const StoppingRule& stop) {
  if (!stop.is_coverage()) return instance.objective;
  const auto bound = instance.objective->value_bound();
  if (bound && *bound <= stop.parameter) return instance.objective;
  return std::make_shared<const TruncatedObjective>(instance.objective,
                                                    stop.parameter);
}

namespace {

class TreeBuilder {
 public:
  TreeBuilder(const Instance& instance, const StoppingRule& stop,
              const GreedyOptions& options)
      : instance_(instance),
        stop_(stop),
        options_(options),
        objective_(selection_objective(instance, stop)) {}

  PolicyTree build() {
    PolicyTree tree;
    const double budget = stop_.kind == StoppingRule::Kind::kBudget
                              ? stop_.parameter
                              : std::numeric_limits<double>::infinity();
    expand(tree, PolicyTree::kRoot, PartialRealization{}, budget,
           LazyQueue::initial(instance_.item_count()));
    return tree;
  }

  std::size_t evaluations() const { return evaluations_; }

 private:
  bool stops(const PartialRealization& psi, double budget_left) const {
    const bool exhausted = psi.size() == instance_.item_count();
    if (options_.expectation.backend == Backend::kSample &&
        psi.size() >= options_.max_sampled_depth) {
      return true;
    }
    switch (stop_.kind) {
      case StoppingRule::Kind::kCardinality:
        return exhausted || psi.size() >= static_cast<std::size_t>(stop_.parameter);
      case StoppingRule::Kind::kBudget:
        for (ItemId e = 0; e < instance_.item_count(); ++e) {
          if (!psi.contains(e) && affordable(instance_, e, budget_left)) return false;
        }
        return true;
      case StoppingRule::Kind::kQuota:
      case StoppingRule::Kind::kMinSum:
        if (certifies_quota(*instance_.objective, psi, instance_.prior,
                            stop_.parameter, options_.expectation.support_cap)) {
          return true;
        }
        if (exhausted) {
          throw Error(ErrorCode::kInfeasibleQuota,
                      "quota not certified after observing every item at " +
                          describe(instance_, psi));
        }
        return false;
    }
    return true;
  }

  void expand(PolicyTree& tree, std::size_t node, const PartialRealization& psi,
              double budget_left, LazyQueue queue) {
    if (stops(psi, budget_left)) return;
    const StepResult step =
        options_.engine == Engine::kLazy
            ? lazy_greedy_step(instance_, *objective_, psi, queue, options_.rule,
                               options_.expectation, budget_left, evaluations_)
            : greedy_step(instance_, *objective_, psi, options_.rule,
                          options_.expectation, budget_left, evaluations_);
    tree.set_item(node, step.item);
    const std::vector<double> dist =
        state_distribution(instance_.prior, psi, step.item);
    for (StateId s = 0; s < dist.size(); ++s) {
      if (dist[s] <= 0.0) continue;
      const std::size_t child = tree.add_node();
      tree.add_child(node, s, child);
      expand(tree, child, psi.with({step.item, s}),
             budget_left - instance_.cost(step.item), queue);
    }
  }

  const Instance& instance_;
  StoppingRule stop_;
  GreedyOptions options_;
  ObjectivePtr objective_;
  std::size_t evaluations_ = 0;
};

struct LeafVisit {
  PartialRealization psi;
  double probability = 0.0;
  double cost = 0.0;
};

void collect_leaves(const PolicyTree& policy, const Instance& instance,
                    std::size_t node, const PartialRealization& psi,
                    double probability, double cost, std::vector<LeafVisit>& out) {
  const PolicyNode& n = policy.node(node);
  if (!n.item) {
    out.push_back({psi, probability, cost});
    return;
  }
  const ItemId item = *n.item;
  if (item >= instance.item_count()) {
    throw Error(ErrorCode::kMalformedPolicy, "policy references unknown item " +
                                                 std::to_string(item));
  }
  if (psi.contains(item)) {
    throw Error(ErrorCode::kMalformedPolicy,
                "item " + std::to_string(item) + " repeats along a path");
  }
  const std::vector<double> dist = state_distribution(instance.prior, psi, item);
  for (StateId s = 0; s < dist.size(); ++s) {
    if (dist[s] <= 0.0) continue;
    auto it = n.children.find(s);
    if (it == n.children.end()) {
      throw Error(ErrorCode::kMalformedPolicy,
                  "item " + std::to_string(item) + " has no child for state " +
                      instance.state_name(item, s));
    }
    collect_leaves(policy, instance, it->second, psi.with({item, s}),
                   probability * dist[s], cost + instance.cost(item), out);
  }
}

double path_cost(const Instance& instance, const PartialRealization& psi) {
  double cost = 0.0;
  for (const Observation& o : psi.observations()) cost += instance.cost(o.item);
  return cost;
}

// sum over t = 1..|psi| of Q - min(Q, f(psi_t, phi)).
double min_sum_terms(const Objective& objective, const PartialRealization& psi,
                     const Realization& phi, double quota) {
  double total = 0.0;
  for (std::size_t t = 1; t <= psi.size(); ++t) {
    total += quota - std::min(quota, objective.value(psi.prefix(t), phi));
  }
  return total;
}

PolicyMetrics evaluate_by_sampling(const PolicyTree& policy,
                                   const Instance& instance,
                                   std::optional<double> quota,
                                   const ExpectationOptions& options) {
  PolicyMetrics m;
  m.sampled = true;
  const std::uint64_t stream = rng::draw(options.seed, {rng::kPolicyEvaluation});
  double v_sum = 0, v_sq = 0, c_sum = 0, c_sq = 0, s_sum = 0, s_sq = 0;
  for (std::size_t j = 0; j < options.samples; ++j) {
    const Realization phi = sample(instance.prior, stream, j);
    const PartialRealization psi = execute_policy(policy, phi);
    const double v = instance.objective->value(psi, phi);
    const double c = path_cost(instance, psi);
    const double s = quota ? min_sum_terms(*instance.objective, psi, phi, *quota) : 0.0;
    v_sum += v; v_sq += v * v;
    c_sum += c; c_sq += c * c;
    s_sum += s; s_sq += s * s;
    m.worst_case_cost = std::max(m.worst_case_cost, c);
  }
  const double n = static_cast<double>(std::max<std::size_t>(options.samples, 1));
  const auto se = [n](double sum, double sq) {
    if (n < 2) return 0.0;
    const double mean = sum / n;
    return std::sqrt(std::max(0.0, (sq - sum * mean) / (n - 1)) / n);
  };
  m.avg_value = v_sum / n;
  m.avg_cost = c_sum / n;
  m.min_sum = s_sum / n;
  m.avg_value_std_error = se(v_sum, v_sq);
  m.avg_cost_std_error = se(c_sum, c_sq);
  m.min_sum_std_error = se(s_sum, s_sq);
  return m;
}

}  // namespace

BuiltPolicy build_policy(const Instance& instance, const StoppingRule& stop,
                         const GreedyOptions& options) {
  validate_stop(instance, stop);
  TreeBuilder builder(instance, stop, options);
  BuiltPolicy out;
  out.policy = builder.build();
  const std::optional<double> quota =
      stop.kind == StoppingRule::Kind::kMinSum ? std::optional(stop.parameter)
                                               : std::nullopt;
  out.metrics = evaluate_policy(out.policy, instance, quota, options.expectation);
  out.metrics.evaluation_count = builder.evaluations();
  return out;
}

PolicyMetrics evaluate_policy(const PolicyTree& policy, const Instance& instance,
                              std::optional<double> min_sum_quota,
                              const ExpectationOptions& options) {
  if (options.backend == Backend::kSample) {
    return evaluate_by_sampling(policy, instance, min_sum_quota, options);
  }
  std::vector<LeafVisit> leaves;
  collect_leaves(policy, instance, PolicyTree::kRoot, PartialRealization{}, 1.0,
                 0.0, leaves);
  const Objective& objective = *instance.objective;
  PolicyMetrics m;
  for (const LeafVisit& leaf : leaves) {
    m.avg_value +=
        leaf.probability * expected_value(objective, leaf.psi, instance.prior, options).mean;
    m.avg_cost += leaf.probability * leaf.cost;
    m.worst_case_cost = std::max(m.worst_case_cost, leaf.cost);
    if (!min_sum_quota) continue;
    const double q = *min_sum_quota;
    if (objective.is_observable()) {
      for (std::size_t t = 1; t <= leaf.psi.size(); ++t) {
        m.min_sum += leaf.probability *
                     (q - std::min(q, objective.observed_value(leaf.psi.prefix(t))));
      }
      continue;
    }
    const double mass = posterior_mass(instance.prior, leaf.psi);
    for (const SupportPoint& point :
         enumerate_support(instance.prior, options.support_cap)) {
      if (!consistent(point.states, leaf.psi)) continue;
      m.min_sum += leaf.probability * (point.probability / mass) *
                   min_sum_terms(objective, leaf.psi, point.states, q);
    }
  }
  return m;
}

PartialRealization execute_policy(const PolicyTree& policy, const Realization& phi) {
  PartialRealization psi;
  std::size_t node = PolicyTree::kRoot;
  while (const auto& item = policy.node(node).item) {
    if (*item >= phi.size()) {
      throw Error(ErrorCode::kMalformedPolicy,
                  "policy references unknown item " + std::to_string(*item));
    }
    if (psi.contains(*item)) {
      throw Error(ErrorCode::kMalformedPolicy,
                  "item " + std::to_string(*item) + " repeats along a path");
    }
    const auto& children = policy.node(node).children;
    auto it = children.find(phi[*item]);
    if (it == children.end()) {
      throw Error(ErrorCode::kMalformedPolicy,
                  "no child for realized state " + std::to_string(phi[*item]) +
                      " of item " + std::to_string(*item));
    }
    psi = psi.with({*item, phi[*item]});
    node = it->second;
  }
  return psi;
}

EngineComparison compare_engines(const Instance& instance, const StoppingRule& stop,
                                 GreedyOptions options) {
  using Clock = std::chrono::steady_clock;
  const auto ms_since = [](Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  };
  EngineComparison out;
  options.engine = Engine::kNaive;
  auto start = Clock::now();
  out.naive = build_policy(instance, stop, options);
  out.naive_wall_ms = ms_since(start);
  options.engine = Engine::kLazy;
  start = Clock::now();
  out.lazy = build_policy(instance, stop, options);
  out.lazy_wall_ms = ms_since(start);
  out.trees_equal = out.naive.policy == out.lazy.policy;
  return out;
}

std::vector<PartialRealization> leaf_histories(const PolicyTree& policy) {
  std::vector<PartialRealization> out;
  std::function<void(std::size_t, const PartialRealization&)> walk =
      [&](std::size_t node, const PartialRealization& psi) {
        const PolicyNode& n = policy.node(node);
        if (!n.item) {
          out.push_back(psi);
          return;
        }
        for (const auto& [state, child] : n.children) walk(child, psi.with({*n.item, state}));
      };
  walk(PolicyTree::kRoot, PartialRealization{});
  return out;
}

}  // namespace adasub
