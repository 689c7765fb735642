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

#include "adasub/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "adasub/error.hpp"

namespace adasub {

namespace {

using Key = std::vector<Observation>;

Key key_of(const PartialRealization& psi) {
  const PartialRealization c = psi.canonical();
  return {c.observations().begin(), c.observations().end()};
}

void require_enumerable(const Prior& prior, double cap) {
  if (prior.kind() == Prior::Kind::kIndependent && prior.support_size() > cap) {
    throw Error(ErrorCode::kTooLarge,
                "support has " + std::to_string(prior.support_size()) +
                    " realizations, cap is " + std::to_string(cap));
  }
}

void require_oracle_size(const Instance& instance, const OracleOptions& options) {
  if (instance.item_count() > options.max_items) {
    throw Error(ErrorCode::kTooLarge,
                "oracle supports at most " + std::to_string(options.max_items) +
                    " items, instance has " + std::to_string(instance.item_count()));
  }
  if (instance.prior.support_size() > options.max_support) {
    throw Error(ErrorCode::kTooLarge,
                "oracle supports at most " + std::to_string(options.max_support) +
                    " realizations");
  }
}

class MarginalCache {
 public:
  MarginalCache(const Objective& objective, const Prior& prior, double cap)
      : objective_(objective), prior_(prior) {
    options_.support_cap = cap;
  }

  double operator()(const PartialRealization& psi, ItemId item) {
    auto key = std::make_pair(key_of(psi), item);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const double v = marginal(objective_, item, psi, prior_, options_).value;
    cache_.emplace(std::move(key), v);
    return v;
  }

 private:
  const Objective& objective_;
  const Prior& prior_;
  ExpectationOptions options_;
  std::map<std::pair<Key, ItemId>, double> cache_;
};

}  // namespace

std::vector<PartialRealization> reachable_partial_realizations(
    const Prior& prior, std::size_t state_cap) {
  std::set<Key> seen{Key{}};
  std::vector<PartialRealization> order{PartialRealization{}};
  for (std::size_t head = 0; head < order.size(); ++head) {
    const PartialRealization psi = order[head];
    for (ItemId e = 0; e < prior.item_count(); ++e) {
      if (psi.contains(e)) continue;
      const std::vector<double> dist = state_distribution(prior, psi, e);
      for (StateId s = 0; s < dist.size(); ++s) {
        if (dist[s] <= 0.0) continue;
        const PartialRealization next = psi.with({e, s}).canonical();
        Key key(next.observations().begin(), next.observations().end());
        if (!seen.insert(std::move(key)).second) continue;
        if (order.size() >= state_cap) {
          throw Error(ErrorCode::kTooLarge,
                      "more than " + std::to_string(state_cap) +
                          " reachable partial realizations");
        }
        order.push_back(next);
      }
    }
  }
  std::stable_sort(order.begin(), order.end(),
                   [](const PartialRealization& a, const PartialRealization& b) {
                     if (a.size() != b.size()) return a.size() < b.size();
                     return std::lexicographical_compare(
                         a.observations().begin(), a.observations().end(),
                         b.observations().begin(), b.observations().end());
                   });
  return order;
}

CheckReport check_adaptive_monotone(const Objective& objective, const Prior& prior,
                                    const VerifyOptions& options) {
  require_enumerable(prior, options.support_cap);
  CheckReport report;
  report.property = CheckReport::Property::kMonotone;
  MarginalCache delta(objective, prior, options.support_cap);
  for (const PartialRealization& psi :
       reachable_partial_realizations(prior, options.state_cap)) {
    for (ItemId e = 0; e < prior.item_count(); ++e) {
      if (psi.contains(e)) continue;
      ++report.pairs_checked;
      const double d = delta(psi, e);
      if (d >= -options.tolerance) continue;
      ++report.violations;
      if (report.witnesses.size() < options.witness_limit) {
        report.witnesses.push_back({psi, psi, e, d, d});
      }
    }
  }
  report.passed = report.violations == 0;
  return report;
}

CheckReport check_adaptive_submodular(const Objective& objective,
                                      const Prior& prior,
                                      const VerifyOptions& options) {
  require_enumerable(prior, options.support_cap);
  CheckReport report;
  report.property = CheckReport::Property::kSubmodular;
  MarginalCache delta(objective, prior, options.support_cap);
  for (const PartialRealization& larger :
       reachable_partial_realizations(prior, options.state_cap)) {
    const auto obs = larger.observations();
    if (obs.size() >= 63) {
      throw Error(ErrorCode::kTooLarge, "partial realization too long to enumerate subsets");
    }
    const std::uint64_t full = (1ULL << obs.size()) - 1;
    for (std::uint64_t mask = 0; mask < full; ++mask) {
      std::vector<Observation> picked;
      for (std::size_t i = 0; i < obs.size(); ++i) {
        if (mask >> i & 1ULL) picked.push_back(obs[i]);
      }
      const PartialRealization smaller(std::move(picked));
      for (ItemId e = 0; e < prior.item_count(); ++e) {
        if (larger.contains(e)) continue;
        ++report.pairs_checked;
        const double d_small = delta(smaller, e);
        const double d_large = delta(larger, e);
        if (d_large <= d_small + options.tolerance) continue;
        ++report.violations;
        if (report.witnesses.size() < options.witness_limit) {
          report.witnesses.push_back({smaller, larger, e, d_small, d_large});
        }
      }
    }
  }
  report.passed = report.violations == 0;
  return report;
}

// ---------------------------------------------------------------------------

namespace {

class MaxOracle {
 public:
  MaxOracle(const Instance& instance) : instance_(instance) {}

  double solve(const PartialRealization& psi, std::size_t remaining) {
    auto key = std::make_pair(key_of(psi), remaining);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second.value;

    const double stop =
        expected_value(*instance_.objective, psi, instance_.prior).mean;
    Entry best{stop, std::nullopt};
    if (remaining > 0) {
      for (ItemId e = 0; e < instance_.item_count(); ++e) {
        if (psi.contains(e)) continue;
        const std::vector<double> dist = state_distribution(instance_.prior, psi, e);
        double q = 0.0;
        for (StateId s = 0; s < dist.size(); ++s) {
          if (dist[s] > 0.0) q += dist[s] * solve(psi.with({e, s}), remaining - 1);
        }
        // Prefer selecting over stopping when they tie.
        if (q > best.value || (!best.item && q >= best.value - 1e-12)) {
          best = Entry{std::max(q, best.value), e};
        }
      }
    }
    memo_.emplace(std::move(key), best);
    return best.value;
  }

  void extract(PolicyTree& tree, std::size_t node, const PartialRealization& psi,
               std::size_t remaining) const {
    const Entry& entry = memo_.at(std::make_pair(key_of(psi), remaining));
    if (!entry.item) return;
    const ItemId e = *entry.item;
    tree.set_item(node, e);
    const std::vector<double> dist = state_distribution(instance_.prior, psi, e);
    for (StateId s = 0; s < dist.size(); ++s) {
      if (dist[s] <= 0.0) continue;
      const std::size_t child = tree.add_node();
      tree.add_child(node, s, child);
      extract(tree, child, psi.with({e, s}), remaining - 1);
    }
  }

  std::size_t explored() const { return memo_.size(); }

 private:
  struct Entry {
    double value;
    std::optional<ItemId> item;
  };
  const Instance& instance_;
  std::map<std::pair<Key, std::size_t>, Entry> memo_;
};

class CoverOracle {
 public:
  CoverOracle(const Instance& instance, double quota)
      : instance_(instance), quota_(quota) {}

  double solve(const PartialRealization& psi) {
    Key key = key_of(psi);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second.value;
    Entry best{std::numeric_limits<double>::infinity(), std::nullopt};
    if (certifies_quota(*instance_.objective, psi, instance_.prior, quota_)) {
      best.value = 0.0;
    } else {
      for (ItemId e = 0; e < instance_.item_count(); ++e) {
        if (psi.contains(e)) continue;
        const std::vector<double> dist = state_distribution(instance_.prior, psi, e);
        double q = instance_.cost(e);
        for (StateId s = 0; s < dist.size(); ++s) {
          if (dist[s] > 0.0) q += dist[s] * solve(psi.with({e, s}));
        }
        if (q < best.value) best = Entry{q, e};
      }
    }
    memo_.emplace(std::move(key), best);
    return best.value;
  }

  void extract(PolicyTree& tree, std::size_t node,
               const PartialRealization& psi) const {
    const Entry& entry = memo_.at(key_of(psi));
    if (!entry.item) return;
    const ItemId e = *entry.item;
    tree.set_item(node, e);
    const std::vector<double> dist = state_distribution(instance_.prior, psi, e);
    for (StateId s = 0; s < dist.size(); ++s) {
      if (dist[s] <= 0.0) continue;
      const std::size_t child = tree.add_node();
      tree.add_child(node, s, child);
      extract(tree, child, psi.with({e, s}));
    }
  }

  std::size_t explored() const { return memo_.size(); }

 private:
  struct Entry {
    double value;
    std::optional<ItemId> item;
  };
  const Instance& instance_;
  double quota_;
  std::map<Key, Entry> memo_;
};

}  // namespace

OracleResult oracle_max(const Instance& instance, std::size_t k,
                        const PartialRealization& root,
                        const OracleOptions& options) {
  require_oracle_size(instance, options);
  MaxOracle oracle(instance);
  OracleResult result;
  result.optimum = oracle.solve(root, k);
  oracle.extract(result.policy, PolicyTree::kRoot, root, k);
  result.states_explored = oracle.explored();
  return result;
}

OracleResult oracle_cover(const Instance& instance, double quota,
                          const OracleOptions& options) {
  if (!(quota > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "quota must be positive");
  }
  require_oracle_size(instance, options);
  for (const SupportPoint& point : enumerate_support(instance.prior)) {
    std::vector<Observation> all;
    for (ItemId i = 0; i < point.states.size(); ++i) all.push_back({i, point.states[i]});
    if (instance.objective->value(PartialRealization(all), point.states) <
        quota - kQuotaTolerance) {
      throw Error(ErrorCode::kInfeasibleQuota,
                  "quota unattainable in some realization");
    }
  }
  CoverOracle oracle(instance, quota);
  OracleResult result;
  result.optimum = oracle.solve(PartialRealization{});
  if (!std::isfinite(result.optimum)) {
    throw Error(ErrorCode::kInfeasibleQuota, "no policy certifies the quota");
  }
  oracle.extract(result.policy, PolicyTree::kRoot, PartialRealization{});
  result.states_explored = oracle.explored();
  return result;
}

double coverage_eta(const Instance& instance, double quota, std::size_t max_items) {
  const std::size_t n = instance.item_count();
  if (n > max_items) {
    throw Error(ErrorCode::kTooLarge, "eta enumeration supports at most " +
                                          std::to_string(max_items) + " items");
  }
  double eta = quota;
  for (const SupportPoint& point : enumerate_support(instance.prior)) {
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
      std::vector<Observation> obs;
      for (ItemId i = 0; i < n; ++i) {
        if (mask >> i & 1ULL) obs.push_back({i, point.states[i]});
      }
      const double f = instance.objective->value(PartialRealization(obs), point.states);
      const double shortfall = quota - std::min(quota, f);
      if (shortfall > kQuotaTolerance) eta = std::min(eta, shortfall);
    }
  }
  return eta;
}

std::vector<ItemId> classic_greedy(const SetFunction& f, std::size_t k) {
  std::vector<ItemId> sequence;
  std::uint64_t mask = 0;
  const std::size_t n = f.item_count();
  while (sequence.size() < std::min(k, n)) {
    std::optional<ItemId> best;
    double best_gain = 0.0;
    for (ItemId e = 0; e < n; ++e) {
      if (mask >> e & 1ULL) continue;
      const double gain = f.gain(mask, e);
      if (!best || gain > best_gain) {
        best = e;
        best_gain = gain;
      }
    }
    sequence.push_back(*best);
    mask |= 1ULL << *best;
  }
  return sequence;
}

ClassicLazyResult classic_lazy_greedy(const SetFunction& f, std::size_t k) {
  struct Entry {
    double gain;
    ItemId item;
    std::size_t stamp;
  };
  const auto order = [](const Entry& a, const Entry& b) {
    if (a.gain != b.gain) return a.gain > b.gain;
    return a.item < b.item;
  };
  std::set<Entry, decltype(order)> queue(order);
  const std::size_t n = f.item_count();
  constexpr std::size_t kNever = std::numeric_limits<std::size_t>::max();
  for (ItemId e = 0; e < n; ++e) {
    queue.insert({std::numeric_limits<double>::infinity(), e, kNever});
  }
  ClassicLazyResult result;
  std::uint64_t mask = 0;
  while (result.sequence.size() < std::min(k, n)) {
    Entry top = *queue.begin();
    queue.erase(queue.begin());
    if (top.stamp != result.sequence.size()) {
      top.gain = f.gain(mask, top.item);
      top.stamp = result.sequence.size();
      ++result.evaluations;
      queue.insert(top);
      continue;
    }
    result.sequence.push_back(top.item);
    mask |= 1ULL << top.item;
  }
  return result;
}

}  // namespace adasub
