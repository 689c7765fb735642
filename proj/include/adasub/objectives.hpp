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

// Objective functions f(dom(psi), phi) and their conditional expectations.
//
// The central quantity is the conditional expected marginal benefit
//
//   Delta(e | psi) = E[ f(dom(psi) + e, Phi) - f(dom(psi), Phi) | Phi ~ psi ],
//
// the expected gain from selecting item e and observing its state, averaged
// over the posterior given the observations so far. f is adaptive monotone
// when Delta(e | psi) >= 0 everywhere, and adaptive submodular when
// Delta(e | psi) >= Delta(e | psi') whenever psi is a subset of psi'.

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adasub/model.hpp"

namespace adasub {

class Objective {
 public:
  virtual ~Objective() = default;

  virtual std::string_view kind() const = 0;

  // f(dom(psi), phi). Callers guarantee phi ~ psi; use adasub::value() for a
  // checked entry point.
  virtual double value(const PartialRealization& psi,
                       const Realization& phi) const = 0;

  // True when f depends on phi only through the observed states, so that
  // observed_value(psi) == value(psi, phi) for every phi ~ psi.
  virtual bool is_observable() const { return false; }
  virtual double observed_value(const PartialRealization& psi) const;

  // True when f(dom(psi) + e, phi) - f(dom(psi), phi) depends only on psi and
  // phi(e). Enables the exact state-distribution route for marginals, which
  // works for product priors of any size.
  virtual bool has_observable_increments() const { return is_observable(); }
  virtual double increment(const PartialRealization& psi,
                           Observation next) const;

  // Upper bound on f over all inputs, when cheaply known.
  virtual std::optional<double> value_bound() const { return std::nullopt; }
};

using ObjectivePtr = std::shared_ptr<const Objective>;

// Weighted coverage: each (item, state) covers a subset of a ground set and
// f is the total weight of the union covered by the observed states.
class CoverageObjective : public Objective {
 public:
  // covers[item][state] lists ground element indices.
  CoverageObjective(std::vector<std::string> ground,
                    std::vector<std::vector<std::vector<std::size_t>>> covers,
                    std::vector<double> weights = {});

  std::string_view kind() const override { return "coverage"; }
  double value(const PartialRealization& psi,
               const Realization& phi) const override;
  bool is_observable() const override { return true; }
  double observed_value(const PartialRealization& psi) const override;
  double increment(const PartialRealization& psi,
                   Observation next) const override;
  std::optional<double> value_bound() const override;

  std::span<const std::string> ground() const { return ground_; }
  std::span<const double> weights() const { return weights_; }
  std::span<const std::size_t> covered_by(ItemId item, StateId state) const;
  std::size_t item_count() const { return covers_.size(); }
  StateId state_count(ItemId item) const {
    return static_cast<StateId>(covers_.at(item).size());
  }

 private:
  std::vector<bool> covered_set(const PartialRealization& psi) const;

  std::vector<std::string> ground_;
  std::vector<std::vector<std::vector<std::size_t>>> covers_;
  std::vector<double> weights_;
};

struct CascadeEdge {
  ItemId from = 0;
  ItemId to = 0;
  double probability = 0.0;
};

// Independent-cascade influence with full-adoption feedback. Items are nodes;
// the hidden world is the live/blocked status of every edge. Seeding a node
// reveals the status of every edge leaving a node reachable from it through
// live edges, and that revealed outcome is the node's state. f counts the
// nodes reachable from the seeds, which the observed states determine.
class CascadeObjective : public CoverageObjective {
 public:
  using CoverageObjective::CoverageObjective;

  std::string_view kind() const override { return "cascade"; }
};

struct CascadeModel {
  std::vector<std::vector<std::string>> state_names;  // per node
  Prior prior;
  std::shared_ptr<const CascadeObjective> objective;
};

// Enumerates all 2^|edges| edge outcomes, so `edge_cap` bounds the edge count.
CascadeModel make_cascade(std::size_t node_count,
                          const std::vector<CascadeEdge>& edges,
                          std::size_t edge_cap = 20);

// Generalized binary search. Items are queries with deterministic answers per
// hypothesis; a realization is the answer row of the true hypothesis.
// Hypotheses with identical rows cannot be told apart and are merged into one
// class. With V(psi) the classes consistent with psi and h the class of phi:
//
//   f(psi, phi) = 1 - p(V(psi)) + p(h),
//
// which reaches 1 exactly when V(psi) = {h}.
class VersionSpaceObjective : public Objective {
 public:
  // answers[query][hypothesis] is the answer state; masses sum to 1.
  VersionSpaceObjective(std::vector<std::string> hypotheses,
                        std::vector<double> masses,
                        std::vector<std::vector<StateId>> answers);

  std::string_view kind() const override { return "version_space"; }
  double value(const PartialRealization& psi,
               const Realization& phi) const override;
  bool has_observable_increments() const override { return true; }
  double increment(const PartialRealization& psi,
                   Observation next) const override;
  std::optional<double> value_bound() const override { return 1.0; }

  // Tabular prior over merged answer rows.
  Prior prior(std::vector<StateId> state_counts) const;

  struct HypothesisClass {
    Realization row;
    double mass = 0.0;
    std::vector<std::string> members;
  };
  std::span<const HypothesisClass> classes() const { return classes_; }

 private:
  std::vector<HypothesisClass> classes_;
};

// Table-backed set function on up to 30 items; one state per item. values is
// indexed by the bitmask of the selected set.
class SetFunction {
 public:
  SetFunction(std::size_t item_count, std::vector<double> values);

  std::size_t item_count() const { return item_count_; }
  double operator()(std::uint64_t mask) const { return values_.at(mask); }
  double gain(std::uint64_t mask, ItemId item) const {
    return values_.at(mask | (1ULL << item)) - values_.at(mask);
  }
  std::span<const double> values() const { return values_; }

 private:
  std::size_t item_count_;
  std::vector<double> values_;
};

class SetFunctionObjective : public Objective {
 public:
  explicit SetFunctionObjective(SetFunction table) : table_(std::move(table)) {}

  std::string_view kind() const override { return "set_function"; }
  double value(const PartialRealization& psi,
               const Realization& phi) const override;
  bool is_observable() const override { return true; }
  double observed_value(const PartialRealization& psi) const override;
  std::optional<double> value_bound() const override;

  const SetFunction& table() const { return table_; }

 private:
  SetFunction table_;
};

// min(Q, f). Coverage quotas below f's maximum select on this.
class TruncatedObjective : public Objective {
 public:
  TruncatedObjective(ObjectivePtr inner, double quota)
      : inner_(std::move(inner)), quota_(quota) {}

  std::string_view kind() const override { return inner_->kind(); }
  double value(const PartialRealization& psi,
               const Realization& phi) const override;
  bool is_observable() const override { return inner_->is_observable(); }
  double observed_value(const PartialRealization& psi) const override;
  double increment(const PartialRealization& psi,
                   Observation next) const override;
  std::optional<double> value_bound() const override { return quota_; }

 private:
  ObjectivePtr inner_;
  double quota_;
};

// Wraps a classic set function so that, under a point-mass prior, the
// adaptive machinery reproduces it exactly. Rejects f(empty) != 0.
ObjectivePtr make_deterministic(SetFunction table);

// Plain monotone coverage set function: f(S) = |union of sets[i], i in S|.
SetFunction coverage_set_function(
    const std::vector<std::vector<std::size_t>>& sets);

// ---------------------------------------------------------------------------
// Expectations.

enum class Backend { kEnumerate, kSample };

struct ExpectationOptions {
  Backend backend = Backend::kEnumerate;
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  double support_cap = kDefaultSupportCap;
};

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
};

struct MarginalBenefit {
  ItemId item = 0;
  double value = 0.0;
  std::size_t stamp = 0;  // |psi| when computed
};

// Checked f(dom(psi), phi); throws kInconsistentObservation unless phi ~ psi.
double value(const Objective& objective, const PartialRealization& psi,
             const Realization& phi);

// E[f(dom(psi), Phi) | Phi ~ psi].
Estimate expected_value(const Objective& objective,
                        const PartialRealization& psi, const Prior& prior,
                        const ExpectationOptions& options = {});

// Delta(e | psi). Throws kAlreadySelected if e is in dom(psi).
MarginalBenefit marginal(const Objective& objective, ItemId item,
                         const PartialRealization& psi, const Prior& prior,
                         const ExpectationOptions& options = {});

// Delta(e | psi) by summing over the enumerated posterior; the definitional
// route, independent of increment().
double marginal_by_enumeration(const Objective& objective, ItemId item,
                               const PartialRealization& psi,
                               const Prior& prior,
                               double support_cap = kDefaultSupportCap);

// True iff f(dom(psi), phi) >= quota for every phi ~ psi with positive mass.
bool certifies_quota(const Objective& objective, const PartialRealization& psi,
                     const Prior& prior, double quota,
                     double support_cap = kDefaultSupportCap);

// max over the enumerable support of f(all items, phi).
double compute_f_max(const Objective& objective, const Prior& prior,
                     double support_cap = kDefaultSupportCap);

inline constexpr double kQuotaTolerance = 1e-12;

}  // namespace adasub
