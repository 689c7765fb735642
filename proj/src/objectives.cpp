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

#include "adasub/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <sstream>

#include "adasub/error.hpp"
#include "adasub/rng.hpp"

namespace adasub {

namespace {

PartialRealization full_observation(const Realization& phi) {
  std::vector<Observation> obs;
  obs.reserve(phi.size());
  for (ItemId i = 0; i < phi.size(); ++i) obs.push_back({i, phi[i]});
  return PartialRealization(std::move(obs));
}

void require_positive_mass(const Prior& prior, const PartialRealization& psi) {
  if (posterior_mass(prior, psi) <= 0.0) {
    throw Error(ErrorCode::kInconsistentObservation,
                "observations have zero prior mass");
  }
}

bool prior_enumerable(const Prior& prior, double cap) {
  return prior.kind() == Prior::Kind::kTabular || prior.support_size() <= cap;
}

Estimate summarize(double sum, double sum_sq, std::size_t n) {
  Estimate est;
  if (n == 0) return est;
  est.mean = sum / static_cast<double>(n);
  if (n > 1) {
    const double var =
        std::max(0.0, (sum_sq - sum * est.mean) / static_cast<double>(n - 1));
    est.std_error = std::sqrt(var / static_cast<double>(n));
  }
  return est;
}

}  // namespace

double Objective::observed_value(const PartialRealization&) const {
  throw Error(ErrorCode::kInvalidArgument,
              std::string(kind()) + " objective depends on unobserved states");
}

double Objective::increment(const PartialRealization& psi,
                            Observation next) const {
  if (!is_observable()) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(kind()) + " objective has no observable increment");
  }
  return observed_value(psi.with(next)) - observed_value(psi);
}

// ---------------------------------------------------------------------------

CoverageObjective::CoverageObjective(
    std::vector<std::string> ground,
    std::vector<std::vector<std::vector<std::size_t>>> covers,
    std::vector<double> weights)
    : ground_(std::move(ground)),
      covers_(std::move(covers)),
      weights_(std::move(weights)) {
  if (weights_.empty()) weights_.assign(ground_.size(), 1.0);
  if (weights_.size() != ground_.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "coverage weights must match the ground set");
  }
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "coverage weights must be positive");
    }
  }
  for (const auto& per_state : covers_) {
    for (const auto& subset : per_state) {
      for (std::size_t element : subset) {
        if (element >= ground_.size()) {
          throw Error(ErrorCode::kInvalidArgument,
                      "cover references undeclared element " +
                          std::to_string(element));
        }
      }
    }
  }
}

std::span<const std::size_t> CoverageObjective::covered_by(ItemId item,
                                                           StateId state) const {
  return covers_.at(item).at(state);
}

std::vector<bool> CoverageObjective::covered_set(
    const PartialRealization& psi) const {
  std::vector<bool> covered(ground_.size(), false);
  for (const Observation& o : psi.observations()) {
    for (std::size_t element : covered_by(o.item, o.state)) covered[element] = true;
  }
  return covered;
}

double CoverageObjective::value(const PartialRealization& psi,
                                const Realization&) const {
  return observed_value(psi);
}

double CoverageObjective::observed_value(const PartialRealization& psi) const {
  const std::vector<bool> covered = covered_set(psi);
  double total = 0.0;
  for (std::size_t i = 0; i < covered.size(); ++i) {
    if (covered[i]) total += weights_[i];
  }
  return total;
}

double CoverageObjective::increment(const PartialRealization& psi,
                                    Observation next) const {
  if (psi.contains(next.item)) {
    throw Error(ErrorCode::kAlreadySelected,
                "item " + std::to_string(next.item) + " already selected");
  }
  std::vector<bool> covered = covered_set(psi);
  double gain = 0.0;
  for (std::size_t element : covered_by(next.item, next.state)) {
    if (!covered[element]) {
      covered[element] = true;
      gain += weights_[element];
    }
  }
  return gain;
}

std::optional<double> CoverageObjective::value_bound() const {
  double total = 0.0;
  for (double w : weights_) total += w;
  return total;
}

// ---------------------------------------------------------------------------

CascadeModel make_cascade(std::size_t node_count,
                          const std::vector<CascadeEdge>& edges,
                          std::size_t edge_cap) {
  if (node_count == 0) {
    throw Error(ErrorCode::kInvalidArgument, "cascade needs at least one node");
  }
  if (edges.size() > edge_cap || edges.size() >= 63) {
    throw Error(ErrorCode::kSupportTooLarge,
                "cascade has " + std::to_string(edges.size()) +
                    " edges, cap is " + std::to_string(edge_cap));
  }
  for (const CascadeEdge& e : edges) {
    if (e.from >= node_count || e.to >= node_count) {
      throw Error(ErrorCode::kInvalidArgument, "edge references unknown node");
    }
    if (!(e.probability >= 0.0 && e.probability <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "edge probability must lie in [0, 1]");
    }
  }

  std::vector<std::vector<std::size_t>> out_edges(node_count);
  for (std::size_t k = 0; k < edges.size(); ++k) out_edges[edges[k].from].push_back(k);

  // Per node: outcome key -> state id, in order of first appearance.
  std::vector<std::map<std::string, StateId>> state_ids(node_count);
  std::vector<std::vector<std::string>> state_names(node_count);
  std::vector<std::vector<std::vector<std::size_t>>> reach_sets(node_count);
  std::map<Realization, double> rows;

  const std::uint64_t outcomes = 1ULL << edges.size();
  for (std::uint64_t live = 0; live < outcomes; ++live) {
    double p = 1.0;
    for (std::size_t k = 0; k < edges.size(); ++k) {
      p *= (live >> k & 1ULL) ? edges[k].probability : 1.0 - edges[k].probability;
    }
    if (p <= 0.0) continue;

    Realization row(node_count);
    for (ItemId v = 0; v < node_count; ++v) {
      std::vector<bool> seen(node_count, false);
      std::deque<ItemId> frontier{v};
      seen[v] = true;
      std::vector<std::size_t> revealed;
      while (!frontier.empty()) {
        const ItemId u = frontier.front();
        frontier.pop_front();
        for (std::size_t k : out_edges[u]) {
          revealed.push_back(k);
          if ((live >> k & 1ULL) && !seen[edges[k].to]) {
            seen[edges[k].to] = true;
            frontier.push_back(edges[k].to);
          }
        }
      }
      std::sort(revealed.begin(), revealed.end());
      std::vector<std::size_t> reach;
      std::ostringstream key;
      key << "reach=";
      for (ItemId u = 0; u < node_count; ++u) {
        if (!seen[u]) continue;
        key << (reach.empty() ? "" : ",") << u;
        reach.push_back(u);
      }
      key << ";live=";
      bool first = true;
      for (std::size_t k : revealed) {
        if (live >> k & 1ULL) {
          key << (first ? "" : ",") << k;
          first = false;
        }
      }
      key << ";blocked=";
      first = true;
      for (std::size_t k : revealed) {
        if (!(live >> k & 1ULL)) {
          key << (first ? "" : ",") << k;
          first = false;
        }
      }
      auto [it, inserted] = state_ids[v].try_emplace(
          key.str(), static_cast<StateId>(state_names[v].size()));
      if (inserted) {
        state_names[v].push_back(key.str());
        reach_sets[v].push_back(std::move(reach));
      }
      row[v] = it->second;
    }
    rows[row] += p;
  }

  std::vector<StateId> state_counts(node_count);
  for (ItemId v = 0; v < node_count; ++v) {
    state_counts[v] = static_cast<StateId>(state_names[v].size());
  }
  std::vector<SupportPoint> support;
  support.reserve(rows.size());
  for (auto& [row, p] : rows) support.push_back({row, p});

  std::vector<std::string> ground;
  for (std::size_t v = 0; v < node_count; ++v) ground.push_back(std::to_string(v));

  return CascadeModel{
      std::move(state_names),
      Prior::tabular(std::move(state_counts), std::move(support)),
      std::make_shared<const CascadeObjective>(std::move(ground),
                                               std::move(reach_sets))};
}

// ---------------------------------------------------------------------------

VersionSpaceObjective::VersionSpaceObjective(
    std::vector<std::string> hypotheses, std::vector<double> masses,
    std::vector<std::vector<StateId>> answers) {
  if (hypotheses.size() != masses.size() || hypotheses.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "version space needs one mass per hypothesis");
  }
  double total = 0.0;
  for (double m : masses) {
    if (!(m >= 0.0) || !std::isfinite(m)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "hypothesis masses must be non-negative");
    }
    total += m;
  }
  if (std::abs(total - 1.0) > kProbabilityTolerance) {
    throw Error(ErrorCode::kInvalidArgument, "hypothesis masses must sum to 1");
  }
  for (const auto& row : answers) {
    if (row.size() != hypotheses.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "every query needs an answer for every hypothesis");
    }
  }
  for (std::size_t h = 0; h < hypotheses.size(); ++h) {
    if (masses[h] == 0.0) continue;
    Realization row(answers.size());
    for (std::size_t q = 0; q < answers.size(); ++q) row[q] = answers[q][h];
    auto it = std::find_if(classes_.begin(), classes_.end(),
                           [&row](const HypothesisClass& c) { return c.row == row; });
    if (it == classes_.end()) {
      classes_.push_back({std::move(row), masses[h], {hypotheses[h]}});
    } else {
      it->mass += masses[h];
      it->members.push_back(hypotheses[h]);
    }
  }
}

double VersionSpaceObjective::value(const PartialRealization& psi,
                                    const Realization& phi) const {
  auto own = std::find_if(classes_.begin(), classes_.end(),
                          [&phi](const HypothesisClass& c) { return c.row == phi; });
  if (own == classes_.end()) {
    throw Error(ErrorCode::kInvalidArgument,
                "realization matches no hypothesis");
  }
  // 1 - p(V) + p(h) = 1 - (mass of the other classes still in V).
  double others = 0.0;
  for (const HypothesisClass& c : classes_) {
    if (&c != &*own && consistent(c.row, psi)) others += c.mass;
  }
  return 1.0 - others;
}

double VersionSpaceObjective::increment(const PartialRealization& psi,
                                        Observation next) const {
  if (psi.contains(next.item)) {
    throw Error(ErrorCode::kAlreadySelected,
                "item " + std::to_string(next.item) + " already selected");
  }
  double eliminated = 0.0;
  for (const HypothesisClass& c : classes_) {
    if (consistent(c.row, psi) && c.row.at(next.item) != next.state) {
      eliminated += c.mass;
    }
  }
  return eliminated;
}

Prior VersionSpaceObjective::prior(std::vector<StateId> state_counts) const {
  std::vector<SupportPoint> support;
  for (const HypothesisClass& c : classes_) support.push_back({c.row, c.mass});
  return Prior::tabular(std::move(state_counts), std::move(support));
}

// ---------------------------------------------------------------------------

SetFunction::SetFunction(std::size_t item_count, std::vector<double> values)
    : item_count_(item_count), values_(std::move(values)) {
  if (item_count_ > 30) {
    throw Error(ErrorCode::kTooLarge, "set function tables support <= 30 items");
  }
  if (values_.size() != (std::size_t{1} << item_count_)) {
    throw Error(ErrorCode::kInvalidArgument,
                "set function table needs 2^n entries");
  }
}

double SetFunctionObjective::value(const PartialRealization& psi,
                                   const Realization&) const {
  return observed_value(psi);
}

double SetFunctionObjective::observed_value(const PartialRealization& psi) const {
  std::uint64_t mask = 0;
  for (const Observation& o : psi.observations()) mask |= 1ULL << o.item;
  return table_(mask);
}

std::optional<double> SetFunctionObjective::value_bound() const {
  return *std::max_element(table_.values().begin(), table_.values().end());
}

ObjectivePtr make_deterministic(SetFunction table) {
  if (table(0) != 0.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "set function must satisfy f(empty) = 0");
  }
  return std::make_shared<const SetFunctionObjective>(std::move(table));
}

SetFunction coverage_set_function(
    const std::vector<std::vector<std::size_t>>& sets) {
  const std::size_t n = sets.size();
  std::vector<double> values(std::size_t{1} << n, 0.0);
  for (std::uint64_t mask = 0; mask < values.size(); ++mask) {
    std::vector<std::size_t> covered;
    for (ItemId i = 0; i < n; ++i) {
      if (mask >> i & 1ULL) covered.insert(covered.end(), sets[i].begin(), sets[i].end());
    }
    std::sort(covered.begin(), covered.end());
    values[mask] = static_cast<double>(
        std::unique(covered.begin(), covered.end()) - covered.begin());
  }
  return SetFunction(n, std::move(values));
}

// ---------------------------------------------------------------------------

double TruncatedObjective::value(const PartialRealization& psi,
                                 const Realization& phi) const {
  return std::min(quota_, inner_->value(psi, phi));
}

double TruncatedObjective::observed_value(const PartialRealization& psi) const {
  return std::min(quota_, inner_->observed_value(psi));
}

double TruncatedObjective::increment(const PartialRealization& psi,
                                     Observation next) const {
  return observed_value(psi.with(next)) - observed_value(psi);
}

// ---------------------------------------------------------------------------

double value(const Objective& objective, const PartialRealization& psi,
             const Realization& phi) {
  if (!consistent(phi, psi)) {
    throw Error(ErrorCode::kInconsistentObservation,
                "realization disagrees with the observations");
  }
  return objective.value(psi, phi);
}

Estimate expected_value(const Objective& objective,
                        const PartialRealization& psi, const Prior& prior,
                        const ExpectationOptions& options) {
  const double mass = posterior_mass(prior, psi);
  if (mass <= 0.0) {
    throw Error(ErrorCode::kInconsistentObservation,
                "observations have zero prior mass");
  }
  if (objective.is_observable()) return {objective.observed_value(psi), 0.0};

  if (options.backend == Backend::kEnumerate &&
      prior_enumerable(prior, options.support_cap)) {
    double total = 0.0;
    for (const SupportPoint& point : enumerate_support(prior, options.support_cap)) {
      if (consistent(point.states, psi)) {
        total += point.probability * objective.value(psi, point.states);
      }
    }
    return {total / mass, 0.0};
  }

  const std::uint64_t stream =
      rng::draw(options.seed, {rng::kExpectation, psi.hash()});
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t j = 0; j < options.samples; ++j) {
    const Realization phi = sample_posterior(prior, psi, stream, j);
    const double v = objective.value(psi, phi);
    sum += v;
    sum_sq += v * v;
  }
  return summarize(sum, sum_sq, options.samples);
}

double marginal_by_enumeration(const Objective& objective, ItemId item,
                               const PartialRealization& psi,
                               const Prior& prior, double support_cap) {
  if (psi.contains(item)) {
    throw Error(ErrorCode::kAlreadySelected,
                "item " + std::to_string(item) + " already selected");
  }
  double mass = 0.0;
  double total = 0.0;
  for (const SupportPoint& point : enumerate_support(prior, support_cap)) {
    if (!consistent(point.states, psi)) continue;
    const PartialRealization extended = psi.with({item, point.states.at(item)});
    mass += point.probability;
    total += point.probability * (objective.value(extended, point.states) -
                                  objective.value(psi, point.states));
  }
  if (mass <= 0.0) {
    throw Error(ErrorCode::kInconsistentObservation,
                "observations have zero prior mass");
  }
  return total / mass;
}

MarginalBenefit marginal(const Objective& objective, ItemId item,
                         const PartialRealization& psi, const Prior& prior,
                         const ExpectationOptions& options) {
  if (item >= prior.item_count()) {
    throw Error(ErrorCode::kInvalidArgument, "unknown item " + std::to_string(item));
  }
  if (psi.contains(item)) {
    throw Error(ErrorCode::kAlreadySelected,
                "item " + std::to_string(item) + " already selected");
  }
  MarginalBenefit out{item, 0.0, psi.size()};

  if (options.backend == Backend::kEnumerate) {
    if (objective.has_observable_increments()) {
      const std::vector<double> dist = state_distribution(prior, psi, item);
      for (StateId s = 0; s < dist.size(); ++s) {
        if (dist[s] > 0.0) out.value += dist[s] * objective.increment(psi, {item, s});
      }
      return out;
    }
    if (prior_enumerable(prior, options.support_cap)) {
      out.value = marginal_by_enumeration(objective, item, psi, prior,
                                          options.support_cap);
      return out;
    }
  }

  require_positive_mass(prior, psi);
  // Common random numbers: every candidate at this psi sees the same draws.
  const std::uint64_t stream =
      rng::draw(options.seed, {rng::kMarginal, psi.hash()});
  double sum = 0.0;
  for (std::size_t j = 0; j < options.samples; ++j) {
    const Realization phi = sample_posterior(prior, psi, stream, j);
    const Observation next{item, phi[item]};
    sum += objective.has_observable_increments()
               ? objective.increment(psi, next)
               : objective.value(psi.with(next), phi) - objective.value(psi, phi);
  }
  out.value = options.samples ? sum / static_cast<double>(options.samples) : 0.0;
  return out;
}

bool certifies_quota(const Objective& objective, const PartialRealization& psi,
                     const Prior& prior, double quota, double support_cap) {
  if (objective.is_observable()) {
    return objective.observed_value(psi) >= quota - kQuotaTolerance;
  }
  for (const SupportPoint& point : enumerate_support(prior, support_cap)) {
    if (consistent(point.states, psi) &&
        objective.value(psi, point.states) < quota - kQuotaTolerance) {
      return false;
    }
  }
  return true;
}

double compute_f_max(const Objective& objective, const Prior& prior,
                     double support_cap) {
  double best = 0.0;
  for (const SupportPoint& point : enumerate_support(prior, support_cap)) {
    best = std::max(best, objective.value(full_observation(point.states), point.states));
  }
  return best;
}

}  // namespace adasub
