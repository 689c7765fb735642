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

#include "adasub/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "adasub/error.hpp"
#include "adasub/rng.hpp"

namespace adasub {

namespace {

void check_sums_to_one(double total, const std::string& what) {
  if (std::abs(total - 1.0) > kProbabilityTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << what << " probabilities sum to " << total << ", expected 1";
    throw Error(ErrorCode::kInvalidArgument, msg.str());
  }
}

void check_observations(const Prior& prior, const PartialRealization& psi) {
  for (const Observation& obs : psi.observations()) {
    if (obs.item >= prior.item_count()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "observation references unknown item " +
                      std::to_string(obs.item));
    }
    if (obs.state >= prior.state_count(obs.item)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "observation assigns unknown state " +
                      std::to_string(obs.state) + " to item " +
                      std::to_string(obs.item));
    }
  }
}

[[noreturn]] void throw_inconsistent(const PartialRealization& psi) {
  std::ostringstream msg;
  msg << "observations have zero prior mass:";
  for (const Observation& obs : psi.observations()) {
    msg << " (" << obs.item << "," << obs.state << ")";
  }
  throw Error(ErrorCode::kInconsistentObservation, msg.str());
}

StateId draw_categorical(std::span<const double> probabilities, double u) {
  double acc = 0.0;
  StateId last_positive = 0;
  for (StateId s = 0; s < probabilities.size(); ++s) {
    if (probabilities[s] <= 0.0) continue;
    last_positive = s;
    acc += probabilities[s];
    if (u < acc) return s;
  }
  return last_positive;
}

}  // namespace

PartialRealization::PartialRealization(std::vector<Observation> observations)
    : observations_(std::move(observations)) {
  for (std::size_t i = 0; i < observations_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (observations_[i].item == observations_[j].item) {
        throw Error(ErrorCode::kAlreadySelected,
                    "item " + std::to_string(observations_[i].item) +
                        " observed twice");
      }
    }
  }
}

bool PartialRealization::contains(ItemId item) const {
  return std::any_of(observations_.begin(), observations_.end(),
                     [item](const Observation& o) { return o.item == item; });
}

std::optional<StateId> PartialRealization::state_of(ItemId item) const {
  for (const Observation& o : observations_) {
    if (o.item == item) return o.state;
  }
  return std::nullopt;
}

PartialRealization PartialRealization::with(Observation next) const {
  if (contains(next.item)) {
    throw Error(ErrorCode::kAlreadySelected,
                "item " + std::to_string(next.item) + " already selected");
  }
  PartialRealization out = *this;
  out.observations_.push_back(next);
  return out;
}

PartialRealization PartialRealization::prefix(std::size_t count) const {
  PartialRealization out;
  count = std::min(count, observations_.size());
  out.observations_.assign(observations_.begin(),
                           observations_.begin() + static_cast<std::ptrdiff_t>(count));
  return out;
}

PartialRealization PartialRealization::canonical() const {
  PartialRealization out = *this;
  std::sort(out.observations_.begin(), out.observations_.end());
  return out;
}

bool PartialRealization::is_subset_of(const PartialRealization& other) const {
  return std::all_of(observations_.begin(), observations_.end(),
                     [&other](const Observation& o) {
                       return other.state_of(o.item) == o.state;
                     });
}

std::uint64_t PartialRealization::hash() const {
  // Sum of per-observation mixes is order-insensitive.
  std::uint64_t h = rng::mix(observations_.size());
  for (const Observation& o : observations_) {
    h += rng::mix((static_cast<std::uint64_t>(o.item) << 32) | o.state);
  }
  return rng::mix(h);
}

Prior Prior::tabular(std::vector<StateId> state_counts,
                     std::vector<SupportPoint> support) {
  Prior prior;
  prior.kind_ = Kind::kTabular;
  prior.state_counts_ = std::move(state_counts);
  for (StateId count : prior.state_counts_) {
    if (count == 0) {
      throw Error(ErrorCode::kInvalidArgument, "every item needs a state");
    }
  }
  double total = 0.0;
  for (SupportPoint& point : support) {
    if (point.probability < 0.0 || !std::isfinite(point.probability)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "support probabilities must be non-negative");
    }
    if (point.probability == 0.0) continue;
    if (point.states.size() != prior.state_counts_.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "realization does not assign every item");
    }
    for (std::size_t i = 0; i < point.states.size(); ++i) {
      if (point.states[i] >= prior.state_counts_[i]) {
        throw Error(ErrorCode::kInvalidArgument,
                    "realization assigns unknown state to item " +
                        std::to_string(i));
      }
    }
    total += point.probability;
    prior.support_.push_back(std::move(point));
  }
  if (prior.support_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "tabular prior has empty support");
  }
  check_sums_to_one(total, "tabular prior");
  return prior;
}

Prior Prior::independent(std::vector<std::vector<double>> factors) {
  Prior prior;
  prior.kind_ = Kind::kIndependent;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const auto& factor = factors[i];
    if (factor.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "every item needs a state");
    }
    double total = 0.0;
    for (double p : factor) {
      if (p < 0.0 || !std::isfinite(p)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "state probabilities must be non-negative");
      }
      total += p;
    }
    check_sums_to_one(total, "item " + std::to_string(i));
    prior.state_counts_.push_back(static_cast<StateId>(factor.size()));
  }
  prior.factors_ = std::move(factors);
  return prior;
}

Prior Prior::point_mass(std::vector<StateId> state_counts, Realization states) {
  return tabular(std::move(state_counts), {{std::move(states), 1.0}});
}

double Prior::support_size() const {
  if (kind_ == Kind::kTabular) return static_cast<double>(support_.size());
  double size = 1.0;
  for (const auto& factor : factors_) {
    size *= static_cast<double>(
        std::count_if(factor.begin(), factor.end(), [](double p) { return p > 0.0; }));
  }
  return size;
}

bool consistent(const Realization& phi, const PartialRealization& psi) {
  for (const Observation& o : psi.observations()) {
    if (o.item >= phi.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "observation references unknown item " + std::to_string(o.item));
    }
    if (phi[o.item] != o.state) return false;
  }
  return true;
}

double posterior_mass(const Prior& prior, const PartialRealization& psi) {
  check_observations(prior, psi);
  if (prior.kind() == Prior::Kind::kTabular) {
    double mass = 0.0;
    for (const SupportPoint& point : prior.support()) {
      if (consistent(point.states, psi)) mass += point.probability;
    }
    return mass;
  }
  double mass = 1.0;
  for (const Observation& o : psi.observations()) {
    mass *= prior.factor(o.item)[o.state];
  }
  return mass;
}

Prior condition(const Prior& prior, const PartialRealization& psi) {
  check_observations(prior, psi);
  if (psi.empty()) return prior;
  if (prior.kind() == Prior::Kind::kTabular) {
    std::vector<SupportPoint> kept;
    double mass = 0.0;
    for (const SupportPoint& point : prior.support()) {
      if (consistent(point.states, psi)) {
        kept.push_back(point);
        mass += point.probability;
      }
    }
    if (mass <= 0.0) throw_inconsistent(psi);
    // Nothing filtered: keep the prior bit-for-bit so conditioning twice on
    // the same observations is exactly idempotent.
    if (kept.size() == prior.support().size()) return prior;
    for (SupportPoint& point : kept) point.probability /= mass;
    return Prior::tabular({prior.state_counts().begin(), prior.state_counts().end()},
                   std::move(kept));
  }
  std::vector<std::vector<double>> factors;
  factors.reserve(prior.item_count());
  for (ItemId i = 0; i < prior.item_count(); ++i) {
    auto f = prior.factor(i);
    factors.emplace_back(f.begin(), f.end());
  }
  for (const Observation& o : psi.observations()) {
    if (factors[o.item][o.state] <= 0.0) throw_inconsistent(psi);
    std::fill(factors[o.item].begin(), factors[o.item].end(), 0.0);
    factors[o.item][o.state] = 1.0;
  }
  return Prior::independent(std::move(factors));
}

std::vector<double> state_distribution(const Prior& prior,
                                       const PartialRealization& psi,
                                       ItemId item) {
  check_observations(prior, psi);
  if (item >= prior.item_count()) {
    throw Error(ErrorCode::kInvalidArgument,
                "unknown item " + std::to_string(item));
  }
  std::vector<double> dist(prior.state_count(item), 0.0);
  if (auto observed = psi.state_of(item)) {
    if (posterior_mass(prior, psi) <= 0.0) throw_inconsistent(psi);
    dist[*observed] = 1.0;
    return dist;
  }
  if (prior.kind() == Prior::Kind::kTabular) {
    double mass = 0.0;
    for (const SupportPoint& point : prior.support()) {
      if (!consistent(point.states, psi)) continue;
      dist[point.states[item]] += point.probability;
      mass += point.probability;
    }
    if (mass <= 0.0) throw_inconsistent(psi);
    for (double& p : dist) p /= mass;
    return dist;
  }
  for (const Observation& o : psi.observations()) {
    if (prior.factor(o.item)[o.state] <= 0.0) throw_inconsistent(psi);
  }
  auto f = prior.factor(item);
  dist.assign(f.begin(), f.end());
  return dist;
}

std::vector<SupportPoint> enumerate_support(const Prior& prior, double cap) {
  if (prior.kind() == Prior::Kind::kTabular) {
    return {prior.support().begin(), prior.support().end()};
  }
  if (prior.support_size() > cap) {
    std::ostringstream msg;
    msg << "independent prior has " << prior.support_size()
        << " realizations, cap is " << cap;
    throw Error(ErrorCode::kSupportTooLarge, msg.str());
  }
  // Odometer over positive-probability states, item 0 varying slowest.
  const std::size_t n = prior.item_count();
  std::vector<std::vector<StateId>> positive(n);
  for (ItemId i = 0; i < n; ++i) {
    auto f = prior.factor(i);
    for (StateId s = 0; s < f.size(); ++s) {
      if (f[s] > 0.0) positive[i].push_back(s);
    }
  }
  std::vector<SupportPoint> out;
  out.reserve(static_cast<std::size_t>(prior.support_size()));
  std::vector<std::size_t> digits(n, 0);
  while (true) {
    SupportPoint point;
    point.states.resize(n);
    point.probability = 1.0;
    for (ItemId i = 0; i < n; ++i) {
      point.states[i] = positive[i][digits[i]];
      point.probability *= prior.factor(i)[point.states[i]];
    }
    out.push_back(std::move(point));
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      if (++digits[pos] < positive[pos].size()) break;
      digits[pos] = 0;
      if (pos == 0) return out;
    }
    if (n == 0) return out;
  }
}

Realization sample(const Prior& prior, std::uint64_t seed,
                   std::uint64_t draw_index) {
  return sample_posterior(prior, PartialRealization{}, seed, draw_index);
}

Realization sample_posterior(const Prior& prior, const PartialRealization& psi,
                             std::uint64_t seed, std::uint64_t draw_index) {
  check_observations(prior, psi);
  const std::size_t n = prior.item_count();
  if (prior.kind() == Prior::Kind::kTabular) {
    const double mass = posterior_mass(prior, psi);
    if (mass <= 0.0) throw_inconsistent(psi);
    const double u =
        rng::uniform(seed, {rng::kPriorSample, draw_index}) * mass;
    double acc = 0.0;
    const SupportPoint* chosen = nullptr;
    for (const SupportPoint& point : prior.support()) {
      if (!consistent(point.states, psi)) continue;
      chosen = &point;
      acc += point.probability;
      if (u < acc) break;
    }
    return chosen->states;
  }
  Realization phi(n);
  for (ItemId i = 0; i < n; ++i) {
    if (auto observed = psi.state_of(i)) {
      if (prior.factor(i)[*observed] <= 0.0) throw_inconsistent(psi);
      phi[i] = *observed;
      continue;
    }
    phi[i] = draw_categorical(
        prior.factor(i), rng::uniform(seed, {rng::kPriorSample, draw_index, i}));
  }
  return phi;
}

}  // namespace adasub
