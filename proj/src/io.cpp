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

#include "adasub/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "adasub/error.hpp"

namespace adasub::io {

namespace {

using nlohmann::json;

std::string escape_pointer(std::string_view token) {
  std::string out;
  for (char c : token) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

// A JSON value together with its pointer, so every diagnostic names the
// field it is about.
class Field {
 public:
  Field(const json& value, std::string path) : value_(&value), path_(std::move(path)) {}

  const json& raw() const { return *value_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& message) const {
    throw Error(ErrorCode::kParse, (path_.empty() ? "/" : path_) + ": " + message);
  }

  bool has(std::string_view key) const {
    return value_->is_object() && value_->contains(key);
  }

  Field at(std::string_view key) const {
    expect_object();
    auto it = value_->find(key);
    if (it == value_->end()) {
      Field(*value_, path_ + "/" + escape_pointer(key)).fail("missing required field");
    }
    return Field(*it, path_ + "/" + escape_pointer(key));
  }

  std::optional<Field> find(std::string_view key) const {
    if (!has(key)) return std::nullopt;
    return at(key);
  }

  Field at(std::size_t index) const {
    return Field((*value_)[index], path_ + "/" + std::to_string(index));
  }

  void expect_object() const {
    if (!value_->is_object()) fail("expected an object");
  }
  std::size_t array_size() const {
    if (!value_->is_array()) fail("expected an array");
    return value_->size();
  }

  template <typename Fn>
  void for_each_member(Fn&& fn) const {
    expect_object();
    for (auto it = value_->begin(); it != value_->end(); ++it) {
      fn(it.key(), Field(it.value(), path_ + "/" + escape_pointer(it.key())));
    }
  }

  double number() const {
    if (!value_->is_number()) fail("expected a number");
    const double v = value_->get<double>();
    if (!std::isfinite(v)) fail("expected a finite number");
    return v;
  }

  std::int64_t integer() const {
    if (!value_->is_number_integer()) fail("expected an integer");
    return value_->get<std::int64_t>();
  }

  std::string string() const {
    if (!value_->is_string()) fail("expected a string");
    return value_->get<std::string>();
  }

  // Strings as-is, integers in decimal.
  std::string name() const {
    if (value_->is_string()) return value_->get<std::string>();
    if (value_->is_number_integer()) return std::to_string(value_->get<std::int64_t>());
    fail("expected a string or integer name");
  }

 private:
  const json* value_;
  std::string path_;
};

std::optional<ItemId> parse_item_id(std::string_view text, std::size_t item_count) {
  ItemId id = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), id);
  if (ec != std::errc() || ptr != text.data() + text.size() || id >= item_count) {
    return std::nullopt;
  }
  return id;
}

struct ItemTable {
  std::vector<Item> items;
  std::vector<std::vector<std::string>> states;
};

ItemTable parse_items(const Field& field, bool with_states) {
  const std::size_t n = field.array_size();
  ItemTable table;
  table.items.resize(n);
  table.states.resize(n);
  std::vector<bool> seen(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const Field entry = field.at(i);
    const Field id_field = entry.at("id");
    const std::int64_t id = id_field.integer();
    if (id < 0 || static_cast<std::size_t>(id) >= n) {
      id_field.fail("item ids must be dense 0.." + std::to_string(n - 1));
    }
    if (seen[id]) id_field.fail("duplicate item id " + std::to_string(id));
    seen[id] = true;
    Item item;
    item.id = static_cast<ItemId>(id);
    if (auto cost = entry.find("cost")) {
      item.cost = cost->number();
      if (!(item.cost > 0.0)) cost->fail("cost must be positive");
    }
    item.label = entry.has("label") ? entry.at("label").string() : "item" + std::to_string(id);
    if (with_states) {
      const Field states = entry.at("states");
      const std::size_t count = states.array_size();
      if (count == 0) states.fail("every item needs at least one state");
      for (std::size_t s = 0; s < count; ++s) {
        std::string name = states.at(s).string();
        if (std::find(table.states[id].begin(), table.states[id].end(), name) !=
            table.states[id].end()) {
          states.at(s).fail("duplicate state name '" + name + "'");
        }
        table.states[id].push_back(std::move(name));
      }
    } else if (entry.has("states")) {
      entry.at("states").fail("states are derived for this objective kind");
    }
    table.items[id] = std::move(item);
  }
  return table;
}

StateId lookup_state(const ItemTable& table, ItemId item, const Field& name_field) {
  const std::string name = name_field.string();
  const auto& names = table.states[item];
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) {
    name_field.fail("item " + std::to_string(item) + " has no state '" + name + "'");
  }
  return static_cast<StateId>(it - names.begin());
}

std::vector<StateId> state_counts(const ItemTable& table) {
  std::vector<StateId> counts;
  for (const auto& names : table.states) counts.push_back(static_cast<StateId>(names.size()));
  return counts;
}

Prior parse_prior(const Field& field, const ItemTable& table) {
  const Field kind_field = field.at("kind");
  const std::string kind = kind_field.string();
  const std::size_t n = table.items.size();
  try {
    if (kind == "tabular") {
      const Field support = field.at("support");
      std::vector<SupportPoint> points;
      for (std::size_t j = 0; j < support.array_size(); ++j) {
        const Field entry = support.at(j);
        SupportPoint point;
        point.states.assign(n, 0);
        std::vector<bool> assigned(n, false);
        entry.at("states").for_each_member([&](const std::string& key, const Field& value) {
          auto item = parse_item_id(key, n);
          if (!item) value.fail("unknown item id '" + key + "'");
          point.states[*item] = lookup_state(table, *item, value);
          assigned[*item] = true;
        });
        for (ItemId i = 0; i < n; ++i) {
          if (!assigned[i]) entry.at("states").fail("no state for item " + std::to_string(i));
        }
        point.probability = entry.at("p").number();
        if (point.probability < 0.0) entry.at("p").fail("probability must be non-negative");
        points.push_back(std::move(point));
      }
      return Prior::tabular(state_counts(table), std::move(points));
    }
    if (kind == "independent") {
      const Field factors = field.at("factors");
      std::vector<std::vector<double>> probs(n);
      for (ItemId i = 0; i < n; ++i) probs[i].assign(table.states[i].size(), 0.0);
      std::vector<bool> assigned(n, false);
      factors.for_each_member([&](const std::string& key, const Field& value) {
        auto item = parse_item_id(key, n);
        if (!item) value.fail("unknown item id '" + key + "'");
        assigned[*item] = true;
        value.for_each_member([&](const std::string& state, const Field& p) {
          const auto& names = table.states[*item];
          auto it = std::find(names.begin(), names.end(), state);
          if (it == names.end()) p.fail("item " + key + " has no state '" + state + "'");
          probs[*item][it - names.begin()] = p.number();
        });
      });
      for (ItemId i = 0; i < n; ++i) {
        if (!assigned[i]) factors.fail("no factor for item " + std::to_string(i));
      }
      return Prior::independent(std::move(probs));
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParse) throw;
    field.fail(e.what());
  }
  kind_field.fail("unknown prior kind '" + kind + "'");
}

template <typename Fn>
auto rethrow_at(const Field& field, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParse) throw;
    field.fail(e.what());
  }
}

}  // namespace

Instance parse_instance(const json& document, std::string name) {
  const Field root(document, "");
  root.expect_object();
  if (auto n = root.find("name")) name = n->string();
  std::optional<double> f_max;
  if (auto f = root.find("f_max")) f_max = f->number();

  const Field objective = root.at("objective");
  const Field kind_field = objective.at("kind");
  const std::string kind = kind_field.string();

  if (kind == "cascade") {
    const Field nodes = objective.at("nodes");
    const std::size_t n = nodes.array_size();
    for (std::size_t i = 0; i < n; ++i) {
      if (nodes.at(i).integer() != static_cast<std::int64_t>(i)) {
        nodes.at(i).fail("nodes must be listed as item ids 0..n-1 in order");
      }
    }
    std::vector<CascadeEdge> edges;
    const Field edge_list = objective.at("edges");
    for (std::size_t k = 0; k < edge_list.array_size(); ++k) {
      const Field edge = edge_list.at(k);
      CascadeEdge e;
      const auto node_id = [n](const Field& f) {
        const std::int64_t v = f.integer();
        if (v < 0 || static_cast<std::size_t>(v) >= n) f.fail("unknown node");
        return static_cast<ItemId>(v);
      };
      e.from = node_id(edge.at("from"));
      e.to = node_id(edge.at("to"));
      e.probability = edge.at("p").number();
      if (e.probability < 0.0 || e.probability > 1.0) edge.at("p").fail("must lie in [0, 1]");
      edges.push_back(e);
    }
    if (root.has("prior")) root.at("prior").fail("cascade priors are derived from edges");
    std::vector<Item> items;
    if (auto item_field = root.find("items")) {
      ItemTable table = parse_items(*item_field, false);
      if (table.items.size() != n) item_field->fail("cascade needs one item per node");
      items = std::move(table.items);
    } else {
      items = unit_items(n);
    }
    CascadeModel model = rethrow_at(objective, [&] { return make_cascade(n, edges); });
    return make_instance(std::move(name), std::move(items), std::move(model.state_names),
                         std::move(model.prior), model.objective, f_max);
  }

  const ItemTable table = parse_items(root.at("items"), true);
  const std::size_t n = table.items.size();

  ObjectivePtr parsed;
  std::optional<Prior> derived_prior;
  if (kind == "coverage") {
    const Field ground_field = objective.at("ground");
    std::vector<std::string> ground;
    std::map<std::string, std::size_t> index;
    for (std::size_t g = 0; g < ground_field.array_size(); ++g) {
      std::string element = ground_field.at(g).name();
      if (!index.emplace(element, g).second) ground_field.at(g).fail("duplicate element");
      ground.push_back(std::move(element));
    }
    std::vector<std::vector<std::vector<std::size_t>>> covers(n);
    for (ItemId i = 0; i < n; ++i) covers[i].resize(table.states[i].size());
    objective.at("covers").for_each_member([&](const std::string& key, const Field& value) {
      const auto colon = key.rfind(':');
      if (colon == std::string::npos) value.fail("cover keys look like \"item:state\"");
      auto item = parse_item_id(std::string_view(key).substr(0, colon), n);
      if (!item) value.fail("unknown item in cover key '" + key + "'");
      const auto& names = table.states[*item];
      auto st = std::find(names.begin(), names.end(), key.substr(colon + 1));
      if (st == names.end()) value.fail("unknown state in cover key '" + key + "'");
      auto& subset = covers[*item][st - names.begin()];
      for (std::size_t j = 0; j < value.array_size(); ++j) {
        auto it = index.find(value.at(j).name());
        if (it == index.end()) value.at(j).fail("element not in ground set");
        subset.push_back(it->second);
      }
    });
    std::vector<double> weights(ground.size(), 1.0);
    if (auto w = objective.find("weights")) {
      w->for_each_member([&](const std::string& key, const Field& value) {
        auto it = index.find(key);
        if (it == index.end()) value.fail("element not in ground set");
        weights[it->second] = value.number();
        if (!(weights[it->second] > 0.0)) value.fail("weights must be positive");
      });
    }
    parsed = std::make_shared<const CoverageObjective>(std::move(ground), std::move(covers),
                                                       std::move(weights));
  } else if (kind == "version_space") {
    std::vector<std::string> hypotheses;
    std::vector<double> masses;
    objective.at("hypotheses").for_each_member([&](const std::string& key, const Field& value) {
      hypotheses.push_back(key);
      masses.push_back(value.number());
    });
    std::vector<std::vector<StateId>> answers(n, std::vector<StateId>(hypotheses.size(), 0));
    std::vector<bool> answered(n, false);
    const Field answer_field = objective.at("answers");
    answer_field.for_each_member([&](const std::string& key, const Field& row) {
      auto query = parse_item_id(key, n);
      if (!query) row.fail("unknown query item '" + key + "'");
      answered[*query] = true;
      for (std::size_t h = 0; h < hypotheses.size(); ++h) {
        answers[*query][h] = lookup_state(table, *query, row.at(hypotheses[h]));
      }
    });
    for (ItemId i = 0; i < n; ++i) {
      if (!answered[i]) answer_field.fail("no answers for query " + std::to_string(i));
    }
    auto vs = rethrow_at(objective, [&] {
      return std::make_shared<const VersionSpaceObjective>(hypotheses, masses, answers);
    });
    if (root.has("prior")) root.at("prior").fail("version-space priors are derived from hypotheses");
    derived_prior = vs->prior(state_counts(table));
    parsed = vs;
  } else if (kind == "set_function") {
    if (n > 20) root.at("items").fail("set_function supports at most 20 items");
    std::vector<double> values(std::size_t{1} << n, 0.0);
    std::vector<bool> given(values.size(), false);
    const Field values_field = objective.at("values");
    values_field.for_each_member([&](const std::string& key, const Field& value) {
      std::uint64_t mask = 0;
      std::stringstream parts(key);
      std::string part;
      while (!key.empty() && std::getline(parts, part, ',')) {
        auto item = parse_item_id(part, n);
        if (!item) value.fail("unknown item '" + part + "' in subset key");
        mask |= 1ULL << *item;
      }
      values[mask] = value.number();
      given[mask] = true;
    });
    for (std::size_t m = 0; m < values.size(); ++m) {
      if (!given[m]) values_field.fail("table is missing subset mask " + std::to_string(m));
    }
    parsed = rethrow_at(objective, [&] { return make_deterministic(SetFunction(n, values)); });
    if (!root.has("prior")) {
      derived_prior = Prior::point_mass(state_counts(table), Realization(n, 0));
    }
  } else {
    kind_field.fail("unknown objective kind '" + kind + "'");
  }

  Prior prior = derived_prior ? std::move(*derived_prior) : parse_prior(root.at("prior"), table);
  return rethrow_at(root, [&] {
    return make_instance(std::move(name), table.items, table.states, std::move(prior),
                         parsed, f_max);
  });
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParse, path + ": cannot open file");
  json document;
  try {
    document = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, path + ": " + e.what());
  }
  std::string stem = path;
  if (auto slash = stem.find_last_of('/'); slash != std::string::npos) stem = stem.substr(slash + 1);
  if (auto dot = stem.rfind('.'); dot != std::string::npos) stem = stem.substr(0, dot);
  return parse_instance(document, stem);
}

// ---------------------------------------------------------------------------

Json instance_to_json(const Instance& instance) {
  Json out;
  out["name"] = instance.name;
  Json items = Json::array();
  for (const Item& item : instance.items) {
    items.push_back({{"id", item.id},
                     {"cost", item.cost},
                     {"label", item.label},
                     {"states", instance.state_names[item.id]}});
  }
  out["items"] = std::move(items);

  const Prior& prior = instance.prior;
  Json prior_json;
  if (prior.kind() == Prior::Kind::kTabular) {
    prior_json["kind"] = "tabular";
    Json support = Json::array();
    for (const SupportPoint& point : prior.support()) {
      Json states;
      for (ItemId i = 0; i < point.states.size(); ++i) {
        states[std::to_string(i)] = instance.state_name(i, point.states[i]);
      }
      support.push_back({{"states", std::move(states)}, {"p", point.probability}});
    }
    prior_json["support"] = std::move(support);
  } else {
    prior_json["kind"] = "independent";
    Json factors;
    for (ItemId i = 0; i < prior.item_count(); ++i) {
      Json factor;
      auto f = prior.factor(i);
      for (StateId s = 0; s < f.size(); ++s) factor[instance.state_name(i, s)] = f[s];
      factors[std::to_string(i)] = std::move(factor);
    }
    prior_json["factors"] = std::move(factors);
  }

  Json objective;
  if (auto cov = dynamic_cast<const CoverageObjective*>(instance.objective.get());
      cov && instance.objective->kind() == "coverage") {
    objective["kind"] = "coverage";
    objective["ground"] = std::vector<std::string>(cov->ground().begin(), cov->ground().end());
    Json covers;
    for (ItemId i = 0; i < cov->item_count(); ++i) {
      for (StateId s = 0; s < cov->state_count(i); ++s) {
        Json elements = Json::array();
        for (std::size_t g : cov->covered_by(i, s)) elements.push_back(cov->ground()[g]);
        covers[std::to_string(i) + ":" + instance.state_name(i, s)] = std::move(elements);
      }
    }
    objective["covers"] = std::move(covers);
    Json weights;
    for (std::size_t g = 0; g < cov->ground().size(); ++g) {
      weights[cov->ground()[g]] = cov->weights()[g];
    }
    objective["weights"] = std::move(weights);
  } else if (auto sf = dynamic_cast<const SetFunctionObjective*>(instance.objective.get())) {
    objective["kind"] = "set_function";
    Json values;
    const SetFunction& table = sf->table();
    for (std::uint64_t mask = 0; mask < table.values().size(); ++mask) {
      std::string key;
      for (ItemId i = 0; i < table.item_count(); ++i) {
        if (mask >> i & 1ULL) key += (key.empty() ? "" : ",") + std::to_string(i);
      }
      values[key] = table(mask);
    }
    objective["values"] = std::move(values);
  } else {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(instance.objective->kind()) + " instances are not serializable");
  }
  out["prior"] = std::move(prior_json);
  out["objective"] = std::move(objective);
  if (instance.f_max) out["f_max"] = *instance.f_max;
  return out;
}

namespace {

Json node_to_json(const PolicyTree& policy, std::size_t index, const Instance& instance) {
  const PolicyNode& node = policy.node(index);
  if (!node.item) return Json{{"leaf", true}};
  Json out;
  out["item"] = *node.item;
  out["label"] = instance.items.at(*node.item).label;
  Json children = Json::object();
  for (const auto& [state, child] : node.children) {
    children[instance.state_name(*node.item, state)] = node_to_json(policy, child, instance);
  }
  out["children"] = std::move(children);
  return out;
}

void node_from_json(const json& j, PolicyTree& tree, std::size_t index,
                    const Instance& instance) {
  if (j.value("leaf", false)) return;
  if (!j.contains("item") || !j["item"].is_number_integer()) {
    throw Error(ErrorCode::kMalformedPolicy, "policy node needs an item or a leaf marker");
  }
  const auto item = j["item"].get<std::int64_t>();
  if (item < 0 || static_cast<std::size_t>(item) >= instance.item_count()) {
    throw Error(ErrorCode::kMalformedPolicy, "policy references unknown item");
  }
  tree.set_item(index, static_cast<ItemId>(item));
  if (!j.contains("children")) return;
  for (auto it = j["children"].begin(); it != j["children"].end(); ++it) {
    auto state = instance.find_state(static_cast<ItemId>(item), it.key());
    if (!state) {
      throw Error(ErrorCode::kMalformedPolicy, "unknown state '" + it.key() + "'");
    }
    const std::size_t child = tree.add_node();
    tree.add_child(index, *state, child);
    node_from_json(it.value(), tree, child, instance);
  }
}

}  // namespace

Json policy_to_json(const PolicyTree& policy, const Instance& instance) {
  return node_to_json(policy, PolicyTree::kRoot, instance);
}

PolicyTree policy_from_json(const json& document, const Instance& instance) {
  PolicyTree tree;
  node_from_json(document, tree, PolicyTree::kRoot, instance);
  return tree;
}

Json partial_to_json(const PartialRealization& psi, const Instance& instance) {
  Json out = Json::array();
  for (const Observation& o : psi.observations()) {
    out.push_back({{"item", o.item}, {"state", instance.state_name(o.item, o.state)}});
  }
  return out;
}

Json metrics_to_json(const PolicyMetrics& m) {
  Json out;
  out["avg_value"] = m.avg_value;
  out["avg_cost"] = m.avg_cost;
  out["worst_case_cost"] = m.worst_case_cost;
  out["min_sum"] = m.min_sum;
  out["evaluation_count"] = m.evaluation_count;
  if (m.sampled) {
    out["std_error"] = {{"avg_value", m.avg_value_std_error},
                        {"avg_cost", m.avg_cost_std_error},
                        {"min_sum", m.min_sum_std_error}};
  }
  return out;
}

Json check_report_to_json(const CheckReport& report, const Instance& instance) {
  Json out;
  out["property"] = report.property == CheckReport::Property::kMonotone ? "monotone" : "submodular";
  out["passed"] = report.passed;
  out["pairs_checked"] = report.pairs_checked;
  out["violations"] = report.violations;
  Json witnesses = Json::array();
  for (const Witness& w : report.witnesses) {
    witnesses.push_back({{"psi", partial_to_json(w.psi, instance)},
                         {"psi_prime", partial_to_json(w.psi_prime, instance)},
                         {"item", w.item},
                         {"delta_psi", w.delta_psi},
                         {"delta_psi_prime", w.delta_psi_prime}});
  }
  out["witnesses"] = std::move(witnesses);
  return out;
}

Json oracle_result_to_json(const OracleResult& result, const Instance& instance) {
  return Json{{"optimum", result.optimum},
              {"states_explored", result.states_explored},
              {"policy", policy_to_json(result.policy, instance)}};
}

Json certificate_to_json(const BoundCertificate& cert, const Instance& instance) {
  return Json{{"psi", partial_to_json(cert.psi, instance)},
              {"k", cert.k},
              {"current", cert.current},
              {"slack", cert.slack},
              {"bound", cert.bound},
              {"formula", cert.formula}};
}

std::string format_number(double value) {
  // Shortest round-trip representation; integral values drop the ".0".
  if (std::isfinite(value) && value == std::trunc(value) && std::abs(value) < 1e15) {
    return std::to_string(static_cast<long long>(value));
  }
  return Json(value).dump();
}

std::string run_csv_header() {
  return "instance,engine,rule,stop,avg_value,avg_cost,worst_case_cost,min_sum,"
         "evaluations,wall_ms,seed";
}

std::string run_csv_row(const RunRow& row) {
  std::ostringstream out;
  out << row.instance << ',' << row.engine << ',' << row.rule << ',' << row.stop << ','
      << format_number(row.metrics.avg_value) << ','
      << format_number(row.metrics.avg_cost) << ','
      << format_number(row.metrics.worst_case_cost) << ','
      << format_number(row.metrics.min_sum) << ',' << row.metrics.evaluation_count << ','
      << format_number(row.wall_ms) << ',' << row.seed;
  return out.str();
}

std::string certificates_csv(const std::vector<BoundCertificate>& certs) {
  std::ostringstream out;
  out << kCsvVersionLine << "\n";
  out << "step,depth,current,slack,bound,k_remaining\n";
  for (std::size_t i = 0; i < certs.size(); ++i) {
    out << i << ',' << certs[i].psi.size() << ',' << format_number(certs[i].current) << ','
        << format_number(certs[i].slack) << ',' << format_number(certs[i].bound) << ','
        << certs[i].k << "\n";
  }
  return out.str();
}

}  // namespace adasub::io
