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

#include "adasub/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "adasub/bounds.hpp"
#include "adasub/error.hpp"
#include "adasub/io.hpp"
#include "adasub/verify.hpp"

namespace adasub::cli {

namespace {

using io::Json;

constexpr const char* kSubcommands[] = {"run", "check", "oracle", "bound", "bench"};

std::string engine_name(Engine e) { return e == Engine::kLazy ? "lazy" : "naive"; }
std::string rule_name(SelectionRule r) {
  return r == SelectionRule::kBenefit ? "benefit" : "per-cost";
}

std::string stop_label(const StoppingRule& stop) {
  switch (stop.kind) {
    case StoppingRule::Kind::kCardinality:
      return "k=" + std::to_string(static_cast<std::size_t>(stop.parameter));
    case StoppingRule::Kind::kBudget: return "B=" + io::format_number(stop.parameter);
    case StoppingRule::Kind::kQuota: return "Q=" + io::format_number(stop.parameter);
    case StoppingRule::Kind::kMinSum: return "minsum=" + io::format_number(stop.parameter);
  }
  return "";
}

Json stop_json(const StoppingRule& stop) {
  switch (stop.kind) {
    case StoppingRule::Kind::kCardinality:
      return {{"kind", "cardinality"}, {"k", static_cast<std::size_t>(stop.parameter)}};
    case StoppingRule::Kind::kBudget: return {{"kind", "budget"}, {"B", stop.parameter}};
    case StoppingRule::Kind::kQuota: return {{"kind", "quota"}, {"Q", stop.parameter}};
    case StoppingRule::Kind::kMinSum: return {{"kind", "min_sum"}, {"Q", stop.parameter}};
  }
  return {};
}

double support_cap_from_env() {
  if (const char* value = std::getenv("ADASUB_SUPPORT_CAP")) {
    char* end = nullptr;
    const double cap = std::strtod(value, &end);
    if (end == value || *end != '\0' || !(cap > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "ADASUB_SUPPORT_CAP must be a positive number");
    }
    return cap;
  }
  return kDefaultSupportCap;
}

ExpectationOptions expectation_options(const RunConfig& config) {
  ExpectationOptions options;
  options.backend = config.backend;
  options.samples = config.samples;
  options.seed = config.seed.value_or(0);
  options.support_cap = support_cap_from_env();
  return options;
}

GreedyOptions greedy_options(const RunConfig& config) {
  GreedyOptions options;
  options.engine = config.engine;
  options.rule = config.rule;
  options.expectation = expectation_options(config);
  return options;
}

const StoppingRule& require_stop(const RunConfig& config) {
  if (!config.stop) {
    throw Error(ErrorCode::kInvalidArgument,
                "one of --maximize, --cover, --budget, --minsum is required");
  }
  return *config.stop;
}

void write_json(std::ostream& out, const Json& document) { out << document.dump(2) << "\n"; }

Json header(const RunConfig& config, const Instance& instance) {
  Json out;
  out["instance"] = instance.name;
  out["command"] = config.subcommand;
  return out;
}

}  // namespace

RunConfig parse_args(int argc, const char* const* argv) {
  CLI::App app{"Adaptive greedy policies for adaptive submodular objectives", "adasub"};
  app.require_subcommand(1, 1);

  RunConfig config;
  struct Flags {
    CLI::App* sub;
    double maximize = 0, cover = 0, budget = 0, minsum = 0;
    CLI::Option *o_max, *o_cover, *o_budget, *o_minsum, *o_seed, *o_format;
    std::string engine = "lazy", rule = "benefit", backend = "enumerate";
    std::uint64_t seed = 0;
  };
  std::vector<std::unique_ptr<Flags>> flags;
  for (const char* name : kSubcommands) {
    auto f = std::make_unique<Flags>();
    f->sub = app.add_subcommand(name);
    CLI::App* sub = f->sub;
    sub->add_option("--instance", config.instance_path, "Instance JSON file")->required();
    f->o_max = sub->add_option("--maximize", f->maximize, "Cardinality constraint k");
    f->o_cover = sub->add_option("--cover", f->cover, "Coverage quota Q");
    f->o_budget = sub->add_option("--budget", f->budget, "Cost budget B");
    f->o_minsum = sub->add_option("--minsum", f->minsum, "Min-sum coverage quota Q");
    sub->add_option("--engine", f->engine, "naive|lazy");
    sub->add_option("--rule", f->rule, "benefit|per-cost");
    sub->add_option("--backend", f->backend, "enumerate|sample:N");
    f->o_seed = sub->add_option("--seed", f->seed, "64-bit seed");
    sub->add_option("--out", config.out_path, "Output file (default stdout)");
    f->o_format = sub->add_option("--format", config.format, "json|csv (bench defaults to csv)");
    flags.push_back(std::move(f));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw;
  } catch (const CLI::ParseError& e) {
    throw Error(ErrorCode::kInvalidArgument, e.what());
  }

  for (const auto& f : flags) {
    if (!f->sub->parsed()) continue;
    config.subcommand = f->sub->get_name();
    int stops = 0;
    if (f->o_max->count()) {
      ++stops;
      if (f->maximize < 1 || f->maximize != std::floor(f->maximize)) {
        throw Error(ErrorCode::kInvalidArgument, "--maximize needs an integer k >= 1");
      }
      config.stop = StoppingRule::cardinality(static_cast<std::size_t>(f->maximize));
    }
    if (f->o_cover->count()) ++stops, config.stop = StoppingRule::quota(f->cover);
    if (f->o_budget->count()) ++stops, config.stop = StoppingRule::budget(f->budget);
    if (f->o_minsum->count()) ++stops, config.stop = StoppingRule::min_sum(f->minsum);
    if (stops > 1) {
      throw Error(ErrorCode::kInvalidArgument,
                  "exactly one of --maximize, --cover, --budget, --minsum may be set");
    }
    if (f->engine == "lazy") config.engine = Engine::kLazy;
    else if (f->engine == "naive") config.engine = Engine::kNaive;
    else throw Error(ErrorCode::kInvalidArgument, "--engine must be naive or lazy");
    if (f->rule == "benefit") config.rule = SelectionRule::kBenefit;
    else if (f->rule == "per-cost") config.rule = SelectionRule::kBenefitPerCost;
    else throw Error(ErrorCode::kInvalidArgument, "--rule must be benefit or per-cost");
    if (f->backend == "enumerate") {
      config.backend = Backend::kEnumerate;
    } else if (f->backend.rfind("sample:", 0) == 0) {
      config.backend = Backend::kSample;
      const std::string count = f->backend.substr(7);
      char* end = nullptr;
      const unsigned long long n = std::strtoull(count.c_str(), &end, 10);
      if (count.empty() || *end != '\0' || n == 0) {
        throw Error(ErrorCode::kInvalidArgument, "--backend sample:N needs N >= 1");
      }
      config.samples = static_cast<std::size_t>(n);
    } else {
      throw Error(ErrorCode::kInvalidArgument, "--backend must be enumerate or sample:N");
    }
    if (f->o_seed->count()) config.seed = f->seed;
    if (config.backend == Backend::kSample && !config.seed) {
      throw Error(ErrorCode::kInvalidArgument, "--backend sample:N requires --seed");
    }
    if (config.subcommand == "bench" && !f->o_format->count()) config.format = "csv";
    if (config.format != "json" && config.format != "csv") {
      throw Error(ErrorCode::kInvalidArgument, "--format must be json or csv");
    }
  }
  return config;
}

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream&) {
  const StoppingRule& stop = require_stop(config);
  const Instance instance = io::load_instance(config.instance_path);
  const auto start = std::chrono::steady_clock::now();
  const BuiltPolicy built = build_policy(instance, stop, greedy_options(config));
  const double wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  if (config.format == "csv") {
    out << io::kCsvVersionLine << "\n" << io::run_csv_header() << "\n";
    out << io::run_csv_row({instance.name, engine_name(config.engine), rule_name(config.rule),
                            stop_label(stop), built.metrics, wall_ms, config.seed.value_or(0)})
        << "\n";
    return kOk;
  }
  Json doc = header(config, instance);
  doc["engine"] = engine_name(config.engine);
  doc["rule"] = rule_name(config.rule);
  doc["stop"] = stop_json(stop);
  doc["backend"] = config.backend == Backend::kEnumerate
                       ? std::string("enumerate")
                       : "sample:" + std::to_string(config.samples);
  doc["seed"] = config.seed.value_or(0);
  doc["metrics"] = io::metrics_to_json(built.metrics);
  doc["policy"] = io::policy_to_json(built.policy, instance);
  doc["timing"] = {{"wall_ms", wall_ms}};
  write_json(out, doc);
  return kOk;
}

int cmd_check(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const Instance instance = io::load_instance(config.instance_path);
  VerifyOptions options;
  options.support_cap = support_cap_from_env();
  const CheckReport monotone =
      check_adaptive_monotone(*instance.objective, instance.prior, options);
  const CheckReport submodular =
      check_adaptive_submodular(*instance.objective, instance.prior, options);
  if (config.format == "csv") {
    out << io::kCsvVersionLine << "\ninstance,property,passed,pairs_checked,violations\n";
    for (const CheckReport* r : {&monotone, &submodular}) {
      out << instance.name << ','
          << (r->property == CheckReport::Property::kMonotone ? "monotone" : "submodular")
          << ',' << (r->passed ? "true" : "false") << ',' << r->pairs_checked << ','
          << r->violations << "\n";
    }
  } else {
    Json doc = header(config, instance);
    doc["monotone"] = io::check_report_to_json(monotone, instance);
    doc["submodular"] = io::check_report_to_json(submodular, instance);
    write_json(out, doc);
  }
  if (monotone.passed && submodular.passed) return kOk;
  for (const CheckReport* r : {&monotone, &submodular}) {
    if (r->passed) continue;
    const Witness& w = r->witnesses.front();
    err << (r->property == CheckReport::Property::kMonotone ? "monotonicity" : "submodularity")
        << " violated: item " << w.item << ", psi=" << io::partial_to_json(w.psi, instance).dump()
        << " delta=" << w.delta_psi << ", psi'=" << io::partial_to_json(w.psi_prime, instance).dump()
        << " delta=" << w.delta_psi_prime << "\n";
  }
  return kCheckFailed;
}

int cmd_oracle(const RunConfig& config, std::ostream& out, std::ostream&) {
  const StoppingRule& stop = require_stop(config);
  const Instance instance = io::load_instance(config.instance_path);
  const OracleOptions oracle_options;
  OracleResult oracle;
  double greedy_score = 0.0;
  double ratio = 1.0;
  if (stop.kind == StoppingRule::Kind::kCardinality) {
    const std::size_t k = static_cast<std::size_t>(stop.parameter);
    oracle = oracle_max(instance, k, {}, oracle_options);
    greedy_score = build_policy(instance, stop, greedy_options(config)).metrics.avg_value;
    if (oracle.optimum > 0.0) ratio = greedy_score / oracle.optimum;
  } else if (stop.kind == StoppingRule::Kind::kQuota) {
    oracle = oracle_cover(instance, stop.parameter, oracle_options);
    greedy_score = build_policy(instance, stop, greedy_options(config)).metrics.avg_cost;
    if (oracle.optimum > 0.0) ratio = greedy_score / oracle.optimum;
  } else {
    throw Error(ErrorCode::kInvalidArgument, "oracle supports --maximize and --cover");
  }
  if (config.format == "csv") {
    out << io::kCsvVersionLine << "\ninstance,stop,optimum,greedy,ratio,states_explored\n"
        << instance.name << ',' << stop_label(stop) << ',' << io::format_number(oracle.optimum)
        << ',' << io::format_number(greedy_score) << ',' << io::format_number(ratio) << ','
        << oracle.states_explored << "\n";
    return kOk;
  }
  Json doc = header(config, instance);
  doc["stop"] = stop_json(stop);
  doc["oracle"] = io::oracle_result_to_json(oracle, instance);
  doc["greedy"] = greedy_score;
  doc["ratio"] = ratio;
  write_json(out, doc);
  return kOk;
}

int cmd_bound(const RunConfig& config, std::ostream& out, std::ostream&) {
  const StoppingRule& stop = require_stop(config);
  const Instance instance = io::load_instance(config.instance_path);
  const ExpectationOptions options = expectation_options(config);
  std::vector<BoundCertificate> trace;
  if (stop.kind == StoppingRule::Kind::kCardinality) {
    const std::size_t k = static_cast<std::size_t>(stop.parameter);
    const BuiltPolicy built = build_policy(instance, stop, greedy_options(config));
    trace = bound_trace(built.policy, instance, k, options);
  } else if (stop.kind == StoppingRule::Kind::kBudget) {
    trace.push_back(opt_upper_bound_budget(instance, {}, stop.parameter, options));
  } else {
    throw Error(ErrorCode::kInvalidArgument, "bound supports --maximize and --budget");
  }
  if (config.format == "csv") {
    out << io::certificates_csv(trace);
    return kOk;
  }
  Json doc = header(config, instance);
  doc["stop"] = stop_json(stop);
  doc["bound"] = trace.front().bound;
  Json certs = Json::array();
  for (const BoundCertificate& c : trace) certs.push_back(io::certificate_to_json(c, instance));
  doc["trace"] = std::move(certs);
  write_json(out, doc);
  return kOk;
}

int cmd_bench(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const StoppingRule& stop = require_stop(config);
  const Instance instance = io::load_instance(config.instance_path);
  const EngineComparison cmp = compare_engines(instance, stop, greedy_options(config));
  if (config.format == "json") {
    Json doc = header(config, instance);
    doc["stop"] = stop_json(stop);
    doc["seed"] = config.seed.value_or(0);
    doc["naive_evaluations"] = cmp.naive.metrics.evaluation_count;
    doc["lazy_evaluations"] = cmp.lazy.metrics.evaluation_count;
    doc["trees_equal"] = cmp.trees_equal;
    doc["timing"] = {{"naive_wall_ms", cmp.naive_wall_ms}, {"lazy_wall_ms", cmp.lazy_wall_ms}};
    write_json(out, doc);
  } else {
    out << io::kCsvVersionLine << "\n"
        << "instance,stop,seed,naive_evaluations,lazy_evaluations,naive_wall_ms,"
           "lazy_wall_ms,trees_equal\n"
        << instance.name << ',' << stop_label(stop) << ',' << config.seed.value_or(0) << ','
        << cmp.naive.metrics.evaluation_count << ',' << cmp.lazy.metrics.evaluation_count << ','
        << io::format_number(cmp.naive_wall_ms) << ',' << io::format_number(cmp.lazy_wall_ms)
        << ',' << (cmp.trees_equal ? "true" : "false") << "\n";
  }
  if (!cmp.trees_equal) {
    err << "error: naive and lazy engines built different trees\n";
    return kTreeMismatch;
  }
  return kOk;
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    config = parse_args(argc, argv);
  } catch (const CLI::CallForHelp&) {
    err << "usage: adasub {run|check|oracle|bound|bench} --instance PATH "
           "[--maximize K | --cover Q | --budget B | --minsum Q] [--engine naive|lazy] "
           "[--rule benefit|per-cost] [--backend enumerate|sample:N] [--seed U64] "
           "[--out PATH] [--format json|csv]\n";
    return kOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kMalformedInput;
  }

  std::ofstream file;
  std::ostringstream buffer;
  try {
    int code = kMalformedInput;
    if (config.subcommand == "run") code = cmd_run(config, buffer, err);
    else if (config.subcommand == "check") code = cmd_check(config, buffer, err);
    else if (config.subcommand == "oracle") code = cmd_oracle(config, buffer, err);
    else if (config.subcommand == "bound") code = cmd_bound(config, buffer, err);
    else if (config.subcommand == "bench") code = cmd_bench(config, buffer, err);
    if (config.out_path.empty()) {
      out << buffer.str();
    } else {
      file.open(config.out_path);
      if (!file) {
        err << "error: cannot write " << config.out_path << "\n";
        return kMalformedInput;
      }
      file << buffer.str();
    }
    return code;
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::kInfeasibleQuota: return kInfeasibleQuota;
      case ErrorCode::kTooLarge:
      case ErrorCode::kSupportTooLarge: return kTooLarge;
      default: return kMalformedInput;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kMalformedInput;
  }
}

}  // namespace adasub::cli
