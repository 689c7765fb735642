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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include <unistd.h>

#include "doctest.h"

#include "adasub/cli.hpp"
#include "adasub/corpus.hpp"
#include "adasub/io.hpp"

using namespace adasub;
namespace fs = std::filesystem;

namespace {

const std::string kData = ADASUB_DATA_DIR;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "adasub");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

// Per-process scratch directory, removed at exit.
struct Scratch {
  fs::path dir = fs::temp_directory_path() / ("adasub_cli_" + std::to_string(::getpid()));
  Scratch() { fs::create_directories(dir); }
  ~Scratch() {
    std::error_code ignored;
    fs::remove_all(dir, ignored);
  }
};

fs::path scratch() {
  static const Scratch s;
  return s.dir;
}

std::string write(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return p.string();
}

std::string write_instance(const std::string& name, const Instance& inst) {
  return write(name, io::instance_to_json(inst).dump(2));
}

std::string without_timing(const std::string& text) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::parse(text);
  doc.erase("timing");
  return doc.dump(2);
}

}  // namespace

TEST_CASE("run") {
  Result r = run({"run", "--instance", kData + "/sc2.json", "--maximize", "2", "--engine", "lazy"});
  REQUIRE(r.code == 0);
  auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["metrics"]["avg_value"].get<double>() == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(doc["metrics"]["evaluation_count"].get<int>() == 3);
  CHECK(doc["policy"]["label"] == "item1");

  r = run({"run", "--instance", kData + "/al3.json", "--cover", "1"});
  REQUIRE(r.code == 0);
  doc = nlohmann::json::parse(r.out);
  CHECK(std::abs(doc["metrics"]["avg_cost"].get<double>() - 5.0 / 3.0) <= 1e-12);
  CHECK(doc["metrics"]["worst_case_cost"].get<double>() == 2.0);

  r = run({"run", "--instance", kData + "/al3.json", "--cover", "1", "--format", "csv"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind(io::kCsvVersionLine, 0) == 0);

  const std::string out = (scratch() / "run.json").string();
  r = run({"run", "--instance", kData + "/sc2.json", "--maximize", "1", "--out", out});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  CHECK(nlohmann::json::parse(std::ifstream(out))["metrics"]["avg_value"] == 1.0);
}

TEST_CASE("run exit codes") {
  CHECK(run({"run", "--instance", kData + "/sc2.json", "--cover", "2"}).code == 2);
  CHECK(run({"run", "--instance", kData + "/sc2.json", "--maximize", "2", "--cover", "1"}).code == 1);
  CHECK(run({"run", "--instance", kData + "/sc2.json"}).code == 1);
  CHECK(run({"run", "--instance", kData + "/sc2.json", "--maximize", "1", "--engine", "eager"}).code == 1);
  CHECK(run({"run", "--instance", kData + "/sc2.json", "--maximize", "1", "--backend", "sample:100"}).code == 1);
  CHECK(run({"run", "--instance", kData + "/missing.json", "--maximize", "1"}).code == 1);
  CHECK(run({"run", "--instance", write("junk.json", "{ not json"), "--maximize", "1"}).code == 1);

  const Result r = run({"run", "--instance", write("bad.json", R"({"items": [{"id": 0, "states": ["on"]}],
      "objective": {"kind": "coverage", "ground": ["a"], "covers": {"0:on": ["zz"]}}})"),
                        "--maximize", "1"});
  CHECK(r.code == 1);
  CHECK(r.err.find("/objective/covers/0:on") != std::string::npos);
}

TEST_CASE("check") {
  CHECK(run({"check", "--instance", kData + "/sc2.json"}).code == 0);
  CHECK(run({"check", "--instance", kData + "/al3.json"}).code == 0);
  const Result r = run({"check", "--instance", kData + "/complementarity.json"});
  CHECK(r.code == 3);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["submodular"]["passed"] == false);
  CHECK_FALSE(doc["submodular"]["witnesses"].empty());

  const std::string huge = write_instance("huge.json", corpus::random_coverage(3, {.items = 25}));
  CHECK(run({"check", "--instance", huge}).code == 4);

  ::setenv("ADASUB_SUPPORT_CAP", "1", 1);
  CHECK(run({"check", "--instance", kData + "/sc2.json"}).code == 4);
  ::setenv("ADASUB_SUPPORT_CAP", "nonsense", 1);
  CHECK(run({"check", "--instance", kData + "/sc2.json"}).code == 1);
  ::unsetenv("ADASUB_SUPPORT_CAP");
}

TEST_CASE("oracle and bound") {
  Result r = run({"oracle", "--instance", kData + "/sc2.json", "--maximize", "2"});
  REQUIRE(r.code == 0);
  auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["oracle"]["optimum"].get<double>() == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(doc["ratio"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));

  r = run({"oracle", "--instance", kData + "/al3.json", "--cover", "1"});
  REQUIRE(r.code == 0);
  doc = nlohmann::json::parse(r.out);
  CHECK(std::abs(doc["oracle"]["optimum"].get<double>() - 5.0 / 3.0) <= 1e-12);

  const std::string big = write_instance("big20.json", corpus::random_coverage(4, {.items = 20}));
  CHECK(run({"oracle", "--instance", big, "--maximize", "2"}).code == 4);

  r = run({"bound", "--instance", kData + "/sc2.json", "--maximize", "2"});
  REQUIRE(r.code == 0);
  doc = nlohmann::json::parse(r.out);
  CHECK(doc["bound"].get<double>() == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(doc["trace"].size() == 2);

  r = run({"bound", "--instance", kData + "/sc2.json", "--maximize", "2", "--format", "csv"});
  CHECK(r.code == 0);
  CHECK(r.out.find("step,depth,current,slack,bound,k_remaining") != std::string::npos);
}

TEST_CASE("bench") {
  Result r = run({"bench", "--instance", kData + "/sc2.json", "--maximize", "2"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("sc2,k=2,0,3,3,") != std::string::npos);
  CHECK(r.out.find(",true") != std::string::npos);

  const std::string fifty = write_instance("fifty.json", corpus::random_coverage(11, {.items = 50, .ground = 30}));
  r = run({"bench", "--instance", fifty, "--maximize", "3", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["trees_equal"] == true);
  CHECK(doc["lazy_evaluations"].get<int>() < doc["naive_evaluations"].get<int>());

  CHECK(run({"bench", "--instance", kData + "/sc2.json", "--maximize", "2", "--backend", "sample:50"}).code == 1);

  // Gains grow after item 0, so stale lazy scores are not upper bounds.
  const std::string trap = write("trap.json", R"({"items": [{"id": 0, "states": ["on"]},
      {"id": 1, "states": ["on"]}, {"id": 2, "states": ["on"]}],
      "objective": {"kind": "set_function", "values": {"": 0, "0": 1, "1": 0.5, "0,1": 3,
        "2": 0.6, "0,2": 1.6, "1,2": 1.1, "0,1,2": 3.6}}})");
  CHECK(run({"bench", "--instance", trap, "--maximize", "2"}).code == 5);
}

TEST_CASE("run output is reproducible") {
  const std::string inst = write_instance("repro.json", corpus::random_coverage(21, {.items = 6}));
  for (const std::vector<std::string>& extra :
       {std::vector<std::string>{"--maximize", "3"},
        std::vector<std::string>{"--maximize", "3", "--backend", "sample:300", "--seed", "99"},
        std::vector<std::string>{"--budget", "2", "--rule", "per-cost", "--engine", "naive"}}) {
    std::vector<std::string> args{"run", "--instance", inst};
    args.insert(args.end(), extra.begin(), extra.end());
    const Result a = run(args);
    const Result b = run(args);
    REQUIRE(a.code == 0);
    CHECK(without_timing(a.out) == without_timing(b.out));
  }
}
