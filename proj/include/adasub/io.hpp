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

// Instance files, policy and report serialization.
//
// Instance JSON:
//   { "name": str?, "f_max": real?,
//     "items": [{"id": int, "cost": real, "states": [str], "label": str?}],
//     "prior": {"kind": "tabular",
//               "support": [{"states": {itemId: stateName}, "p": real}]}
//            | {"kind": "independent", "factors": {itemId: {stateName: real}}},
//     "objective": {"kind": "coverage", "ground": [..],
//                   "covers": {"item:state": [element]}, "weights": {..}}
//                | {"kind": "cascade", "nodes": [int],
//                   "edges": [{"from": int, "to": int, "p": real}]}
//                | {"kind": "version_space", "hypotheses": {name: real},
//                   "answers": {queryId: {hypothesis: stateName}}}
//                | {"kind": "set_function", "values": {"0,2": real, ...}} }
//
// Cascade and version-space instances derive their prior from the objective;
// cascade instances also derive item states. Set-function instances default
// to a point-mass prior.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "adasub/bounds.hpp"
#include "adasub/greedy.hpp"
#include "adasub/instance.hpp"
#include "adasub/verify.hpp"

namespace adasub::io {

using Json = nlohmann::ordered_json;

// Throws Error(kParse) whose message starts with the JSON pointer of the
// offending field.
Instance parse_instance(const nlohmann::json& document, std::string name = "");
Instance load_instance(const std::string& path);

// Coverage and set-function objectives only.
Json instance_to_json(const Instance& instance);

Json policy_to_json(const PolicyTree& policy, const Instance& instance);
// Inverse of policy_to_json; throws kMalformedPolicy on unknown items/states.
PolicyTree policy_from_json(const nlohmann::json& document, const Instance& instance);

Json partial_to_json(const PartialRealization& psi, const Instance& instance);
Json metrics_to_json(const PolicyMetrics& metrics);
Json check_report_to_json(const CheckReport& report, const Instance& instance);
Json oracle_result_to_json(const OracleResult& result, const Instance& instance);
Json certificate_to_json(const BoundCertificate& cert, const Instance& instance);

inline constexpr const char* kCsvVersionLine = "# adasub-csv v1";

struct RunRow {
  std::string instance;
  std::string engine;
  std::string rule;
  std::string stop;  // "k=2", "Q=1", "B=3", "minsum=1"
  PolicyMetrics metrics;
  double wall_ms = 0.0;
  std::uint64_t seed = 0;
};

std::string run_csv_header();
std::string run_csv_row(const RunRow& row);

std::string certificates_csv(const std::vector<BoundCertificate>& certs);

std::string format_number(double value);

}  // namespace adasub::io
