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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "adasub/greedy.hpp"
#include "adasub/objectives.hpp"

namespace adasub::cli {

// Exit statuses shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kMalformedInput = 1,
  kInfeasibleQuota = 2,
  kCheckFailed = 3,
  kTooLarge = 4,
  kTreeMismatch = 5,
};

struct RunConfig {
  std::string subcommand;
  std::string instance_path;
  Engine engine = Engine::kLazy;
  SelectionRule rule = SelectionRule::kBenefit;
  std::optional<StoppingRule> stop;
  Backend backend = Backend::kEnumerate;
  std::size_t samples = 10000;
  std::optional<std::uint64_t> seed;
  std::string out_path;  // empty: stdout
  std::string format = "json";
};

// Parses argv into a config; throws Error(kInvalidArgument) on bad flags.
RunConfig parse_args(int argc, const char* const* argv);

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_check(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_oracle(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_bound(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_bench(const RunConfig& config, std::ostream& out, std::ostream& err);

// Entry point: parse, dispatch, map errors onto exit codes. Output goes to
// --out when given, `out` otherwise; diagnostics go to `err`.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace adasub::cli
