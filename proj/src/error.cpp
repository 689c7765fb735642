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

#include "adasub/error.hpp"

namespace adasub {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInconsistentObservation: return "InconsistentObservation";
    case ErrorCode::kSupportTooLarge: return "SupportTooLarge";
    case ErrorCode::kAlreadySelected: return "AlreadySelected";
    case ErrorCode::kExhausted: return "Exhausted";
    case ErrorCode::kInfeasibleQuota: return "InfeasibleQuota";
    case ErrorCode::kMalformedPolicy: return "MalformedPolicy";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kParse: return "Parse";
  }
  return "Unknown";
}

}  // namespace adasub
