// Copyright 2026 The qittls Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qittls/error.hpp"

namespace qittls {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kIndexOutOfRange: return "index_out_of_range";
    case ErrorCode::kNonFinite: return "non_finite";
    case ErrorCode::kEmptySupport: return "empty_support";
    case ErrorCode::kNoConvergence: return "no_convergence";
    case ErrorCode::kDegenerateSketch: return "degenerate_sketch";
    case ErrorCode::kSingularSketch: return "singular_sketch";
    case ErrorCode::kRankDeficient: return "rank_deficient";
    case ErrorCode::kNongeneric: return "nongeneric";
    case ErrorCode::kGenericityViolated: return "genericity_violated";
    case ErrorCode::kTruncationTooLarge: return "truncation_too_large";
    case ErrorCode::kUnknownProblem: return "unknown_problem";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kFormat: return "format";
  }
  return "unknown";
}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace qittls
