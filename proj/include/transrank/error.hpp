// Copyright 2026 The transrank Authors
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

#ifndef TRANSRANK_ERROR_HPP_
#define TRANSRANK_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace transrank {

// Machine-readable failure categories. The CLI prints these as the
// `error[<code>]` prefix on the diagnostic stream.
enum class ErrorCode {
  kInvalidArgument,
  kNoComparisons,
  kIndexOutOfRange,
  kDuplicateObject,
  kNonFinite,
  kDimensionMismatch,
  kDisconnectedGraph,
  kRankDeficient,
  kTooFewObservations,
  kRejectionLimit,
  kParse,
  kIo,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kNoComparisons: return "no_comparisons";
    case ErrorCode::kIndexOutOfRange: return "index_out_of_range";
    case ErrorCode::kDuplicateObject: return "duplicate_object";
    case ErrorCode::kNonFinite: return "non_finite";
    case ErrorCode::kDimensionMismatch: return "dimension_mismatch";
    case ErrorCode::kDisconnectedGraph: return "disconnected_graph";
    case ErrorCode::kRankDeficient: return "rank_deficient";
    case ErrorCode::kTooFewObservations: return "too_few_observations";
    case ErrorCode::kRejectionLimit: return "rejection_limit";
    case ErrorCode::kParse: return "parse_error";
    case ErrorCode::kIo: return "io_error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace transrank

#endif  // TRANSRANK_ERROR_HPP_
