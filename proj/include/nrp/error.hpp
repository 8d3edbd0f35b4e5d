// Copyright 2026 The NRP Authors.
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

#ifndef NRP_ERROR_HPP_
#define NRP_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace nrp {

enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kZeroNormInput,
  kRankDeficient,
  kNotSymmetric,
  kNonPositiveInput,
  kInfeasibleBound,
  kGammaOutOfRange,
  kNonPositiveResult,
  kDegenerateMatrix,
  kSingularSample,
  kInsufficientData,
  kInsufficientPoints,
  kEmptyDataset,
  kConfigInvalid,
  kFileNotFound,
  kSchemaMismatch,
  kParseError,
  kIoError,
};

constexpr std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kZeroNormInput: return "ZeroNormInput";
    case ErrorCode::kRankDeficient: return "RankDeficient";
    case ErrorCode::kNotSymmetric: return "NotSymmetric";
    case ErrorCode::kNonPositiveInput: return "NonPositiveInput";
    case ErrorCode::kInfeasibleBound: return "InfeasibleBound";
    case ErrorCode::kGammaOutOfRange: return "GammaOutOfRange";
    case ErrorCode::kNonPositiveResult: return "NonPositiveResult";
    case ErrorCode::kDegenerateMatrix: return "DegenerateMatrix";
    case ErrorCode::kSingularSample: return "SingularSample";
    case ErrorCode::kInsufficientData: return "InsufficientData";
    case ErrorCode::kInsufficientPoints: return "InsufficientPoints";
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kConfigInvalid: return "ConfigInvalid";
    case ErrorCode::kFileNotFound: return "FileNotFound";
    case ErrorCode::kSchemaMismatch: return "SchemaMismatch";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Cell-level CSV failure; row is 1-based and counts the header as row 1.
class ParseError : public Error {
 public:
  ParseError(std::size_t row, std::string column, const std::string& detail)
      : Error(ErrorCode::kParseError, "row " + std::to_string(row) +
                                          ", column '" + column + "': " + detail),
        row_(row),
        column_(std::move(column)) {}

  std::size_t row() const noexcept { return row_; }
  const std::string& column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::string column_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace nrp

#endif  // NRP_ERROR_HPP_
