// Copyright 2026 The anoseg Authors.
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

#include <stdexcept>
#include <string>
#include <string_view>

namespace anoseg {

enum class ErrorCode {
  kDimensionMismatch,
  kNonFiniteScore,
  kNoPositives,
  kNoNegatives,
  kNoGroundTruthComponents,
  kTooFewComponents,
  kEmptySubset,
  kUnknownImage,
  kIoError,
  kBadEncoding,
  kUnsupportedFormat,
  kHeaderMismatch,
  kInvalidConfig,
  kUnsatisfiableSpec,
  kBadManifest,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNonFiniteScore: return "NonFiniteScore";
    case ErrorCode::kNoPositives: return "NoPositives";
    case ErrorCode::kNoNegatives: return "NoNegatives";
    case ErrorCode::kNoGroundTruthComponents: return "NoGroundTruthComponents";
    case ErrorCode::kTooFewComponents: return "TooFewComponents";
    case ErrorCode::kEmptySubset: return "EmptySubset";
    case ErrorCode::kUnknownImage: return "UnknownImage";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kBadEncoding: return "BadEncoding";
    case ErrorCode::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::kHeaderMismatch: return "HeaderMismatch";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kUnsatisfiableSpec: return "UnsatisfiableSpec";
    case ErrorCode::kBadManifest: return "BadManifest";
  }
  return "Unknown";
}

// All library failures are reported through this exception. The code is
// stable; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace anoseg
