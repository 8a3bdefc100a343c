// Copyright 2026 The qembed Authors
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

namespace qembed {

enum class ErrorCode {
  // qsim
  QubitCapExceeded,
  NonFiniteAngle,
  IndexOutOfRange,
  DuplicateQubitIndex,
  NotNormalized,
  // encoding
  NonBinaryInput,
  EmptyInput,
  NonAsciiCharacter,
  LengthMismatch,
  DuplicateString,
  OutOfRangeFeature,
  ZeroVector,
  NonFiniteInput,
  MissingQuantizer,
  UnsupportedScheme,
  // pipeline
  MissingColumn,
  UnparsableCell,
  EmptyFile,
  ZeroVariance,
  UnknownColumn,
  SingleClass,
  TooFewComponents,
  ClassTooSmall,
  // models
  NonFiniteFeature,
  DimensionMismatch,
  // bench
  EmptyResults,
  ConfigError,
  IoError,
  InvalidArgument,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::QubitCapExceeded: return "QubitCapExceeded";
    case ErrorCode::NonFiniteAngle: return "NonFiniteAngle";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DuplicateQubitIndex: return "DuplicateQubitIndex";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::NonBinaryInput: return "NonBinaryInput";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NonAsciiCharacter: return "NonAsciiCharacter";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::DuplicateString: return "DuplicateString";
    case ErrorCode::OutOfRangeFeature: return "OutOfRangeFeature";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::MissingQuantizer: return "MissingQuantizer";
    case ErrorCode::UnsupportedScheme: return "UnsupportedScheme";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::UnparsableCell: return "UnparsableCell";
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::UnknownColumn: return "UnknownColumn";
    case ErrorCode::SingleClass: return "SingleClass";
    case ErrorCode::TooFewComponents: return "TooFewComponents";
    case ErrorCode::ClassTooSmall: return "ClassTooSmall";
    case ErrorCode::NonFiniteFeature: return "NonFiniteFeature";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyResults: return "EmptyResults";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every failure raised by the library. The code is stable and meant for
/// programmatic handling; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace qembed
