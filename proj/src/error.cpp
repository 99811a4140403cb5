/*
 * Copyright 2026 The jointrank Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "jointrank/error.hpp"

#include <utility>

namespace jointrank {

namespace {

std::string compose(ErrorCode code, const std::string& message,
                    const std::string& stage) {
  std::string out;
  if (!stage.empty()) {
    out += "[";
    out += stage;
    out += "] ";
  }
  out += to_string(code);
  out += ": ";
  out += message;
  return out;
}

}  // namespace

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput:
      return "InvalidInput";
    case ErrorCode::kNumericalFailure:
      return "NumericalFailure";
    case ErrorCode::kZeroMargin:
      return "ZeroMargin";
    case ErrorCode::kParseError:
      return "ParseError";
    case ErrorCode::kFormatError:
      return "FormatError";
    case ErrorCode::kValueError:
      return "ValueError";
    case ErrorCode::kInvalidPartition:
      return "InvalidPartition";
    case ErrorCode::kConstantColumn:
      return "ConstantColumn";
    case ErrorCode::kNoCommonCases:
      return "NoCommonCases";
    case ErrorCode::kConfigError:
      return "ConfigError";
    case ErrorCode::kIoError:
      return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> index)
    : std::runtime_error(compose(code, message, {})),
      code_(code),
      index_(index),
      detail_(message) {}

Error Error::with_stage(std::string stage) const {
  Error tagged(code_, detail_, index_);
  static_cast<std::runtime_error&>(tagged) =
      std::runtime_error(compose(code_, detail_, stage));
  tagged.stage_ = std::move(stage);
  return tagged;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfigError:
      return 2;
    case ErrorCode::kNumericalFailure:
      return 4;
    default:
      return 3;
  }
}

}  // namespace jointrank
