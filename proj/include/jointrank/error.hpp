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

#ifndef JOINTRANK_ERROR_HPP
#define JOINTRANK_ERROR_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace jointrank {

enum class ErrorCode {
  kInvalidInput,
  kNumericalFailure,
  kZeroMargin,
  kParseError,
  kFormatError,
  kValueError,
  kInvalidPartition,
  kConstantColumn,
  kNoCommonCases,
  kConfigError,
  kIoError,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library. `index()` carries the offending
// margin index or the 1-based input line, when there is one. The pipeline
// attaches a stage tag ("S2 transform", ...) as errors propagate.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> index = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> index() const noexcept { return index_; }
  const std::string& stage() const noexcept { return stage_; }
  const std::string& detail() const noexcept { return detail_; }

  // Copy of this error tagged with a pipeline stage.
  Error with_stage(std::string stage) const;

 private:
  ErrorCode code_;
  std::optional<std::size_t> index_;
  std::string detail_;
  std::string stage_;
};

// Process exit code for the CLI: 2 config, 3 data/format, 4 numerical.
int exit_code_for(ErrorCode code);

}  // namespace jointrank

#endif  // JOINTRANK_ERROR_HPP
