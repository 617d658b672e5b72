// Copyright 2026 The ORMind Authors
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

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ormind {

enum class ErrorCode {
  kSyntaxError,
  kUnknownVariable,
  kMultipleRelations,
  kDocumentMalformed,
  kDuplicateName,
  kMissingAssignment,
  kStatusNotOptimal,
  kNoModificationsNeeded,
  kStageParseError,
  kTransport,
  kFixtureMiss,
  kScriptExhausted,
  kStorageWrite,
  kEmptyDataset,
  kFormatError,
  kIoError,
  kInvalidArgument,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the core. `section` names the failing artifact
// (e.g. "constraints[1]", "objective", "solver"); `subject` carries the
// offending identifier for UnknownVariable / DuplicateName / MissingAssignment.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string section = {},
        std::string subject = {}, std::optional<std::size_t> position = {})
      : std::runtime_error(message),
        code_(code),
        section_(std::move(section)),
        subject_(std::move(subject)),
        position_(position) {}

  ErrorCode code() const { return code_; }
  const std::string& section() const { return section_; }
  const std::string& subject() const { return subject_; }
  std::optional<std::size_t> position() const { return position_; }

  Error with_section(std::string section) const {
    return Error(code_, what(), std::move(section), subject_, position_);
  }

 private:
  ErrorCode code_;
  std::string section_;
  std::string subject_;
  std::optional<std::size_t> position_;
};

}  // namespace ormind
