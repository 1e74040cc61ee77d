/* Copyright 2026 The qscope Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef QSCOPE_ERROR_HPP_
#define QSCOPE_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace qscope {

enum class ErrorCode {
  kSyntax,
  kSchema,
  kCycle,
  kShape,
  kUnresolvedEdge,
  kUnknownImplementation,
  kInvalidBitWidth,
  kUnknownNodeId,
  kIllegalChoice,
  kUnresolved,
  kDegenerateRange,
  kUnderflow,
  kWidthOverflow,
  kInvariantViolation,
  kUntileable,
  kMissingAccuracy,
  kIo,
};

std::string_view to_string(ErrorCode code);

// Single exception type for every domain failure. `subject` names the node,
// edge or field the failure is about, when there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::string subject = {});

  ErrorCode code() const noexcept { return code_; }
  const std::string& subject() const noexcept { return subject_; }
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
  std::string subject_;
};

}  // namespace qscope

#endif  // QSCOPE_ERROR_HPP_
