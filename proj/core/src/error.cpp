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

#include "qscope/error.hpp"

namespace qscope {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSyntax: return "SyntaxError";
    case ErrorCode::kSchema: return "SchemaError";
    case ErrorCode::kCycle: return "CycleError";
    case ErrorCode::kShape: return "ShapeError";
    case ErrorCode::kUnresolvedEdge: return "UnresolvedEdge";
    case ErrorCode::kUnknownImplementation: return "UnknownImplementation";
    case ErrorCode::kInvalidBitWidth: return "InvalidBitWidth";
    case ErrorCode::kUnknownNodeId: return "UnknownNodeId";
    case ErrorCode::kIllegalChoice: return "IllegalChoice";
    case ErrorCode::kUnresolved: return "Unresolved";
    case ErrorCode::kDegenerateRange: return "DegenerateRange";
    case ErrorCode::kUnderflow: return "Underflow";
    case ErrorCode::kWidthOverflow: return "WidthOverflow";
    case ErrorCode::kInvariantViolation: return "InvariantViolation";
    case ErrorCode::kUntileable: return "Untileable";
    case ErrorCode::kMissingAccuracy: return "MissingAccuracy";
    case ErrorCode::kIo: return "IoError";
  }
  return "Error";
}

namespace {

std::string format_what(ErrorCode code, const std::string& message,
                        const std::string& subject) {
  std::string out(to_string(code));
  if (!subject.empty()) out += " [" + subject + "]";
  out += ": " + message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, std::string message, std::string subject)
    : std::runtime_error(format_what(code, message, subject)),
      code_(code),
      message_(std::move(message)),
      subject_(std::move(subject)) {}

}  // namespace qscope
