// Copyright 2026 The Narrev Authors.
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

#ifndef NARREV_ERROR_H_
#define NARREV_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace narrev {

// Error categories. These map one-to-one onto the status codes of the C API.
enum class ErrorCode {
  kInvalidArgument = 1,
  kIo = 2,
  kParse = 3,
  kValidation = 4,
  kUndefinedScore = 5,
  kRuntime = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Malformed bracketed tree. `offset` is the byte offset of the failure.
class ParseError : public Error {
 public:
  ParseError(const std::string &message, std::size_t offset)
      : Error(ErrorCode::kParse,
              message + " at byte offset " + std::to_string(offset)),
        offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// A score (PMI, CP) whose defining counts are zero.
class UndefinedScoreError : public Error {
 public:
  explicit UndefinedScoreError(const std::string &message)
      : Error(ErrorCode::kUndefinedScore, message) {}
};

inline Error InvalidArgument(const std::string &message) {
  return Error(ErrorCode::kInvalidArgument, message);
}

}  // namespace narrev

#endif  // NARREV_ERROR_H_
