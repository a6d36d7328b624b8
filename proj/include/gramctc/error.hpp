// gramctc/include/gramctc/error.hpp
//
// Copyright 2026 The gramctc Authors.
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

#ifndef GRAMCTC_ERROR_HPP_
#define GRAMCTC_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace gramctc {

enum class ErrorKind {
  kInvalidArgument,
  kDuplicateGram,
  kUnknownUnit,
  kUnknownToken,
  kDimensionMismatch,
  kCapExceeded,
  kIo,
  kFormat,
  kDivergence,
};

std::string_view to_string(ErrorKind kind);

// Every module-level rejection is reported through this type; the CLI turns
// it into a JSON error record.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace gramctc

#endif  // GRAMCTC_ERROR_HPP_
