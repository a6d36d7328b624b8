// gramctc/src/error.cpp
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

#include "gramctc/error.hpp"

namespace gramctc {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid_argument";
    case ErrorKind::kDuplicateGram: return "duplicate_gram";
    case ErrorKind::kUnknownUnit: return "unknown_unit";
    case ErrorKind::kUnknownToken: return "unknown_token";
    case ErrorKind::kDimensionMismatch: return "dimension_mismatch";
    case ErrorKind::kCapExceeded: return "cap_exceeded";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kFormat: return "format";
    case ErrorKind::kDivergence: return "divergence";
  }
  return "unknown";
}

}  // namespace gramctc
