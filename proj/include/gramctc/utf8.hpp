// gramctc/include/gramctc/utf8.hpp
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

#ifndef GRAMCTC_UTF8_HPP_
#define GRAMCTC_UTF8_HPP_

#include <string>
#include <string_view>

namespace gramctc {

// A base unit is one Unicode code point.
using Unit = char32_t;
using UnitString = std::u32string;

// Throws Error(kFormat) on malformed input.
UnitString utf8_decode(std::string_view text);
std::string utf8_encode(std::u32string_view units);
std::string utf8_encode(Unit unit);

}  // namespace gramctc

#endif  // GRAMCTC_UTF8_HPP_
