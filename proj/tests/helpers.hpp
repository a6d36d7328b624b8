// gramctc/tests/helpers.hpp
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

#ifndef GRAMCTC_TESTS_HELPERS_HPP_
#define GRAMCTC_TESTS_HELPERS_HPP_

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gramctc/matrix.hpp"
#include "gramctc/utf8.hpp"
#include "gramctc/vocab.hpp"

namespace gramctc::testing {

inline UnitString U(std::string_view s) { return utf8_decode(s); }

inline std::vector<Unit> Units(std::string_view s) {
  const UnitString u = utf8_decode(s);
  return {u.begin(), u.end()};
}

inline GramVocab Vocab(const std::vector<std::string>& grams,
                       std::string_view units) {
  return build_vocab(grams, units);
}

inline Matrix Rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<double> values;
  for (const auto& row : rows) values.insert(values.end(), row);
  return Matrix(r, c, std::move(values));
}

// Logits whose softmax is exactly the given probabilities.
inline Matrix LogitsFromProbs(
    std::initializer_list<std::initializer_list<double>> probs) {
  Matrix m = Rows(probs);
  for (std::size_t t = 0; t < m.rows(); ++t) {
    for (auto& v : m.row(t)) v = std::log(v);
  }
  return m;
}

inline std::string FixturePath(const std::string& rel) {
  return std::string(GRAMCTC_FIXTURE_DIR) + "/" + rel;
}

inline nlohmann::json ReadJson(const std::string& path) {
  std::ifstream in(path);
  return nlohmann::json::parse(in);
}

inline Matrix JsonMatrix(const nlohmann::json& rows) {
  std::vector<double> values;
  for (const auto& row : rows) {
    for (const auto& v : row) values.push_back(v.get<double>());
  }
  const std::size_t r = rows.size();
  return Matrix(r, r == 0 ? 0 : rows[0].size(), std::move(values));
}

}  // namespace gramctc::testing

#endif  // GRAMCTC_TESTS_HELPERS_HPP_
