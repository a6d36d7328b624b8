// gramctc/src/vocab.cpp
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

#include "gramctc/vocab.hpp"

#include <algorithm>

#include "gramctc/error.hpp"

namespace gramctc {

std::optional<int> GramVocab::find(std::u32string_view units) const {
  auto it = index_.find(UnitString(units));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const UnitString& GramVocab::gram_units(int id) const {
  if (id < 1 || id > num_grams()) {
    throw Error(ErrorKind::kInvalidArgument,
                "gram id " + std::to_string(id) + " out of range");
  }
  return grams_[id - 1].units;
}

std::string GramVocab::symbol_utf8(int id) const {
  if (id == kBlankId) return "_";
  return utf8_encode(gram_units(id));
}

GramVocab build_vocab(std::span<const UnitString> grams,
                      std::span<const Unit> base_units) {
  if (grams.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "gram list is empty");
  }
  GramVocab vocab;
  for (Unit u : base_units) {
    if (!vocab.unit_set_.insert(u).second) {
      throw Error(ErrorKind::kInvalidArgument,
                  "base unit '" + utf8_encode(u) + "' listed twice");
    }
    vocab.base_units_.push_back(u);
  }

  auto add = [&vocab](const UnitString& units) {
    const int id = vocab.num_grams() + 1;
    vocab.grams_.push_back({units, id});
    vocab.index_.emplace(units, id);
    vocab.tau_ = std::max(vocab.tau_, static_cast<int>(units.size()));
  };

  for (const UnitString& g : grams) {
    if (g.empty()) throw Error(ErrorKind::kInvalidArgument, "empty gram");
    for (Unit u : g) {
      if (!vocab.is_base_unit(u)) {
        throw Error(ErrorKind::kUnknownUnit,
                    "gram '" + utf8_encode(g) + "' contains unit '" +
                        utf8_encode(u) + "' outside the base units");
      }
    }
    if (vocab.index_.contains(g)) {
      throw Error(ErrorKind::kDuplicateGram,
                  "duplicate gram '" + utf8_encode(g) + "'");
    }
    add(g);
  }

  for (Unit u : vocab.base_units_) {
    UnitString single(1, u);
    if (!vocab.index_.contains(single)) {
      add(single);
      vocab.auto_added_.push_back(single);
    }
  }
  return vocab;
}

GramVocab build_vocab(const std::vector<std::string>& grams_utf8,
                      std::string_view base_units_utf8) {
  std::vector<UnitString> grams;
  grams.reserve(grams_utf8.size());
  for (const auto& g : grams_utf8) grams.push_back(utf8_decode(g));
  const UnitString units = utf8_decode(base_units_utf8);
  return build_vocab(grams, std::span<const Unit>(units.data(), units.size()));
}

GramVocab unigram_vocab(std::span<const Unit> base_units) {
  std::vector<UnitString> grams;
  for (Unit u : base_units) grams.emplace_back(1, u);
  return build_vocab(grams, base_units);
}

std::vector<SuffixGram> suffix_grams(const GramVocab& vocab,
                                     const Label& label, std::size_t i) {
  if (i < 1 || i > label.size()) {
    throw Error(ErrorKind::kInvalidArgument,
                "suffix position " + std::to_string(i) +
                    " outside label of length " +
                    std::to_string(label.size()));
  }
  std::vector<SuffixGram> out;
  const std::size_t longest = std::min<std::size_t>(vocab.tau(), i);
  const std::u32string_view units = label.units();
  for (std::size_t j = 1; j <= longest; ++j) {
    if (auto id = vocab.find(units.substr(i - j, j))) {
      out.push_back({static_cast<int>(j), *id});
    }
  }
  return out;
}

Label encode_label(const GramVocab& vocab, UnitString units) {
  for (std::size_t k = 0; k < units.size(); ++k) {
    if (!vocab.is_base_unit(units[k])) {
      throw Error(ErrorKind::kUnknownUnit,
                  "unit '" + utf8_encode(units[k]) + "' at position " +
                      std::to_string(k + 1) + " is not a base unit");
    }
  }
  return Label(std::move(units));
}

Label encode_label(const GramVocab& vocab, std::string_view text_utf8) {
  return encode_label(vocab, utf8_decode(text_utf8));
}

}  // namespace gramctc
