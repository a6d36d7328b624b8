// gramctc/include/gramctc/vocab.hpp
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

#ifndef GRAMCTC_VOCAB_HPP_
#define GRAMCTC_VOCAB_HPP_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gramctc/utf8.hpp"

namespace gramctc {

struct Gram {
  UnitString units;
  int id = 0;
};

// A target sequence over the base units. Construct through encode_label() to
// get validation against a vocabulary.
class Label {
 public:
  Label() = default;
  explicit Label(UnitString units) : units_(std::move(units)) {}

  const UnitString& units() const { return units_; }
  std::size_t size() const { return units_.size(); }
  bool empty() const { return units_.empty(); }
  Unit operator[](std::size_t i) const { return units_[i]; }
  std::string utf8() const { return utf8_encode(units_); }

  friend bool operator==(const Label&, const Label&) = default;
  friend auto operator<=>(const Label&, const Label&) = default;

 private:
  UnitString units_;
};

// The output alphabet G' = G + blank. Blank is id 0; grams are ids 1..|G| in
// the order they were given. Immutable once built.
class GramVocab {
 public:
  static constexpr int kBlankId = 0;

  const std::vector<Unit>& base_units() const { return base_units_; }
  const std::vector<Gram>& grams() const { return grams_; }
  int tau() const { return tau_; }
  int blank_id() const { return kBlankId; }
  int num_grams() const { return static_cast<int>(grams_.size()); }
  int total_symbols() const { return num_grams() + 1; }

  bool is_base_unit(Unit u) const { return unit_set_.contains(u); }
  std::optional<int> find(std::u32string_view units) const;
  // Requires 1 <= id <= num_grams().
  const UnitString& gram_units(int id) const;
  // Blank renders as "_".
  std::string symbol_utf8(int id) const;

  // Base units that build_vocab() appended because no length-1 gram named
  // them.
  const std::vector<UnitString>& auto_added() const { return auto_added_; }

 private:
  friend GramVocab build_vocab(std::span<const UnitString>,
                               std::span<const Unit>);

  std::vector<Unit> base_units_;
  std::unordered_set<Unit> unit_set_;
  std::vector<Gram> grams_;
  std::unordered_map<UnitString, int> index_;
  std::vector<UnitString> auto_added_;
  int tau_ = 0;
};

// Rejects duplicates, empty grams and grams with units outside base_units.
// Missing base units are appended as uni-grams and listed in auto_added().
GramVocab build_vocab(std::span<const UnitString> grams,
                      std::span<const Unit> base_units);
GramVocab build_vocab(const std::vector<std::string>& grams_utf8,
                      std::string_view base_units_utf8);

// Uni-gram vocabulary over the given units (classic CTC alphabet).
GramVocab unigram_vocab(std::span<const Unit> base_units);

struct SuffixGram {
  int length = 0;
  int gram_id = 0;
};

// Grams g ending at 1-based position i of the label, i.e. label[i-j+1..i] in
// G, ascending by length j.
std::vector<SuffixGram> suffix_grams(const GramVocab& vocab,
                                     const Label& label, std::size_t i);

// Throws Error(kUnknownUnit) naming the first unit outside the base set and
// its 1-based position.
Label encode_label(const GramVocab& vocab, std::string_view text_utf8);
Label encode_label(const GramVocab& vocab, UnitString units);

}  // namespace gramctc

#endif  // GRAMCTC_VOCAB_HPP_
