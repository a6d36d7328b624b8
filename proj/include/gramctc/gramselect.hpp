// gramctc/include/gramctc/gramselect.hpp
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

#ifndef GRAMCTC_GRAMSELECT_HPP_
#define GRAMCTC_GRAMSELECT_HPP_

#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "gramctc/toytrain.hpp"
#include "gramctc/vocab.hpp"

namespace gramctc {

enum class StatsSource { kCorpusFrequency, kDecodeUsage };

struct GramStats {
  std::map<UnitString, std::int64_t> counts;
  StatsSource source = StatsSource::kCorpusFrequency;
  // Units seen in the corpus that are not base units.
  std::int64_t skipped_units = 0;

  // Commutative and associative.
  void merge(const GramStats& other);
  // (gram, count) by descending count, ties lexicographic.
  std::vector<std::pair<UnitString, std::int64_t>> sorted() const;
};

// Counts every substring of length 1..max_len inside whitespace-delimited
// words. Units outside base_units break the word and are tallied in
// skipped_units.
GramStats count_corpus_grams(std::istream& corpus, int max_len,
                             std::span<const Unit> base_units);
GramStats count_corpus_grams(std::span<const std::string> lines, int max_len,
                             std::span<const Unit> base_units);

struct FilterPolicy {
  enum class Mode { kMinCount, kTopKPerLength, kKeepAll };

  Mode mode = Mode::kMinCount;
  std::int64_t min_count = 2;
  std::size_t top_k = 100;
  // Grams longer than this are dropped in every mode.
  int max_len = std::numeric_limits<int>::max();

  static FilterPolicy MinCount(std::int64_t n) {
    return {Mode::kMinCount, n, 0};
  }
  static FilterPolicy TopKPerLength(std::size_t k) {
    return {Mode::kTopKPerLength, 0, k};
  }
  static FilterPolicy KeepAll() { return {Mode::kKeepAll, 0, 0}; }
};

// Base units first (in order), then surviving multi-unit grams by length,
// descending count, then lexicographically. Base units are always kept.
std::vector<UnitString> filter_grams(const GramStats& stats,
                                     const FilterPolicy& policy,
                                     std::span<const Unit> base_units);

// Counts non-blank emissions in framewise dumps after merging adjacent
// repeats. Throws Error(kUnknownToken) for tokens outside the vocabulary.
GramStats usage_from_decodes(std::istream& dumps, const GramVocab& vocab);
GramStats usage_from_decodes(std::span<const std::string> dumps,
                             const GramVocab& vocab);

struct RefineConfig {
  toy::SynthConfig synth;  // base_units, rendering and seed; num_samples
                           // caps how many corpus words are rendered
  toy::TrainConfig train;
  int stride = 2;
  int window = 3;
};

struct RefineReport {
  GramStats corpus_stats;
  GramStats usage_stats;
  std::vector<UnitString> initial;
  std::vector<UnitString> kept;
  std::vector<UnitString> dropped;
  std::vector<double> train_history;
  int skipped = 0;
};

struct RefineResult {
  GramVocab vocab;
  RefineReport report;
};

// count -> filter -> train a gram head on rendered corpus words -> greedy
// decode those words -> usage counts -> filter again.
RefineResult refine_pipeline(std::span<const std::string> corpus, int max_len,
                             const FilterPolicy& initial_policy,
                             const RefineConfig& config,
                             const FilterPolicy& refine_policy);

}  // namespace gramctc

#endif  // GRAMCTC_GRAMSELECT_HPP_
