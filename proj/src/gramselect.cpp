// gramctc/src/gramselect.cpp
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

#include "gramctc/gramselect.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "gramctc/decode.hpp"
#include "gramctc/error.hpp"

namespace gramctc {

namespace {

bool IsSpace(Unit u) {
  return u == U' ' || u == U'\t' || u == U'\n' || u == U'\r' || u == U'\v' ||
         u == U'\f' || u == 0x00A0 || u == 0x3000;
}

std::vector<UnitString> SplitWords(std::u32string_view line) {
  std::vector<UnitString> words;
  UnitString current;
  for (Unit u : line) {
    if (IsSpace(u)) {
      if (!current.empty()) words.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(u);
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

void CountLine(std::string_view line, int max_len,
               const std::unordered_set<Unit>& units, GramStats& stats) {
  for (const UnitString& word : SplitWords(utf8_decode(line))) {
    // Runs of base units; anything else breaks the run.
    std::size_t start = 0;
    while (start < word.size()) {
      if (!units.contains(word[start])) {
        ++stats.skipped_units;
        ++start;
        continue;
      }
      std::size_t end = start;
      while (end < word.size() && units.contains(word[end])) ++end;
      for (std::size_t b = start; b < end; ++b) {
        for (std::size_t len = 1;
             len <= static_cast<std::size_t>(max_len) && b + len <= end;
             ++len) {
          ++stats.counts[word.substr(b, len)];
        }
      }
      start = end;
    }
  }
}

void CheckMaxLen(int max_len) {
  if (max_len < 1) {
    throw Error(ErrorKind::kInvalidArgument, "max_len must be >= 1");
  }
}

}  // namespace

void GramStats::merge(const GramStats& other) {
  for (const auto& [gram, count] : other.counts) counts[gram] += count;
  skipped_units += other.skipped_units;
}

std::vector<std::pair<UnitString, std::int64_t>> GramStats::sorted() const {
  std::vector<std::pair<UnitString, std::int64_t>> out(counts.begin(),
                                                       counts.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.second > b.second;
  });
  return out;
}

GramStats count_corpus_grams(std::span<const std::string> lines, int max_len,
                             std::span<const Unit> base_units) {
  CheckMaxLen(max_len);
  const std::unordered_set<Unit> units(base_units.begin(), base_units.end());
  GramStats stats;
  stats.source = StatsSource::kCorpusFrequency;
  for (const std::string& line : lines) CountLine(line, max_len, units, stats);
  return stats;
}

GramStats count_corpus_grams(std::istream& corpus, int max_len,
                             std::span<const Unit> base_units) {
  CheckMaxLen(max_len);
  if (!corpus) throw Error(ErrorKind::kIo, "corpus stream is not readable");
  const std::unordered_set<Unit> units(base_units.begin(), base_units.end());
  GramStats stats;
  stats.source = StatsSource::kCorpusFrequency;
  std::string line;
  while (std::getline(corpus, line)) CountLine(line, max_len, units, stats);
  if (corpus.bad()) throw Error(ErrorKind::kIo, "error reading corpus");
  return stats;
}

std::vector<UnitString> filter_grams(const GramStats& stats,
                                     const FilterPolicy& policy,
                                     std::span<const Unit> base_units) {
  std::vector<UnitString> out;
  for (Unit u : base_units) out.emplace_back(1, u);

  struct Candidate {
    const UnitString* gram;
    std::int64_t count;
  };
  std::vector<Candidate> candidates;
  for (const auto& [gram, count] : stats.counts) {
    if (gram.size() < 2 || static_cast<int>(gram.size()) > policy.max_len) {
      continue;
    }
    candidates.push_back({&gram, count});
  }
  // Length, then descending count, then lexicographic.
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              if (a.gram->size() != b.gram->size()) {
                return a.gram->size() < b.gram->size();
              }
              if (a.count != b.count) return a.count > b.count;
              return *a.gram < *b.gram;
            });

  std::size_t taken_at_length = 0;
  std::size_t current_length = 0;
  for (const Candidate& c : candidates) {
    if (c.gram->size() != current_length) {
      current_length = c.gram->size();
      taken_at_length = 0;
    }
    bool keep = false;
    switch (policy.mode) {
      case FilterPolicy::Mode::kMinCount:
        keep = c.count >= policy.min_count;
        break;
      case FilterPolicy::Mode::kTopKPerLength:
        keep = taken_at_length < policy.top_k;
        break;
      case FilterPolicy::Mode::kKeepAll:
        keep = true;
        break;
    }
    if (keep) {
      out.push_back(*c.gram);
      ++taken_at_length;
    }
  }
  return out;
}

GramStats usage_from_decodes(std::span<const std::string> dumps,
                             const GramVocab& vocab) {
  GramStats stats;
  stats.source = StatsSource::kDecodeUsage;
  for (const std::string& line : dumps) {
    int previous = -1;
    for (int id : parse_framewise(line, vocab)) {
      if (id != previous && id != GramVocab::kBlankId) {
        ++stats.counts[vocab.gram_units(id)];
      }
      previous = id;
    }
  }
  return stats;
}

GramStats usage_from_decodes(std::istream& dumps, const GramVocab& vocab) {
  if (!dumps) throw Error(ErrorKind::kIo, "dump stream is not readable");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(dumps, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return usage_from_decodes(lines, vocab);
}

RefineResult refine_pipeline(std::span<const std::string> corpus, int max_len,
                             const FilterPolicy& initial_policy,
                             const RefineConfig& config,
                             const FilterPolicy& refine_policy) {
  const std::vector<Unit>& base = config.synth.base_units;
  RefineReport report;
  report.corpus_stats = count_corpus_grams(corpus, max_len, base);
  report.initial = filter_grams(report.corpus_stats, initial_policy, base);
  GramVocab initial_vocab = build_vocab(report.initial, base);

  // Training material: corpus words made only of base units.
  toy::SynthConfig synth = config.synth;
  synth.validate();
  std::mt19937_64 rng(synth.seed);
  std::vector<toy::Sample> data;
  const std::unordered_set<Unit> units(base.begin(), base.end());
  for (const std::string& line : corpus) {
    for (UnitString& word : SplitWords(utf8_decode(line))) {
      if (synth.num_samples > 0 &&
          data.size() >= static_cast<std::size_t>(synth.num_samples)) {
        break;
      }
      if (!std::all_of(word.begin(), word.end(),
                       [&](Unit u) { return units.contains(u); })) {
        continue;
      }
      Label label(std::move(word));
      Matrix features = toy::render_features(label, synth, rng);
      data.push_back({std::move(features), std::move(label)});
    }
  }

  std::vector<toy::Head> heads;
  heads.push_back(toy::make_head(toy::HeadLoss::kGram, initial_vocab,
                                 config.stride, config.window,
                                 synth.feature_dim, synth.seed));
  const toy::TrainResult trained = toy::train(heads, data, config.train);
  report.train_history = trained.history;
  report.skipped = trained.skipped;

  std::vector<std::string> dumps;
  dumps.reserve(data.size());
  for (const toy::Sample& sample : data) {
    const PosteriorMatrix post =
        log_softmax(toy::head_logits(heads.front(), sample));
    dumps.push_back(
        format_framewise(greedy_decode(post, initial_vocab).frames,
                         initial_vocab));
  }
  report.usage_stats = usage_from_decodes(dumps, initial_vocab);

  if (refine_policy.mode == FilterPolicy::Mode::kKeepAll) {
    report.kept = report.initial;
  } else {
    report.kept = filter_grams(report.usage_stats, refine_policy, base);
  }
  const std::set<UnitString> kept(report.kept.begin(), report.kept.end());
  for (const UnitString& g : report.initial) {
    if (!kept.contains(g)) report.dropped.push_back(g);
  }
  GramVocab vocab = build_vocab(report.kept, base);
  return {std::move(vocab), std::move(report)};
}

}  // namespace gramctc
