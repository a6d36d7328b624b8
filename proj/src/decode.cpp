// gramctc/src/decode.cpp
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

#include "gramctc/decode.hpp"

#include <algorithm>
#include <map>

#include "gramctc/error.hpp"
#include "gramctc/logmath.hpp"
#include "gramctc/oracle.hpp"

namespace gramctc {

GreedyResult greedy_decode(const PosteriorMatrix& post,
                           const GramVocab& vocab) {
  if (post.num_symbols() != static_cast<std::size_t>(vocab.total_symbols())) {
    throw Error(ErrorKind::kDimensionMismatch,
                "posterior width does not match vocabulary");
  }
  GreedyResult result;
  result.frames.reserve(post.num_frames());
  for (std::size_t t = 0; t < post.num_frames(); ++t) {
    const auto row = post.log_values.row(t);
    const auto best = std::max_element(row.begin(), row.end());
    result.frames.push_back(static_cast<int>(best - row.begin()));
  }
  result.label = oracle::collapse(result.frames, vocab);
  return result;
}

std::string format_framewise(std::span<const int> frames,
                             const GramVocab& vocab) {
  std::string out;
  for (std::size_t t = 0; t < frames.size(); ++t) {
    if (t > 0) out += '|';
    out += vocab.symbol_utf8(frames[t]);
  }
  return out;
}

std::vector<int> parse_framewise(std::string_view line,
                                 const GramVocab& vocab) {
  std::vector<int> frames;
  if (line.empty()) return frames;
  std::size_t start = 0;
  while (true) {
    const std::size_t bar = line.find('|', start);
    const std::string_view token = line.substr(
        start, bar == std::string_view::npos ? std::string_view::npos
                                             : bar - start);
    if (token == "_") {
      frames.push_back(GramVocab::kBlankId);
    } else {
      auto id = vocab.find(utf8_decode(token));
      if (!id) {
        throw Error(ErrorKind::kUnknownToken,
                    "token '" + std::string(token) + "' is not in the vocabulary");
      }
      frames.push_back(*id);
    }
    if (bar == std::string_view::npos) break;
    start = bar + 1;
  }
  return frames;
}

namespace {

// Log score per last emitted symbol (blank = 0) of one label prefix.
using LastSymbolScores = std::map<int, double>;
using Beam = std::map<UnitString, LastSymbolScores>;

double Total(const LastSymbolScores& scores) {
  double total = kLogZero;
  for (const auto& [last, score] : scores) total = log_add(total, score);
  return total;
}

struct Ranked {
  const UnitString* prefix;
  double score;
};

// Best first; ties to the shorter label, then lexicographic.
std::vector<Ranked> Rank(const Beam& beam) {
  std::vector<Ranked> ranked;
  ranked.reserve(beam.size());
  for (const auto& [prefix, scores] : beam) {
    ranked.push_back({&prefix, Total(scores)});
  }
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.prefix->size() != b.prefix->size()) {
      return a.prefix->size() < b.prefix->size();
    }
    return *a.prefix < *b.prefix;
  });
  return ranked;
}

void Accumulate(LastSymbolScores& scores, int last, double score) {
  auto [it, inserted] = scores.try_emplace(last, score);
  if (!inserted) it->second = log_add(it->second, score);
}

}  // namespace

std::vector<Hypothesis> beam_search(const PosteriorMatrix& post,
                                    const GramVocab& vocab, int beam_width,
                                    int n_best) {
  if (beam_width < 1) {
    throw Error(ErrorKind::kInvalidArgument, "beam width must be at least 1");
  }
  if (post.num_symbols() != static_cast<std::size_t>(vocab.total_symbols())) {
    throw Error(ErrorKind::kDimensionMismatch,
                "posterior width does not match vocabulary");
  }
  const int width = vocab.total_symbols();

  Beam beam;
  beam[UnitString()][GramVocab::kBlankId] = 0.0;
  for (std::size_t t = 0; t < post.num_frames(); ++t) {
    const auto y = post.log_values.row(t);
    Beam next;
    for (const auto& [prefix, scores] : beam) {
      for (const auto& [last, score] : scores) {
        Accumulate(next[prefix], GramVocab::kBlankId,
                   score + y[GramVocab::kBlankId]);
        for (int k = 1; k < width; ++k) {
          if (k == last) {
            Accumulate(next[prefix], k, score + y[k]);
          } else {
            Accumulate(next[prefix + vocab.gram_units(k)], k, score + y[k]);
          }
        }
      }
    }
    if (next.size() > static_cast<std::size_t>(beam_width)) {
      Beam pruned;
      const auto ranked = Rank(next);
      for (int b = 0; b < beam_width; ++b) {
        auto node = next.extract(*ranked[b].prefix);
        pruned.insert(std::move(node));
      }
      next = std::move(pruned);
    }
    beam = std::move(next);
  }

  std::vector<Hypothesis> out;
  for (const Ranked& r : Rank(beam)) {
    if (static_cast<int>(out.size()) >= n_best) break;
    out.push_back({Label(*r.prefix), r.score});
  }
  return out;
}

}  // namespace gramctc
