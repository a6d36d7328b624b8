// gramctc/include/gramctc/decode.hpp
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

#ifndef GRAMCTC_DECODE_HPP_
#define GRAMCTC_DECODE_HPP_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gramctc/loss.hpp"
#include "gramctc/vocab.hpp"

namespace gramctc {

struct GreedyResult {
  std::vector<int> frames;  // per-frame argmax, ties to the lowest id
  Label label;
};

GreedyResult greedy_decode(const PosteriorMatrix& post,
                           const GramVocab& vocab);

// "_|th|th|e": symbols joined by '|', blank as '_'.
std::string format_framewise(std::span<const int> frames,
                             const GramVocab& vocab);
// Inverse of format_framewise. Throws Error(kUnknownToken).
std::vector<int> parse_framewise(std::string_view line,
                                 const GramVocab& vocab);

struct Hypothesis {
  Label label;
  double log_prob = 0.0;
};

// LM-free prefix beam search. Each surviving prefix carries one log score
// per last emitted symbol (blank or gram id), so all decompositions and
// alignments of a prefix are merged; scores are marginals, not Viterbi.
// Returns up to n_best hypotheses, best first.
std::vector<Hypothesis> beam_search(const PosteriorMatrix& post,
                                    const GramVocab& vocab, int beam_width,
                                    int n_best);

}  // namespace gramctc

#endif  // GRAMCTC_DECODE_HPP_
