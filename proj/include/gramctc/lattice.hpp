// gramctc/include/gramctc/lattice.hpp
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

#ifndef GRAMCTC_LATTICE_HPP_
#define GRAMCTC_LATTICE_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gramctc/vocab.hpp"

namespace gramctc {

// State s_i^j: the first i label units have been emitted and the last frame
// emitted a gram of length j ending at i (j == 0 means blank).
struct LatticeState {
  int i = 0;
  int j = 0;
  int gram_id = GramVocab::kBlankId;
  // True iff the gram of this state also ends at i - j; the direct
  // transition from that state would merge into one emission and is absent.
  bool same_gram_pred = false;
};

// Compressed adjacency: neighbours of state s are
// index[offsets[s] .. offsets[s + 1]).
struct Adjacency {
  std::vector<int> offsets;
  std::vector<int> index;

  std::span<const int> of(std::size_t s) const {
    return std::span<const int>(index).subspan(
        offsets[s], offsets[s + 1] - offsets[s]);
  }
};

class Lattice {
 public:
  const Label& label() const { return label_; }
  const std::vector<LatticeState>& states() const { return states_; }
  std::size_t num_states() const { return states_.size(); }
  int total_symbols() const { return total_symbols_; }

  // Predecessors include the self-loop.
  std::span<const int> preds(std::size_t s) const { return preds_.of(s); }
  std::span<const int> succs(std::size_t s) const { return succs_.of(s); }
  const std::vector<int>& initials() const { return initials_; }
  const std::vector<int>& finals() const { return finals_; }

  // lab(l, k): states whose gram is k. Blank states are listed under 0.
  std::span<const int> states_with_gram(int gram_id) const {
    return by_gram_.of(static_cast<std::size_t>(gram_id));
  }

  std::optional<int> find_state(int i, int j) const;

  // Fewest frames of any path collapsing to the label; 0 for the empty
  // label.
  int min_path_length() const { return min_path_length_; }

 private:
  friend Lattice build_lattice(const GramVocab&, const Label&);

  Label label_;
  int total_symbols_ = 0;
  std::vector<LatticeState> states_;
  Adjacency preds_;
  Adjacency succs_;
  Adjacency by_gram_;
  std::vector<int> initials_;
  std::vector<int> finals_;
  int min_path_length_ = 0;
};

// Throws Error(kUnknownUnit) if the label has units outside the vocabulary.
Lattice build_lattice(const GramVocab& vocab, const Label& label);

int min_path_length(const Lattice& lattice);

// One line per edge: "(i,j,gram) -> (i',j',gram')", blank rendered "_".
std::string dump_lattice(const Lattice& lattice, const GramVocab& vocab);
std::string lattice_to_dot(const Lattice& lattice, const GramVocab& vocab);

}  // namespace gramctc

#endif  // GRAMCTC_LATTICE_HPP_
