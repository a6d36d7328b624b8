// gramctc/src/lattice.cpp
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

#include "gramctc/lattice.hpp"

#include <algorithm>
#include <climits>
#include <deque>
#include <sstream>

#include "gramctc/error.hpp"

namespace gramctc {

namespace {

Adjacency ToAdjacency(const std::vector<std::vector<int>>& lists) {
  Adjacency adj;
  adj.offsets.reserve(lists.size() + 1);
  adj.offsets.push_back(0);
  for (const auto& list : lists) {
    adj.index.insert(adj.index.end(), list.begin(), list.end());
    adj.offsets.push_back(static_cast<int>(adj.index.size()));
  }
  return adj;
}

std::string StateName(const LatticeState& s, const GramVocab& vocab) {
  return "(" + std::to_string(s.i) + "," + std::to_string(s.j) + "," +
         vocab.symbol_utf8(s.gram_id) + ")";
}

}  // namespace

std::optional<int> Lattice::find_state(int i, int j) const {
  auto it = std::lower_bound(
      states_.begin(), states_.end(), std::pair{i, j},
      [](const LatticeState& s, const std::pair<int, int>& key) {
        return std::pair{s.i, s.j} < key;
      });
  if (it == states_.end() || it->i != i || it->j != j) return std::nullopt;
  return static_cast<int>(it - states_.begin());
}

Lattice build_lattice(const GramVocab& vocab, const Label& label) {
  for (std::size_t k = 0; k < label.size(); ++k) {
    if (!vocab.is_base_unit(label[k])) {
      throw Error(ErrorKind::kUnknownUnit,
                  "label unit '" + utf8_encode(label[k]) + "' at position " +
                      std::to_string(k + 1) + " is not a base unit");
    }
  }

  Lattice lat;
  lat.label_ = label;
  lat.total_symbols_ = vocab.total_symbols();
  const int length = static_cast<int>(label.size());
  const std::u32string_view units = label.units();

  // first_at[i] .. first_at[i + 1] are the states of prefix length i.
  std::vector<int> first_at(length + 2, 0);
  lat.states_.push_back({0, 0, GramVocab::kBlankId, false});
  for (int i = 1; i <= length; ++i) {
    first_at[i] = static_cast<int>(lat.states_.size());
    lat.states_.push_back({i, 0, GramVocab::kBlankId, false});
    for (const SuffixGram& sg : suffix_grams(vocab, label, i)) {
      const int j = sg.length;
      const bool same = i - j >= j &&
                        units.substr(i - 2 * j, j) == units.substr(i - j, j);
      lat.states_.push_back({i, j, sg.gram_id, same});
    }
  }
  first_at[length + 1] = static_cast<int>(lat.states_.size());

  const std::size_t n = lat.states_.size();
  std::vector<std::vector<int>> preds(n), succs(n);
  for (std::size_t s = 0; s < n; ++s) {
    const LatticeState& st = lat.states_[s];
    if (st.i == 0) {
      preds[s].push_back(static_cast<int>(s));
      continue;
    }
    if (st.j == 0) {
      for (int p = first_at[st.i]; p < first_at[st.i + 1]; ++p) {
        preds[s].push_back(p);
      }
      continue;
    }
    const int from = st.i - st.j;
    for (int p = first_at[from]; p < first_at[from + 1]; ++p) {
      if (st.same_gram_pred && lat.states_[p].j == st.j) continue;
      preds[s].push_back(p);
    }
    preds[s].push_back(static_cast<int>(s));
  }
  for (std::size_t s = 0; s < n; ++s) {
    std::sort(preds[s].begin(), preds[s].end());
    for (int p : preds[s]) succs[p].push_back(static_cast<int>(s));
  }
  lat.preds_ = ToAdjacency(preds);
  lat.succs_ = ToAdjacency(succs);

  std::vector<std::vector<int>> by_gram(vocab.total_symbols());
  for (std::size_t s = 0; s < n; ++s) {
    const LatticeState& st = lat.states_[s];
    by_gram[st.gram_id].push_back(static_cast<int>(s));
    if (st.i == 0 || st.i == st.j) lat.initials_.push_back(static_cast<int>(s));
    if (st.i == length) lat.finals_.push_back(static_cast<int>(s));
  }
  lat.by_gram_ = ToAdjacency(by_gram);

  if (length == 0) {
    lat.min_path_length_ = 0;
  } else {
    // Breadth-first over non-self edges; an initial state costs one frame.
    std::vector<int> dist(n, INT_MAX);
    std::deque<int> queue;
    for (int s : lat.initials_) {
      dist[s] = 1;
      queue.push_back(s);
    }
    while (!queue.empty()) {
      const int s = queue.front();
      queue.pop_front();
      for (int next : lat.succs_.of(s)) {
        if (dist[next] == INT_MAX) {
          dist[next] = dist[s] + 1;
          queue.push_back(next);
        }
      }
    }
    int best = INT_MAX;
    for (int f : lat.finals_) best = std::min(best, dist[f]);
    lat.min_path_length_ = best;
  }
  return lat;
}

int min_path_length(const Lattice& lattice) {
  return lattice.min_path_length();
}

std::string dump_lattice(const Lattice& lattice, const GramVocab& vocab) {
  std::ostringstream out;
  const auto& states = lattice.states();
  for (std::size_t s = 0; s < states.size(); ++s) {
    for (int next : lattice.succs(s)) {
      out << StateName(states[s], vocab) << " -> "
          << StateName(states[next], vocab) << '\n';
    }
  }
  return out.str();
}

std::string lattice_to_dot(const Lattice& lattice, const GramVocab& vocab) {
  std::ostringstream out;
  const auto& states = lattice.states();
  const auto& initials = lattice.initials();
  const auto& finals = lattice.finals();
  out << "digraph lattice {\n  rankdir=LR;\n";
  for (std::size_t s = 0; s < states.size(); ++s) {
    const bool initial =
        std::find(initials.begin(), initials.end(), s) != initials.end();
    const bool final =
        std::find(finals.begin(), finals.end(), s) != finals.end();
    out << "  s" << s << " [label=\"" << StateName(states[s], vocab) << "\"";
    if (final) out << " shape=doublecircle";
    if (initial) out << " style=bold";
    out << "];\n";
  }
  for (std::size_t s = 0; s < states.size(); ++s) {
    for (int next : lattice.succs(s)) {
      out << "  s" << s << " -> s" << next << ";\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace gramctc
