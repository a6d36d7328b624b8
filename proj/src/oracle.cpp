// gramctc/src/oracle.cpp
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

#include "gramctc/oracle.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "gramctc/error.hpp"

namespace gramctc::oracle {

namespace {

UnitString CollapseUnits(std::span<const int> path, const GramVocab& vocab) {
  UnitString out;
  int previous = -1;
  for (int id : path) {
    if (id != previous && id != GramVocab::kBlankId) {
      out += vocab.gram_units(id);
    }
    previous = id;
  }
  return out;
}

void CheckCap(const PosteriorMatrix& post, const GramVocab& vocab,
              std::uint64_t cap) {
  const std::size_t num_symbols = post.num_symbols();
  const std::size_t num_frames = post.num_frames();
  if (num_symbols != static_cast<std::size_t>(vocab.total_symbols())) {
    throw Error(ErrorKind::kDimensionMismatch,
                "posteriors have " + std::to_string(num_symbols) +
                    " columns, vocabulary has " +
                    std::to_string(vocab.total_symbols()) + " symbols");
  }
  const std::uint64_t bound = path_count(num_symbols, num_frames);
  if (bound > cap) {
    throw Error(ErrorKind::kCapExceeded,
                "enumeration needs " + std::to_string(num_symbols) + "^" +
                    std::to_string(num_frames) + " = " +
                    std::to_string(bound) + " paths, cap is " +
                    std::to_string(cap));
  }
}

// Calls visit(path, probability) for every path in G'^T, odometer order.
template <typename Visit>
void ForEachPath(const PosteriorMatrix& post, Visit&& visit) {
  const std::size_t frames = post.num_frames();
  const int width = static_cast<int>(post.num_symbols());
  std::vector<double> prob(frames * width);
  for (std::size_t t = 0; t < frames; ++t) {
    for (int k = 0; k < width; ++k) {
      prob[t * width + k] = std::exp(post.log_values(t, k));
    }
  }
  std::vector<int> path(frames, 0);
  while (true) {
    double p = 1.0;
    for (std::size_t t = 0; t < frames; ++t) p *= prob[t * width + path[t]];
    visit(std::span<const int>(path), p);
    std::size_t t = frames;
    while (t > 0) {
      --t;
      if (++path[t] < width) break;
      path[t] = 0;
      if (t == 0) return;
    }
    if (frames == 0) return;
  }
}

}  // namespace

Label collapse(std::span<const int> path, const GramVocab& vocab) {
  for (int id : path) {
    if (id < 0 || id >= vocab.total_symbols()) {
      throw Error(ErrorKind::kInvalidArgument,
                  "path symbol " + std::to_string(id) + " out of range");
    }
  }
  return Label(CollapseUnits(path, vocab));
}

std::uint64_t path_count(std::size_t num_symbols, std::size_t num_frames) {
  std::uint64_t total = 1;
  for (std::size_t t = 0; t < num_frames; ++t) {
    if (num_symbols != 0 &&
        total > std::numeric_limits<std::uint64_t>::max() / num_symbols) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    total *= num_symbols;
  }
  return total;
}

double brute_force_likelihood(const PosteriorMatrix& post, const Label& label,
                              const GramVocab& vocab, std::uint64_t cap) {
  CheckCap(post, vocab, cap);
  double total = 0.0;
  ForEachPath(post, [&](std::span<const int> path, double p) {
    if (CollapseUnits(path, vocab) == label.units()) total += p;
  });
  return total;
}

std::map<UnitString, double> brute_force_label_distribution(
    const PosteriorMatrix& post, const GramVocab& vocab, std::uint64_t cap) {
  CheckCap(post, vocab, cap);
  std::map<UnitString, double> dist;
  ForEachPath(post, [&](std::span<const int> path, double p) {
    dist[CollapseUnits(path, vocab)] += p;
  });
  return dist;
}

}  // namespace gramctc::oracle
