// gramctc/src/check.cpp
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

#include "gramctc/check.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "gramctc/error.hpp"
#include "gramctc/lattice.hpp"

namespace gramctc::check {

Matrix random_logits(std::mt19937_64& rng, std::size_t frames,
                     std::size_t symbols, double scale) {
  std::normal_distribution<double> dist(0.0, scale);
  Matrix m(frames, symbols);
  for (double& v : m.data()) v = dist(rng);
  return m;
}

Instance random_instance(std::mt19937_64& rng, const InstanceSpec& spec) {
  if (spec.max_symbols < 2 || spec.max_base_units < 1 || spec.max_gram_len < 1 ||
      spec.min_frames < 0 || spec.max_frames < spec.min_frames) {
    throw Error(ErrorKind::kInvalidArgument, "bad instance spec");
  }
  static constexpr char32_t kAlphabet[] = U"abcdefghij";
  auto uniform = [&rng](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };

  for (int attempt = 0; attempt < 1000; ++attempt) {
    const int max_units = std::min({spec.max_base_units, spec.max_symbols - 1, 10});
    const int num_units = uniform(1, max_units);
    std::vector<Unit> units(kAlphabet, kAlphabet + num_units);

    std::vector<UnitString> grams;
    for (Unit u : units) grams.emplace_back(1, u);
    std::set<UnitString> seen(grams.begin(), grams.end());
    const int room = spec.max_symbols - 1 - num_units;
    const int extra = spec.max_gram_len > 1 && room > 0 ? uniform(0, room) : 0;
    for (int tries = 0; static_cast<int>(grams.size()) < num_units + extra &&
                        tries < 100;
         ++tries) {
      const int len = uniform(2, spec.max_gram_len);
      UnitString g;
      for (int k = 0; k < len; ++k) g.push_back(units[uniform(0, num_units - 1)]);
      if (seen.insert(g).second) grams.push_back(g);
    }
    // Shuffle so gram ids are not always uni-grams first.
    std::shuffle(grams.begin(), grams.end(), rng);
    GramVocab vocab = build_vocab(grams, units);

    // Label: concatenation of random grams, cut to the length budget.
    const int target_len = uniform(0, spec.max_label_len);
    UnitString text;
    while (static_cast<int>(text.size()) < target_len) {
      text += vocab.gram_units(uniform(1, vocab.num_grams()));
    }
    text.resize(target_len);
    Label label(text);

    int lo = spec.min_frames;
    if (spec.feasible) {
      lo = std::max(lo, build_lattice(vocab, label).min_path_length());
      if (lo > spec.max_frames) continue;
    }
    const int frames = uniform(lo, spec.max_frames);
    Matrix logits = random_logits(rng, frames, vocab.total_symbols(),
                                  spec.logit_scale);
    return {std::move(vocab), std::move(label), std::move(logits)};
  }
  throw Error(ErrorKind::kInvalidArgument,
              "could not draw a feasible instance for this spec");
}

Matrix finite_difference_grad(
    ConstMatrixView logits,
    const std::function<double(ConstMatrixView)>& loss, double step) {
  Matrix probe(logits.rows(), logits.cols(),
               std::vector<double>(logits.data().begin(), logits.data().end()));
  Matrix grad(logits.rows(), logits.cols());
  for (std::size_t t = 0; t < logits.rows(); ++t) {
    for (std::size_t k = 0; k < logits.cols(); ++k) {
      const double original = probe(t, k);
      probe(t, k) = original + step;
      const double up = loss(probe);
      probe(t, k) = original - step;
      const double down = loss(probe);
      probe(t, k) = original;
      grad(t, k) = (up - down) / (2.0 * step);
    }
  }
  return grad;
}

double max_relative_error(ConstMatrixView analytic, ConstMatrixView numeric,
                          double floor) {
  if (analytic.rows() != numeric.rows() || analytic.cols() != numeric.cols()) {
    throw Error(ErrorKind::kDimensionMismatch, "gradient shapes differ");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < analytic.data().size(); ++i) {
    const double a = analytic.data()[i];
    const double n = numeric.data()[i];
    const double scale = std::max({std::abs(a), std::abs(n), floor});
    worst = std::max(worst, std::abs(a - n) / scale);
  }
  return worst;
}

}  // namespace gramctc::check
