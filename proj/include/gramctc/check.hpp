// gramctc/include/gramctc/check.hpp
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

#ifndef GRAMCTC_CHECK_HPP_
#define GRAMCTC_CHECK_HPP_

#include <cstdint>
#include <functional>
#include <random>

#include "gramctc/matrix.hpp"
#include "gramctc/vocab.hpp"

namespace gramctc::check {

// Random (vocabulary, label, logits) triples for self-checks.
struct InstanceSpec {
  int max_base_units = 3;
  int max_symbols = 4;  // cap on |G'|
  int max_gram_len = 2;
  int max_label_len = 3;
  int min_frames = 1;
  int max_frames = 6;
  // Draw T >= min_path_length so the label is reachable.
  bool feasible = false;
  double logit_scale = 1.0;
};

struct Instance {
  GramVocab vocab;
  Label label;
  Matrix logits;
};

Instance random_instance(std::mt19937_64& rng, const InstanceSpec& spec);

// Logits ~ N(0, scale^2).
Matrix random_logits(std::mt19937_64& rng, std::size_t frames,
                     std::size_t symbols, double scale = 1.0);

// Central differences of a scalar function of the logits.
Matrix finite_difference_grad(
    ConstMatrixView logits,
    const std::function<double(ConstMatrixView)>& loss, double step);

// max |a - n| / max(|a|, |n|, floor) over all entries.
double max_relative_error(ConstMatrixView analytic, ConstMatrixView numeric,
                          double floor);

}  // namespace gramctc::check

#endif  // GRAMCTC_CHECK_HPP_
