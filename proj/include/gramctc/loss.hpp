// gramctc/include/gramctc/loss.hpp
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

#ifndef GRAMCTC_LOSS_HPP_
#define GRAMCTC_LOSS_HPP_

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gramctc/error.hpp"
#include "gramctc/lattice.hpp"
#include "gramctc/matrix.hpp"
#include "gramctc/vocab.hpp"

namespace gramctc {

// T x |G'| log-probabilities; every row is normalized.
struct PosteriorMatrix {
  Matrix log_values;

  std::size_t num_frames() const { return log_values.rows(); }
  std::size_t num_symbols() const { return log_values.cols(); }
};

// Row-wise log-softmax with max shift. Throws on non-finite input.
PosteriorMatrix log_softmax(ConstMatrixView logits);

enum class AlignmentStatus {
  kOk,
  // T is shorter than the lattice's min_path_length(): p(l|x) = 0.
  kImpossible,
};

struct FBResult {
  Matrix log_alpha;  // T x |S|
  Matrix log_beta;   // T x |S|; includes the emission at t
  double log_likelihood = 0.0;
  // log Z_t = log sum_s alpha_t(s) beta_t(s) / y_t(s); equals
  // log_likelihood at every t.
  std::vector<double> z_per_t;
  AlignmentStatus status = AlignmentStatus::kOk;

  double max_consistency_gap() const;
};

// Throw Error(kDimensionMismatch) if the posterior width differs from the
// lattice's vocabulary.
Matrix forward(const Lattice& lattice, const PosteriorMatrix& post);
Matrix backward(const Lattice& lattice, const PosteriorMatrix& post);
FBResult likelihood(const Lattice& lattice, const PosteriorMatrix& post);

struct LossGrad {
  double loss = 0.0;  // -ln p(l|x)
  Matrix grad;        // d loss / d logits; empty when impossible
  AlignmentStatus status = AlignmentStatus::kOk;

  bool ok() const { return status == AlignmentStatus::kOk; }
};

LossGrad gram_ctc_loss_grad(ConstMatrixView logits, const Lattice& lattice);
LossGrad gram_ctc_loss_grad(ConstMatrixView logits, const Label& label,
                            const GramVocab& vocab);

// Batch entry point for callers holding many (logits, label) pairs. Items are
// independent; failures are reported per item instead of aborting the batch.
struct BatchItem {
  LossGrad result;
  std::optional<Error> error;
};
std::vector<BatchItem> batch_loss_grad(std::span<const ConstMatrixView> logits,
                                       std::span<const Label> labels,
                                       const GramVocab& vocab,
                                       std::size_t jobs = 1);

// A weighted loss term. Terms with the same slot share one logits matrix and
// must agree on its shape; different slots may have different frame counts
// (e.g. heads running at different strides).
struct JointTerm {
  std::function<LossGrad()> evaluate;
  double weight = 1.0;
  std::size_t slot = 0;
};

struct JointLossGrad {
  double loss = 0.0;
  std::vector<Matrix> grads;  // indexed by slot, weighted
  std::vector<double> term_losses;  // unweighted
  AlignmentStatus status = AlignmentStatus::kOk;

  bool ok() const { return status == AlignmentStatus::kOk; }
};

// Weights must be non-negative with at least one positive. A zero-weight
// term is evaluated but contributes nothing.
JointLossGrad joint_loss(std::span<const JointTerm> terms);

}  // namespace gramctc

#endif  // GRAMCTC_LOSS_HPP_
