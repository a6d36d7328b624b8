// gramctc/src/loss.cpp
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

#include "gramctc/loss.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "gramctc/error.hpp"
#include "gramctc/logmath.hpp"

namespace gramctc {

namespace {

void CheckWidth(const Lattice& lattice, const PosteriorMatrix& post) {
  if (post.num_symbols() != static_cast<std::size_t>(lattice.total_symbols())) {
    throw Error(ErrorKind::kDimensionMismatch,
                "posteriors have " + std::to_string(post.num_symbols()) +
                    " columns, vocabulary has " +
                    std::to_string(lattice.total_symbols()) + " symbols");
  }
}

// log sum_{s in ids} row[s].
inline double LogSumOver(std::span<const double> row,
                         std::span<const int> ids) {
  double max_value = kLogZero;
  for (int s : ids) max_value = std::max(max_value, row[s]);
  if (max_value == kLogZero) return kLogZero;
  double sum = 0.0;
  for (int s : ids) sum += std::exp(row[s] - max_value);
  return max_value + std::log(sum);
}

}  // namespace

double FBResult::max_consistency_gap() const {
  double worst = 0.0;
  for (double z : z_per_t) {
    if (z == log_likelihood) continue;  // also covers -inf == -inf
    worst = std::max(worst, std::abs(z - log_likelihood));
  }
  return worst;
}

PosteriorMatrix log_softmax(ConstMatrixView logits) {
  PosteriorMatrix post{Matrix(logits.rows(), logits.cols())};
  for (std::size_t t = 0; t < logits.rows(); ++t) {
    const auto in = logits.row(t);
    auto out = post.log_values.row(t);
    double max_value = -std::numeric_limits<double>::infinity();
    for (double v : in) {
      if (!std::isfinite(v)) {
        throw Error(ErrorKind::kInvalidArgument,
                    "non-finite logit at frame " + std::to_string(t));
      }
      max_value = std::max(max_value, v);
    }
    double sum = 0.0;
    for (double v : in) sum += std::exp(v - max_value);
    const double log_norm = max_value + std::log(sum);
    for (std::size_t k = 0; k < in.size(); ++k) out[k] = in[k] - log_norm;
  }
  return post;
}

Matrix forward(const Lattice& lattice, const PosteriorMatrix& post) {
  CheckWidth(lattice, post);
  const std::size_t frames = post.num_frames();
  const std::size_t n = lattice.num_states();
  const auto& states = lattice.states();
  Matrix alpha(frames, n, kLogZero);
  if (frames == 0) return alpha;

  const auto y0 = post.log_values.row(0);
  for (int s : lattice.initials()) alpha(0, s) = y0[states[s].gram_id];

  for (std::size_t t = 1; t < frames; ++t) {
    const auto prev = alpha.row(t - 1);
    const auto y = post.log_values.row(t);
    auto cur = alpha.row(t);
    for (std::size_t s = 0; s < n; ++s) {
      const double in = LogSumOver(prev, lattice.preds(s));
      if (in != kLogZero) cur[s] = in + y[states[s].gram_id];
    }
  }
  return alpha;
}

Matrix backward(const Lattice& lattice, const PosteriorMatrix& post) {
  CheckWidth(lattice, post);
  const std::size_t frames = post.num_frames();
  const std::size_t n = lattice.num_states();
  const auto& states = lattice.states();
  Matrix beta(frames, n, kLogZero);
  if (frames == 0) return beta;

  const auto y_last = post.log_values.row(frames - 1);
  for (int s : lattice.finals()) {
    beta(frames - 1, s) = y_last[states[s].gram_id];
  }

  for (std::size_t t = frames - 1; t-- > 0;) {
    const auto next = beta.row(t + 1);
    const auto y = post.log_values.row(t);
    auto cur = beta.row(t);
    for (std::size_t s = 0; s < n; ++s) {
      const double out = LogSumOver(next, lattice.succs(s));
      if (out != kLogZero) cur[s] = out + y[states[s].gram_id];
    }
  }
  return beta;
}

FBResult likelihood(const Lattice& lattice, const PosteriorMatrix& post) {
  FBResult fb;
  fb.log_alpha = forward(lattice, post);
  fb.log_beta = backward(lattice, post);
  const std::size_t frames = post.num_frames();
  const auto& states = lattice.states();

  if (frames < static_cast<std::size_t>(lattice.min_path_length())) {
    fb.status = AlignmentStatus::kImpossible;
  }
  if (frames == 0) {
    fb.log_likelihood = lattice.label().empty() ? 0.0 : kLogZero;
    return fb;
  }
  fb.log_likelihood =
      LogSumOver(fb.log_alpha.row(frames - 1), lattice.finals());

  fb.z_per_t.resize(frames);
  std::vector<double> terms(lattice.num_states());
  for (std::size_t t = 0; t < frames; ++t) {
    const auto a = fb.log_alpha.row(t);
    const auto b = fb.log_beta.row(t);
    const auto y = post.log_values.row(t);
    for (std::size_t s = 0; s < terms.size(); ++s) {
      terms[s] = (a[s] == kLogZero || b[s] == kLogZero)
                     ? kLogZero
                     : a[s] + b[s] - y[states[s].gram_id];
    }
    fb.z_per_t[t] = log_sum_exp(terms);
  }
  return fb;
}

LossGrad gram_ctc_loss_grad(ConstMatrixView logits, const Lattice& lattice) {
  const PosteriorMatrix post = log_softmax(logits);
  const FBResult fb = likelihood(lattice, post);

  LossGrad out;
  if (fb.status == AlignmentStatus::kImpossible) {
    out.loss = std::numeric_limits<double>::infinity();
    out.status = AlignmentStatus::kImpossible;
    return out;
  }
  out.loss = -fb.log_likelihood;

  const std::size_t frames = post.num_frames();
  const std::size_t width = post.num_symbols();
  const auto& states = lattice.states();
  out.grad = Matrix(frames, width);
  std::vector<double> occupancy(width);
  for (std::size_t t = 0; t < frames; ++t) {
    const auto a = fb.log_alpha.row(t);
    const auto b = fb.log_beta.row(t);
    const auto y = post.log_values.row(t);
    std::fill(occupancy.begin(), occupancy.end(), kLogZero);
    for (std::size_t s = 0; s < states.size(); ++s) {
      if (a[s] == kLogZero || b[s] == kLogZero) continue;
      double& acc = occupancy[states[s].gram_id];
      acc = log_add(acc, a[s] + b[s]);
    }
    const double log_z = fb.z_per_t[t];
    auto g = out.grad.row(t);
    for (std::size_t k = 0; k < width; ++k) {
      g[k] = std::exp(y[k]);
      if (occupancy[k] != kLogZero) {
        g[k] -= std::exp(occupancy[k] - y[k] - log_z);
      }
    }
  }
  return out;
}

LossGrad gram_ctc_loss_grad(ConstMatrixView logits, const Label& label,
                            const GramVocab& vocab) {
  if (logits.cols() != static_cast<std::size_t>(vocab.total_symbols())) {
    throw Error(ErrorKind::kDimensionMismatch,
                "logits have " + std::to_string(logits.cols()) +
                    " columns, vocabulary has " +
                    std::to_string(vocab.total_symbols()) + " symbols");
  }
  return gram_ctc_loss_grad(logits, build_lattice(vocab, label));
}

std::vector<BatchItem> batch_loss_grad(std::span<const ConstMatrixView> logits,
                                       std::span<const Label> labels,
                                       const GramVocab& vocab,
                                       std::size_t jobs) {
  if (logits.size() != labels.size()) {
    throw Error(ErrorKind::kDimensionMismatch,
                std::to_string(logits.size()) + " logits matrices for " +
                    std::to_string(labels.size()) + " labels");
  }
  std::vector<BatchItem> items(logits.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < items.size(); k = next++) {
      try {
        items[k].result = gram_ctc_loss_grad(logits[k], labels[k], vocab);
      } catch (const Error& e) {
        items[k].error = Error(e.kind(),
                               "item " + std::to_string(k) + ": " + e.what());
      }
    }
  };
  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(1, items.size()));
  std::vector<std::jthread> pool;
  for (std::size_t w = 1; w < jobs; ++w) pool.emplace_back(worker);
  worker();
  return items;
}

JointLossGrad joint_loss(std::span<const JointTerm> terms) {
  if (terms.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "joint loss needs a term");
  }
  bool any_positive = false;
  std::size_t num_slots = 0;
  for (const JointTerm& term : terms) {
    if (!(term.weight >= 0.0) || !std::isfinite(term.weight)) {
      throw Error(ErrorKind::kInvalidArgument,
                  "joint loss weights must be finite and non-negative");
    }
    any_positive |= term.weight > 0.0;
    num_slots = std::max(num_slots, term.slot + 1);
  }
  if (!any_positive) {
    throw Error(ErrorKind::kInvalidArgument,
                "joint loss needs at least one positive weight");
  }

  JointLossGrad out;
  out.grads.resize(num_slots);
  for (const JointTerm& term : terms) {
    LossGrad lg = term.evaluate();
    out.term_losses.push_back(lg.loss);
    if (!lg.ok()) {
      if (term.weight > 0.0) out.status = AlignmentStatus::kImpossible;
      continue;
    }
    Matrix& slot = out.grads[term.slot];
    if (slot.empty()) {
      slot = Matrix(lg.grad.rows(), lg.grad.cols());
    } else if (slot.rows() != lg.grad.rows() ||
               slot.cols() != lg.grad.cols()) {
      throw Error(ErrorKind::kDimensionMismatch,
                  "joint loss terms sharing slot " +
                      std::to_string(term.slot) + " disagree on shape (" +
                      std::to_string(slot.rows()) + " vs " +
                      std::to_string(lg.grad.rows()) + " frames)");
    }
    if (term.weight == 0.0) continue;
    out.loss += term.weight * lg.loss;
    lg.grad *= term.weight;
    slot += lg.grad;
  }
  if (!out.ok()) {
    out.loss = std::numeric_limits<double>::infinity();
    out.grads.clear();
  }
  return out;
}

}  // namespace gramctc
