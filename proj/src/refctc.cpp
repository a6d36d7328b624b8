// gramctc/src/refctc.cpp
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

#include "gramctc/refctc.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "gramctc/error.hpp"

namespace gramctc::refctc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kBlank = 0;

double LogAdd(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  return a > b ? a + std::log1p(std::exp(b - a))
               : b + std::log1p(std::exp(a - b));
}

}  // namespace

LossGrad ctc_loss_grad(ConstMatrixView logits, const UnitString& label,
                       std::span<const Unit> base_units) {
  const int num_frames = static_cast<int>(logits.rows());
  const int width = static_cast<int>(logits.cols());
  if (width != static_cast<int>(base_units.size()) + 1) {
    throw Error(ErrorKind::kDimensionMismatch,
                "CTC logits need " + std::to_string(base_units.size() + 1) +
                    " columns, got " + std::to_string(width));
  }

  // Extended label: blank, l1, blank, l2, ..., blank.
  const int num_states = 2 * static_cast<int>(label.size()) + 1;
  std::vector<int> ext(num_states, kBlank);
  for (std::size_t u = 0; u < label.size(); ++u) {
    int column = -1;
    for (std::size_t c = 0; c < base_units.size(); ++c) {
      if (base_units[c] == label[u]) column = static_cast<int>(c) + 1;
    }
    if (column < 0) {
      throw Error(ErrorKind::kUnknownUnit,
                  "label unit '" + utf8_encode(label[u]) +
                      "' is not a base unit");
    }
    ext[2 * u + 1] = column;
  }

  // Log-probabilities, row by row.
  std::vector<double> logp(static_cast<std::size_t>(num_frames) * width);
  for (int t = 0; t < num_frames; ++t) {
    double top = kNegInf;
    for (int k = 0; k < width; ++k) top = std::max(top, logits(t, k));
    double z = 0.0;
    for (int k = 0; k < width; ++k) z += std::exp(logits(t, k) - top);
    for (int k = 0; k < width; ++k) {
      logp[t * width + k] = logits(t, k) - top - std::log(z);
    }
  }
  auto lp = [&](int t, int k) { return logp[t * width + k]; };
  auto skip_allowed = [&](int s) {
    return s >= 2 && ext[s] != kBlank && ext[s] != ext[s - 2];
  };

  LossGrad out;
  if (num_frames == 0) {
    if (label.empty()) {
      out.grad = Matrix(0, width);
    } else {
      out.loss = std::numeric_limits<double>::infinity();
      out.status = AlignmentStatus::kImpossible;
    }
    return out;
  }

  // alpha[t][s]: prefix probability, emission at t included.
  std::vector<double> alpha(static_cast<std::size_t>(num_frames) * num_states,
                            kNegInf);
  auto A = [&](int t, int s) -> double& { return alpha[t * num_states + s]; };
  A(0, 0) = lp(0, ext[0]);
  if (num_states > 1) A(0, 1) = lp(0, ext[1]);
  for (int t = 1; t < num_frames; ++t) {
    for (int s = 0; s < num_states; ++s) {
      double sum = A(t - 1, s);
      if (s >= 1) sum = LogAdd(sum, A(t - 1, s - 1));
      if (skip_allowed(s)) sum = LogAdd(sum, A(t - 1, s - 2));
      if (sum != kNegInf) A(t, s) = sum + lp(t, ext[s]);
    }
  }
  double log_p = A(num_frames - 1, num_states - 1);
  if (num_states > 1) log_p = LogAdd(log_p, A(num_frames - 1, num_states - 2));
  if (log_p == kNegInf) {
    out.loss = std::numeric_limits<double>::infinity();
    out.status = AlignmentStatus::kImpossible;
    return out;
  }

  // beta[t][s]: suffix probability of frames t+1.., emission at t excluded.
  std::vector<double> beta(static_cast<std::size_t>(num_frames) * num_states,
                           kNegInf);
  auto B = [&](int t, int s) -> double& { return beta[t * num_states + s]; };
  B(num_frames - 1, num_states - 1) = 0.0;
  if (num_states > 1) B(num_frames - 1, num_states - 2) = 0.0;
  for (int t = num_frames - 2; t >= 0; --t) {
    for (int s = 0; s < num_states; ++s) {
      double sum = B(t + 1, s) + lp(t + 1, ext[s]);
      if (s + 1 < num_states) {
        sum = LogAdd(sum, B(t + 1, s + 1) + lp(t + 1, ext[s + 1]));
      }
      if (s + 2 < num_states && skip_allowed(s + 2)) {
        sum = LogAdd(sum, B(t + 1, s + 2) + lp(t + 1, ext[s + 2]));
      }
      B(t, s) = sum;
    }
  }

  out.loss = -log_p;
  out.grad = Matrix(num_frames, width);
  for (int t = 0; t < num_frames; ++t) {
    for (int k = 0; k < width; ++k) out.grad(t, k) = std::exp(lp(t, k));
    for (int s = 0; s < num_states; ++s) {
      const double occ = A(t, s) + B(t, s);
      if (occ != kNegInf) out.grad(t, ext[s]) -= std::exp(occ - log_p);
    }
  }
  return out;
}

}  // namespace gramctc::refctc
