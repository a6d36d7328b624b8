// gramctc/include/gramctc/toytrain.hpp
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

#ifndef GRAMCTC_TOYTRAIN_HPP_
#define GRAMCTC_TOYTRAIN_HPP_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "gramctc/loss.hpp"
#include "gramctc/matrix.hpp"
#include "gramctc/vocab.hpp"

namespace gramctc::toy {

// Synthetic "acoustics": each label unit becomes frames_per_unit frames of a
// unit prototype plus Gaussian noise. Dimension k < |C| is the one-hot
// prototype of unit k, dimension |C| flags the first frame of every unit
// (so repeated units stay separable) and any further dimensions carry noise
// only.
struct SynthConfig {
  std::vector<Unit> base_units;
  int frames_per_unit = 4;
  int feature_dim = 8;
  double noise_sigma = 0.3;
  int num_samples = 200;
  std::uint64_t seed = 1;
  int min_label_length = 2;
  int max_label_length = 8;

  void validate() const;
};

struct Sample {
  Matrix features;  // T x d
  Label label;
};

std::vector<Sample> synth_dataset(const SynthConfig& config);

// Features for a given label; consumes noise from rng.
Matrix render_features(const Label& label, const SynthConfig& config,
                       std::mt19937_64& rng);

// Non-overlapping stacking of `stride` frames into one, zero-padding the
// tail: T x d -> ceil(T / stride) x (stride * d).
Matrix apply_stride(ConstMatrixView features, int stride);

// Linear map from a centred window of frames to |G'| logits.
class ToyModel {
 public:
  ToyModel() = default;
  // window must be odd; weights drawn N(0, init_scale^2) from seed.
  ToyModel(int window, int frame_dim, int num_outputs, std::uint64_t seed,
           double init_scale = 0.01);

  int window() const { return window_; }
  int frame_dim() const { return frame_dim_; }
  int num_outputs() const { return static_cast<int>(bias_.size()); }

  Matrix& weights() { return weights_; }
  const Matrix& weights() const { return weights_; }
  std::vector<double>& bias() { return bias_; }
  const std::vector<double>& bias() const { return bias_; }

  // T x frame_dim -> T x num_outputs.
  Matrix logits(ConstMatrixView frames) const;

  // Adds d loss / d params for the given logit gradient into grad_weights
  // and grad_bias (same shapes as the parameters).
  void accumulate_grad(ConstMatrixView frames, ConstMatrixView grad_logits,
                       Matrix& grad_weights,
                       std::vector<double>& grad_bias) const;

  std::size_t num_params() const { return weights_.data().size() + bias_.size(); }

 private:
  // Row t of the windowed input, zero outside [0, T).
  void window_input(ConstMatrixView frames, std::size_t t,
                    std::vector<double>& out) const;

  int window_ = 1;
  int frame_dim_ = 0;
  Matrix weights_;  // (window * frame_dim) x num_outputs
  std::vector<double> bias_;
};

enum class HeadLoss { kGram, kCtc };

// One output layer with its loss. A list of heads is the loss spec: a single
// gram head, a single CTC head, or both for joint training.
struct Head {
  HeadLoss loss = HeadLoss::kGram;
  GramVocab vocab;
  int stride = 1;
  double weight = 1.0;
  ToyModel model;
};

Head make_head(HeadLoss loss, GramVocab vocab, int stride, int window,
               int feature_dim, std::uint64_t seed, double weight = 1.0);

// Loss and logit gradient of one head on one sample.
LossGrad head_loss_grad(const Head& head, const Sample& sample);
Matrix head_logits(const Head& head, const Sample& sample);

struct TrainConfig {
  int epochs = 10;
  double learning_rate = 1e-3;
  double momentum = 0.99;
  std::uint64_t seed = 1;
};

struct TrainResult {
  std::vector<double> history;  // mean weighted loss per epoch
  std::vector<std::vector<double>> head_history;  // [head][epoch]
  std::vector<double> epoch_seconds;
  int skipped = 0;  // sample-epochs with an impossible alignment
};

// Batch-size-1 SGD with Nesterov momentum. Deterministic under config.seed.
// Throws Error(kDivergence) if a loss turns NaN.
TrainResult train(std::vector<Head>& heads, const std::vector<Sample>& data,
                  const TrainConfig& config);

struct CerResult {
  double cer = 0.0;  // mean of per-sample edits / reference length
  std::vector<int> edits;
  std::vector<int> ref_lengths;
};

CerResult evaluate_cer(const Head& head, const std::vector<Sample>& data,
                       std::size_t jobs = 1);

int edit_distance(std::u32string_view a, std::u32string_view b);

}  // namespace gramctc::toy

#endif  // GRAMCTC_TOYTRAIN_HPP_
