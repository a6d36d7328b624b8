// gramctc/src/toytrain.cpp
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

#include "gramctc/toytrain.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numeric>
#include <thread>

#include "gramctc/decode.hpp"
#include "gramctc/error.hpp"
#include "gramctc/refctc.hpp"

namespace gramctc::toy {

void SynthConfig::validate() const {
  if (base_units.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "synth config has no base units");
  }
  if (frames_per_unit < 1) {
    throw Error(ErrorKind::kInvalidArgument, "frames_per_unit must be >= 1");
  }
  if (feature_dim < static_cast<int>(base_units.size()) + 1) {
    throw Error(ErrorKind::kInvalidArgument,
                "feature_dim must be at least |C| + 1 = " +
                    std::to_string(base_units.size() + 1));
  }
  if (!(noise_sigma >= 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "noise_sigma must be >= 0");
  }
  if (num_samples < 0 || min_label_length < 1 ||
      max_label_length < min_label_length) {
    throw Error(ErrorKind::kInvalidArgument, "bad sample count or lengths");
  }
}

Matrix render_features(const Label& label, const SynthConfig& config,
                       std::mt19937_64& rng) {
  const int r = config.frames_per_unit;
  const std::size_t onset_dim = config.base_units.size();
  Matrix features(label.size() * r, config.feature_dim);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (std::size_t u = 0; u < label.size(); ++u) {
    const auto pos = std::find(config.base_units.begin(),
                               config.base_units.end(), label[u]);
    if (pos == config.base_units.end()) {
      throw Error(ErrorKind::kUnknownUnit,
                  "cannot render unit '" + utf8_encode(label[u]) + "'");
    }
    const auto unit_dim =
        static_cast<std::size_t>(pos - config.base_units.begin());
    for (int k = 0; k < r; ++k) {
      auto row = features.row(u * r + k);
      row[unit_dim] = 1.0;
      if (k == 0) row[onset_dim] = 1.0;
    }
  }
  if (config.noise_sigma > 0.0) {
    for (double& v : features.data()) v += config.noise_sigma * noise(rng);
  }
  return features;
}

std::vector<Sample> synth_dataset(const SynthConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed);
  std::uniform_int_distribution<int> length_dist(config.min_label_length,
                                                 config.max_label_length);
  std::uniform_int_distribution<std::size_t> unit_dist(
      0, config.base_units.size() - 1);
  std::vector<Sample> data;
  data.reserve(config.num_samples);
  for (int n = 0; n < config.num_samples; ++n) {
    UnitString units;
    const int length = length_dist(rng);
    for (int k = 0; k < length; ++k) {
      units.push_back(config.base_units[unit_dist(rng)]);
    }
    Label label(std::move(units));
    Matrix features = render_features(label, config, rng);
    data.push_back({std::move(features), std::move(label)});
  }
  return data;
}

Matrix apply_stride(ConstMatrixView features, int stride) {
  if (stride < 1) {
    throw Error(ErrorKind::kInvalidArgument, "stride must be >= 1");
  }
  const std::size_t frames = features.rows();
  const std::size_t dim = features.cols();
  const std::size_t out_frames = (frames + stride - 1) / stride;
  Matrix out(out_frames, dim * stride);
  for (std::size_t t = 0; t < frames; ++t) {
    const auto in = features.row(t);
    auto dst = out.row(t / stride).subspan((t % stride) * dim, dim);
    std::copy(in.begin(), in.end(), dst.begin());
  }
  return out;
}

ToyModel::ToyModel(int window, int frame_dim, int num_outputs,
                   std::uint64_t seed, double init_scale)
    : window_(window),
      frame_dim_(frame_dim),
      weights_(static_cast<std::size_t>(window) * frame_dim, num_outputs),
      bias_(num_outputs, 0.0) {
  if (window < 1 || window % 2 == 0) {
    throw Error(ErrorKind::kInvalidArgument, "window must be a positive odd number");
  }
  if (frame_dim < 1 || num_outputs < 1) {
    throw Error(ErrorKind::kInvalidArgument, "model dimensions must be positive");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> init(0.0, init_scale);
  for (double& w : weights_.data()) w = init(rng);
}

void ToyModel::window_input(ConstMatrixView frames, std::size_t t,
                            std::vector<double>& out) const {
  out.assign(static_cast<std::size_t>(window_) * frame_dim_, 0.0);
  const int half = window_ / 2;
  for (int w = 0; w < window_; ++w) {
    const long src = static_cast<long>(t) + w - half;
    if (src < 0 || src >= static_cast<long>(frames.rows())) continue;
    const auto row = frames.row(src);
    std::copy(row.begin(), row.end(), out.begin() + w * frame_dim_);
  }
}

Matrix ToyModel::logits(ConstMatrixView frames) const {
  if (frames.cols() != static_cast<std::size_t>(frame_dim_)) {
    throw Error(ErrorKind::kDimensionMismatch,
                "model expects frames of dimension " +
                    std::to_string(frame_dim_) + ", got " +
                    std::to_string(frames.cols()));
  }
  const std::size_t outputs = bias_.size();
  Matrix out(frames.rows(), outputs);
  std::vector<double> input;
  for (std::size_t t = 0; t < frames.rows(); ++t) {
    window_input(frames, t, input);
    auto row = out.row(t);
    std::copy(bias_.begin(), bias_.end(), row.begin());
    for (std::size_t i = 0; i < input.size(); ++i) {
      const double x = input[i];
      if (x == 0.0) continue;
      const auto w = weights_.row(i);
      for (std::size_t k = 0; k < outputs; ++k) row[k] += x * w[k];
    }
  }
  return out;
}

void ToyModel::accumulate_grad(ConstMatrixView frames,
                               ConstMatrixView grad_logits,
                               Matrix& grad_weights,
                               std::vector<double>& grad_bias) const {
  const std::size_t outputs = bias_.size();
  std::vector<double> input;
  for (std::size_t t = 0; t < frames.rows(); ++t) {
    window_input(frames, t, input);
    const auto g = grad_logits.row(t);
    for (std::size_t k = 0; k < outputs; ++k) grad_bias[k] += g[k];
    for (std::size_t i = 0; i < input.size(); ++i) {
      const double x = input[i];
      if (x == 0.0) continue;
      auto gw = grad_weights.row(i);
      for (std::size_t k = 0; k < outputs; ++k) gw[k] += x * g[k];
    }
  }
}

Head make_head(HeadLoss loss, GramVocab vocab, int stride, int window,
               int feature_dim, std::uint64_t seed, double weight) {
  if (loss == HeadLoss::kCtc && vocab.tau() != 1) {
    throw Error(ErrorKind::kInvalidArgument,
                "a CTC head needs a uni-gram vocabulary");
  }
  Head head;
  head.loss = loss;
  head.stride = stride;
  head.weight = weight;
  head.model = ToyModel(window, feature_dim * stride, vocab.total_symbols(), seed);
  head.vocab = std::move(vocab);
  return head;
}

Matrix head_logits(const Head& head, const Sample& sample) {
  const Matrix frames = apply_stride(sample.features, head.stride);
  return head.model.logits(frames);
}

namespace {

LossGrad LossFromLogits(const Head& head, const Matrix& logits,
                        const Label& label) {
  if (head.loss == HeadLoss::kCtc) {
    return refctc::ctc_loss_grad(logits, label.units(),
                                 head.vocab.base_units());
  }
  return gram_ctc_loss_grad(logits, label, head.vocab);
}

struct Velocity {
  Matrix weights;
  std::vector<double> bias;
};

// Nesterov momentum with the model holding the look-ahead point
// phi = theta + mu * v, so each step is a single pass over the parameters:
//   v' = mu * v - lr * g(phi),   phi' = phi + (1 + mu) * v' - mu * v.
void NesterovStep(std::span<double> phi, std::span<double> v,
                  std::span<const double> g, double mu, double lr) {
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double next = mu * v[i] - lr * g[i];
    phi[i] += (1.0 + mu) * next - mu * v[i];
    v[i] = next;
  }
}

// Moves the model from phi back to theta = phi - mu * v.
void LeaveLookAhead(ToyModel& model, const Velocity& v, double mu) {
  auto w = model.weights().data();
  const auto vw = v.weights.data();
  for (std::size_t i = 0; i < w.size(); ++i) w[i] -= mu * vw[i];
  auto& b = model.bias();
  for (std::size_t i = 0; i < b.size(); ++i) b[i] -= mu * v.bias[i];
}

}  // namespace

LossGrad head_loss_grad(const Head& head, const Sample& sample) {
  return LossFromLogits(head, head_logits(head, sample), sample.label);
}

TrainResult train(std::vector<Head>& heads, const std::vector<Sample>& data,
                  const TrainConfig& config) {
  if (heads.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "training needs at least one head");
  }
  if (config.epochs < 0 || !(config.learning_rate >= 0.0) ||
      !(config.momentum >= 0.0 && config.momentum < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "bad training configuration");
  }
  const std::size_t num_heads = heads.size();
  std::vector<Velocity> velocity, grads;
  for (const Head& h : heads) {
    const Matrix& w = h.model.weights();
    velocity.push_back({Matrix(w.rows(), w.cols()),
                        std::vector<double>(h.model.bias().size(), 0.0)});
    grads.push_back(velocity.back());
  }

  TrainResult result;
  result.head_history.resize(num_heads);
  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);

  std::vector<double> sample_loss(data.size());
  std::vector<std::vector<double>> sample_head_loss(
      num_heads, std::vector<double>(data.size()));
  std::vector<bool> counted(data.size());
  std::vector<Matrix> frames(num_heads);
  std::vector<Matrix> logits(num_heads);
  const double mu = config.momentum;
  const double lr = config.learning_rate;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    std::shuffle(order.begin(), order.end(), rng);
    std::fill(counted.begin(), counted.end(), false);

    for (std::size_t n : order) {
      const Sample& sample = data[n];
      // The models sit at the look-ahead point, where Nesterov takes the
      // gradient.
      for (std::size_t h = 0; h < num_heads; ++h) {
        frames[h] = apply_stride(sample.features, heads[h].stride);
        logits[h] = heads[h].model.logits(frames[h]);
        for (double v : logits[h].data()) {
          if (!std::isfinite(v)) {
            throw Error(ErrorKind::kDivergence,
                        "non-finite logits at epoch " + std::to_string(epoch) +
                            ", sample " + std::to_string(n));
          }
        }
      }
      std::vector<JointTerm> terms;
      for (std::size_t h = 0; h < num_heads; ++h) {
        terms.push_back({[&, h] {
                           return LossFromLogits(heads[h], logits[h],
                                                 sample.label);
                         },
                         heads[h].weight, h});
      }
      const JointLossGrad joint = joint_loss(terms);

      if (!joint.ok()) {
        ++result.skipped;
        continue;
      }
      if (!std::isfinite(joint.loss)) {
        throw Error(ErrorKind::kDivergence,
                    "loss is " + std::to_string(joint.loss) + " at epoch " +
                        std::to_string(epoch) + ", sample " +
                        std::to_string(n));
      }
      sample_loss[n] = joint.loss;
      counted[n] = true;
      for (std::size_t h = 0; h < num_heads; ++h) {
        sample_head_loss[h][n] = joint.term_losses[h];
      }

      for (std::size_t h = 0; h < num_heads; ++h) {
        ToyModel& model = heads[h].model;
        Velocity& g = grads[h];
        g.weights.fill(0.0);
        std::fill(g.bias.begin(), g.bias.end(), 0.0);
        model.accumulate_grad(frames[h], joint.grads[h], g.weights, g.bias);
        NesterovStep(model.weights().data(), velocity[h].weights.data(),
                     g.weights.data(), mu, lr);
        NesterovStep(model.bias(), velocity[h].bias, g.bias, mu, lr);
      }
    }

    // Summed in sample order so the history does not depend on the shuffle.
    double total = 0.0;
    std::vector<double> head_total(num_heads, 0.0);
    std::size_t used = 0;
    for (std::size_t n = 0; n < data.size(); ++n) {
      if (!counted[n]) continue;
      ++used;
      total += sample_loss[n];
      for (std::size_t h = 0; h < num_heads; ++h) {
        head_total[h] += sample_head_loss[h][n];
      }
    }
    const double denom = used > 0 ? static_cast<double>(used) : 1.0;
    result.history.push_back(total / denom);
    for (std::size_t h = 0; h < num_heads; ++h) {
      result.head_history[h].push_back(head_total[h] / denom);
    }
    result.epoch_seconds.push_back(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count());
  }
  for (std::size_t h = 0; h < num_heads; ++h) {
    LeaveLookAhead(heads[h].model, velocity[h], mu);
  }
  return result;
}

int edit_distance(std::u32string_view a, std::u32string_view b) {
  std::vector<int> row(b.size() + 1);
  std::iota(row.begin(), row.end(), 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    int diag = row[0];
    row[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const int up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1,
                         diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

CerResult evaluate_cer(const Head& head, const std::vector<Sample>& data,
                       std::size_t jobs) {
  CerResult result;
  result.edits.resize(data.size());
  result.ref_lengths.resize(data.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t n = next++; n < data.size(); n = next++) {
      const PosteriorMatrix post = log_softmax(head_logits(head, data[n]));
      const GreedyResult decoded = greedy_decode(post, head.vocab);
      result.edits[n] =
          edit_distance(decoded.label.units(), data[n].label.units());
      result.ref_lengths[n] = static_cast<int>(data[n].label.size());
    }
  };
  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(1, data.size()));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < jobs; ++w) pool.emplace_back(worker);
    worker();
  }
  double sum = 0.0;
  for (std::size_t n = 0; n < data.size(); ++n) {
    sum += static_cast<double>(result.edits[n]) /
           std::max(1, result.ref_lengths[n]);
  }
  result.cer = data.empty() ? 0.0 : sum / static_cast<double>(data.size());
  return result;
}

}  // namespace gramctc::toy
