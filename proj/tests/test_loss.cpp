// gramctc/tests/test_loss.cpp
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

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "gramctc/check.hpp"
#include "gramctc/error.hpp"
#include "gramctc/lattice.hpp"
#include "gramctc/logmath.hpp"
#include "gramctc/loss.hpp"
#include "gramctc/refctc.hpp"
#include "helpers.hpp"

namespace gramctc {
namespace {

using testing::LogitsFromProbs;
using testing::Rows;
using testing::U;
using testing::Vocab;

TEST_CASE("single frame, single unit") {
  const GramVocab v = Vocab({"a", "b"}, "ab");
  const Matrix logits = LogitsFromProbs({{0.2, 0.5, 0.3}});
  const LossGrad lg = gram_ctc_loss_grad(logits, Label(U("a")), v);
  REQUIRE(lg.ok());
  CHECK(lg.loss == doctest::Approx(-std::log(0.5)).epsilon(1e-14));
  CHECK(lg.grad(0, 0) == doctest::Approx(0.2));
  CHECK(lg.grad(0, 1) == doctest::Approx(0.5 - 1.0));
  CHECK(lg.grad(0, 2) == doctest::Approx(0.3));
}

TEST_CASE("two frames of a uniform blank/a distribution") {
  const GramVocab v = Vocab({"a"}, "a");
  const Matrix logits = LogitsFromProbs({{0.5, 0.5}, {0.5, 0.5}});
  // Paths: __ -> "", _a a_ aa -> "a".
  CHECK(std::exp(-gram_ctc_loss_grad(logits, Label(), v).loss) ==
        doctest::Approx(0.25).epsilon(1e-14));
  CHECK(std::exp(-gram_ctc_loss_grad(logits, Label(U("a")), v).loss) ==
        doctest::Approx(0.75).epsilon(1e-14));
  CHECK_FALSE(gram_ctc_loss_grad(logits, Label(U("aa")), v).ok());
}

TEST_CASE("a bi-gram adds its own paths") {
  const GramVocab uni = Vocab({"a", "b"}, "ab");
  const GramVocab bi = Vocab({"a", "b", "ab"}, "ab");
  const Matrix p_uni = LogitsFromProbs({{0.1, 0.6, 0.3}, {0.1, 0.2, 0.7}});
  // With one frame only the bi-gram can produce "ab".
  const Matrix one = LogitsFromProbs({{0.1, 0.2, 0.3, 0.4}});
  CHECK_FALSE(
      gram_ctc_loss_grad(LogitsFromProbs({{0.2, 0.5, 0.3}}), Label(U("ab")), uni)
          .ok());
  CHECK(std::exp(-gram_ctc_loss_grad(one, Label(U("ab")), bi).loss) ==
        doctest::Approx(0.4));
  CHECK(std::exp(-gram_ctc_loss_grad(p_uni, Label(U("ab")), uni).loss) ==
        doctest::Approx(0.6 * 0.7));
}

TEST_CASE("CTC special case matches the reference implementation") {
  std::mt19937_64 rng(5);
  const auto units = testing::Units("abcd");
  const GramVocab v = unigram_vocab(units);
  std::uniform_int_distribution<int> unit(0, 3), len(0, 6), frames(1, 16);
  for (int n = 0; n < 40; ++n) {
    UnitString label;
    for (int k = len(rng); k > 0; --k) label.push_back(units[unit(rng)]);
    const Matrix logits = check::random_logits(rng, frames(rng), 5, 2.0);
    const LossGrad mine = gram_ctc_loss_grad(logits, Label(label), v);
    const LossGrad ref = refctc::ctc_loss_grad(logits, label, units);
    REQUIRE(mine.ok() == ref.ok());
    if (!mine.ok()) continue;
    CHECK(std::abs(mine.loss - ref.loss) <= 1e-10);
    CHECK(max_abs_diff(mine.grad, ref.grad) <= 1e-10);
  }
}

TEST_CASE("log Z_t equals the log-likelihood at every frame") {
  std::mt19937_64 rng(8);
  check::InstanceSpec spec;
  spec.max_symbols = 8;
  spec.max_gram_len = 3;
  spec.max_label_len = 5;
  spec.max_frames = 12;
  spec.feasible = true;
  for (int n = 0; n < 50; ++n) {
    const auto inst = check::random_instance(rng, spec);
    const FBResult fb = likelihood(build_lattice(inst.vocab, inst.label),
                                   log_softmax(inst.logits));
    REQUIRE(fb.status == AlignmentStatus::kOk);
    CHECK(fb.z_per_t.size() == inst.logits.rows());
    CHECK(fb.max_consistency_gap() <= 1e-9);
  }
}

TEST_CASE("impossible alignment") {
  const GramVocab v = Vocab({"a", "b"}, "ab");
  const Matrix logits = LogitsFromProbs({{0.2, 0.5, 0.3}});
  const LossGrad lg = gram_ctc_loss_grad(logits, Label(U("ab")), v);
  CHECK(lg.status == AlignmentStatus::kImpossible);
  CHECK(std::isinf(lg.loss));
  CHECK(lg.loss > 0);
  CHECK(lg.grad.rows() == 0);
}

TEST_CASE("zero frames") {
  const GramVocab v = Vocab({"a"}, "a");
  const Matrix none(0, 2);
  const LossGrad empty = gram_ctc_loss_grad(none, Label(), v);
  REQUIRE(empty.ok());
  CHECK(empty.loss == 0.0);
  CHECK_FALSE(gram_ctc_loss_grad(none, Label(U("a")), v).ok());
}

TEST_CASE("input validation") {
  const GramVocab v = Vocab({"a"}, "a");
  const Matrix wide(2, 3, 0.0);
  try {
    gram_ctc_loss_grad(wide, Label(U("a")), v);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kDimensionMismatch);
  }
  Matrix bad(1, 2, 0.0);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(log_softmax(bad), Error);
  bad(0, 1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(log_softmax(bad), Error);
}

TEST_CASE("large logits stay finite") {
  std::mt19937_64 rng(21);
  const GramVocab v = Vocab({"a", "b", "ab", "ba"}, "ab");
  const Matrix logits = check::random_logits(rng, 30, 5, 200.0);
  const LossGrad lg = gram_ctc_loss_grad(logits, Label(U("abab")), v);
  REQUIRE(lg.ok());
  CHECK(std::isfinite(lg.loss));
  for (double g : lg.grad.data()) CHECK(std::isfinite(g));
}

TEST_CASE("gradient rows sum to zero") {
  std::mt19937_64 rng(3);
  const GramVocab v = Vocab({"a", "b", "ab", "aa"}, "ab");
  const Matrix logits = check::random_logits(rng, 7, 5);
  const LossGrad lg = gram_ctc_loss_grad(logits, Label(U("aab")), v);
  REQUIRE(lg.ok());
  for (std::size_t t = 0; t < logits.rows(); ++t) {
    double sum = 0.0;
    for (double g : lg.grad.row(t)) sum += g;
    CHECK(std::abs(sum) <= 1e-12);
  }
}

TEST_CASE("same-gram label gradient matches finite differences") {
  std::mt19937_64 rng(4);
  const GramVocab v = Vocab({"a", "aa", "b"}, "ab");
  const Lattice lat = build_lattice(v, Label(U("aaaa")));
  const Matrix logits = check::random_logits(rng, 6, 4);
  const LossGrad lg = gram_ctc_loss_grad(logits, lat);
  REQUIRE(lg.ok());
  const Matrix fd = check::finite_difference_grad(
      logits, [&](ConstMatrixView x) { return gram_ctc_loss_grad(x, lat).loss; },
      1e-5);
  CHECK(check::max_relative_error(lg.grad, fd, 1e-6) <= 1e-4);
}

TEST_CASE("forward and backward agree with likelihood") {
  std::mt19937_64 rng(6);
  const GramVocab v = Vocab({"a", "b", "ab"}, "ab");
  const Lattice lat = build_lattice(v, Label(U("abb")));
  const PosteriorMatrix post = log_softmax(check::random_logits(rng, 5, 4));
  const FBResult fb = likelihood(lat, post);
  CHECK(forward(lat, post) == fb.log_alpha);
  CHECK(backward(lat, post) == fb.log_beta);
  std::vector<double> finals;
  for (int f : lat.finals()) finals.push_back(fb.log_alpha(4, f));
  CHECK(log_sum_exp(finals) == doctest::Approx(fb.log_likelihood));
}

TEST_CASE("log_softmax rows normalise") {
  const PosteriorMatrix p = log_softmax(Rows({{1, 2, 3}, {-1000, 0, 1000}}));
  for (std::size_t t = 0; t < 2; ++t) {
    CHECK(log_sum_exp(p.log_values.row(t)) == doctest::Approx(0.0));
  }
}

TEST_CASE("batch results keep input order and report per-item errors") {
  std::mt19937_64 rng(10);
  const GramVocab v = Vocab({"a", "b", "ab"}, "ab");
  std::vector<Matrix> m;
  std::vector<Label> labels;
  for (int k = 0; k < 9; ++k) {
    m.push_back(check::random_logits(rng, 3 + k, 4));
    labels.emplace_back(U(k % 2 ? "ab" : "ba"));
  }
  m[4] = Matrix(3, 7, 0.0);
  labels[6] = Label(U("abababababababababab"));
  std::vector<ConstMatrixView> views(m.begin(), m.end());
  const auto serial = batch_loss_grad(views, labels, v, 1);
  const auto parallel = batch_loss_grad(views, labels, v, 4);
  REQUIRE(serial.size() == 9);
  for (std::size_t k = 0; k < 9; ++k) {
    CHECK(serial[k].error.has_value() == (k == 4));
    if (k == 4) continue;
    CHECK(serial[k].result.loss == parallel[k].result.loss);
    CHECK(serial[k].result.grad == parallel[k].result.grad);
    if (k != 6) {
      CHECK(serial[k].result.loss ==
            gram_ctc_loss_grad(m[k], labels[k], v).loss);
    }
  }
  CHECK(serial[4].error->kind() == ErrorKind::kDimensionMismatch);
  CHECK(std::string(serial[4].error->what()).find("item 4") !=
        std::string::npos);
  CHECK_FALSE(serial[6].result.ok());
  CHECK(batch_loss_grad({}, {}, v, 2).empty());
  CHECK_THROWS_AS(batch_loss_grad(views, std::span(labels).first(2), v, 1),
                  Error);
}

TEST_CASE("joint loss is the weighted sum of its terms") {
  std::mt19937_64 rng(12);
  const GramVocab gv = Vocab({"a", "b", "ab"}, "ab");
  const GramVocab cv = unigram_vocab(testing::Units("ab"));
  const Matrix g_logits = check::random_logits(rng, 3, 4);
  const Matrix c_logits = check::random_logits(rng, 6, 3);
  const Label l(U("ab"));
  const LossGrad g = gram_ctc_loss_grad(g_logits, l, gv);
  const LossGrad c = gram_ctc_loss_grad(c_logits, l, cv);
  std::vector<JointTerm> terms = {
      {[&] { return gram_ctc_loss_grad(g_logits, l, gv); }, 0.7, 0},
      {[&] { return gram_ctc_loss_grad(c_logits, l, cv); }, 0.3, 1}};
  const JointLossGrad j = joint_loss(terms);
  REQUIRE(j.ok());
  CHECK(j.loss == doctest::Approx(0.7 * g.loss + 0.3 * c.loss).epsilon(1e-14));
  REQUIRE(j.grads.size() == 2);
  CHECK(j.grads[0](1, 2) == doctest::Approx(0.7 * g.grad(1, 2)));
  CHECK(j.grads[1](4, 1) == doctest::Approx(0.3 * c.grad(4, 1)));
  CHECK(j.term_losses == std::vector<double>{g.loss, c.loss});

  SUBCASE("zero weight drops a term") {
    terms[1].weight = 0.0;
    const JointLossGrad only = joint_loss(terms);
    CHECK(only.loss == doctest::Approx(0.7 * g.loss));
    for (double v : only.grads[1].data()) CHECK(v == 0.0);
  }
  SUBCASE("bad weights") {
    terms[0].weight = -1.0;
    CHECK_THROWS_AS(joint_loss(terms), Error);
    terms[0].weight = 0.0;
    terms[1].weight = 0.0;
    CHECK_THROWS_AS(joint_loss(terms), Error);
    terms[1].weight = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(joint_loss(terms), Error);
  }
  SUBCASE("terms sharing a slot need the same shape") {
    terms[1].slot = 0;
    try {
      joint_loss(terms);
      FAIL("no throw");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kDimensionMismatch);
    }
  }
  SUBCASE("an impossible term makes the joint loss impossible") {
    const Label hard(U("abababab"));
    terms[1].evaluate = [&] { return gram_ctc_loss_grad(c_logits, hard, cv); };
    const JointLossGrad bad = joint_loss(terms);
    CHECK_FALSE(bad.ok());
    CHECK(std::isinf(bad.loss));
  }
  CHECK_THROWS_AS(joint_loss({}), Error);
}

}  // namespace
}  // namespace gramctc
