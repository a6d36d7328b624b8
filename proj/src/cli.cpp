// gramctc/src/cli.cpp
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

#include "gramctc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gramctc/check.hpp"
#include "gramctc/decode.hpp"
#include "gramctc/error.hpp"
#include "gramctc/gramselect.hpp"
#include "gramctc/io.hpp"
#include "gramctc/lattice.hpp"
#include "gramctc/loss.hpp"
#include "gramctc/oracle.hpp"
#include "gramctc/toytrain.hpp"

namespace gramctc::cli {

namespace {

using nlohmann::ordered_json;

struct Globals {
  std::string vocab_path;
  std::uint64_t seed = 1;
  std::string format = "binary";
  std::optional<double> tolerance;
  std::size_t jobs = 1;
};

// JSON has no infinity; impossible values are written as null.
ordered_json Number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

ordered_json ErrorRecord(std::string_view kind, const std::string& message) {
  return {{"error", {{"kind", kind}, {"message", message}}}};
}

io::MatrixFormat ParseFormat(const std::string& name) {
  if (name == "csv") return io::MatrixFormat::kCsv;
  if (name == "json") return io::MatrixFormat::kJson;
  return io::MatrixFormat::kBinary;
}

GramVocab RequireVocab(const Globals& g) {
  if (g.vocab_path.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "--vocab is required");
  }
  return io::read_vocab_file(g.vocab_path);
}

std::vector<std::string> ReadLines(const std::string& path) {
  std::ifstream file;
  std::istream* in = &std::cin;
  if (path != "-") {
    file.open(path);
    if (!file) throw Error(ErrorKind::kIo, "cannot open '" + path + "'");
    in = &file;
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(*in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

std::vector<Unit> UnitsArg(const std::string& units) {
  const UnitString decoded = utf8_decode(units);
  if (decoded.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "--units must not be empty");
  }
  return {decoded.begin(), decoded.end()};
}

std::ofstream OpenOut(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write '" + path + "'");
  return out;
}

ordered_json GramList(const std::vector<UnitString>& grams) {
  ordered_json list = ordered_json::array();
  for (const auto& g : grams) list.push_back(utf8_encode(g));
  return list;
}

// ---- loss ---------------------------------------------------------------

struct LossArgs {
  std::vector<std::string> logits;
  std::vector<std::string> labels;
  std::string grad_out;
};

int RunLoss(const Globals& g, const LossArgs& a, std::ostream& out) {
  if (a.logits.size() != a.labels.size()) {
    throw Error(ErrorKind::kInvalidArgument,
                "--logits and --label must be given the same number of times");
  }
  if (!a.grad_out.empty() && a.logits.size() != 1) {
    throw Error(ErrorKind::kInvalidArgument,
                "--grad-out needs exactly one logits file");
  }
  const GramVocab vocab = RequireVocab(g);
  std::vector<Matrix> matrices;
  std::vector<Label> labels;
  for (std::size_t k = 0; k < a.logits.size(); ++k) {
    matrices.push_back(io::read_logits_file(a.logits[k]));
    labels.push_back(encode_label(vocab, a.labels[k]));
  }
  std::vector<ConstMatrixView> views(matrices.begin(), matrices.end());
  const auto items = batch_loss_grad(views, labels, vocab, g.jobs);

  bool failed = false;
  ordered_json results = ordered_json::array();
  for (std::size_t k = 0; k < items.size(); ++k) {
    ordered_json r;
    r["index"] = k;
    r["logits"] = a.logits[k];
    r["label"] = a.labels[k];
    r["frames"] = matrices[k].rows();
    r["symbols"] = matrices[k].cols();
    if (items[k].error) {
      failed = true;
      r["status"] = "error";
      r["error"] = {{"kind", to_string(items[k].error->kind())},
                    {"message", items[k].error->what()}};
    } else if (!items[k].result.ok()) {
      r["status"] = "impossible_alignment";
      r["loss"] = nullptr;
    } else {
      r["status"] = "ok";
      r["loss"] = Number(items[k].result.loss);
      r["log_likelihood"] = Number(-items[k].result.loss);
    }
    results.push_back(r);
  }
  if (!a.grad_out.empty() && !items[0].error && items[0].result.ok()) {
    io::write_matrix_file(a.grad_out, items[0].result.grad, ParseFormat(g.format));
  }
  out << ordered_json{{"results", results}}.dump() << '\n';
  return failed ? 1 : 0;
}

// ---- grad-check ---------------------------------------------------------

struct GradCheckArgs {
  std::string logits;
  std::string label;
  int instances = 50;
  int max_tau = 5;
  int max_frames = 10;
  int max_label_len = 6;
  double step = 1e-5;
  double floor = 1e-6;
};

int RunGradCheck(const Globals& g, const GradCheckArgs& a, std::ostream& out) {
  const double tol = g.tolerance.value_or(1e-4);
  struct Case {
    GramVocab vocab;
    Label label;
    Matrix logits;
  };
  std::vector<Case> cases;
  if (!a.logits.empty()) {
    const GramVocab vocab = RequireVocab(g);
    cases.push_back({vocab, encode_label(vocab, a.label),
                     io::read_logits_file(a.logits)});
  } else {
    std::mt19937_64 rng(g.seed);
    check::InstanceSpec spec;
    spec.max_gram_len = a.max_tau;
    spec.max_symbols = 2 * a.max_tau + 2;
    spec.max_base_units = 3;
    spec.max_label_len = a.max_label_len;
    spec.max_frames = a.max_frames;
    spec.feasible = true;
    for (int n = 0; n < a.instances; ++n) {
      auto inst = check::random_instance(rng, spec);
      cases.push_back({std::move(inst.vocab), std::move(inst.label),
                       std::move(inst.logits)});
    }
  }

  double worst = 0.0;
  int skipped = 0;
  for (const Case& c : cases) {
    const Lattice lattice = build_lattice(c.vocab, c.label);
    const LossGrad lg = gram_ctc_loss_grad(c.logits, lattice);
    if (!lg.ok()) {
      ++skipped;
      continue;
    }
    const Matrix numeric = check::finite_difference_grad(
        c.logits,
        [&](ConstMatrixView x) { return gram_ctc_loss_grad(x, lattice).loss; },
        a.step);
    worst = std::max(worst, check::max_relative_error(lg.grad, numeric, a.floor));
  }
  const bool pass = worst <= tol;
  out << ordered_json{{"status", pass ? "PASS" : "FAIL"},
                      {"instances", cases.size()},
                      {"skipped", skipped},
                      {"max_rel_err", worst},
                      {"tolerance", tol},
                      {"step", a.step}}
             .dump()
      << '\n';
  return pass ? 0 : 1;
}

// ---- decode -------------------------------------------------------------

struct DecodeArgs {
  std::string logits;
  int beam = 0;
  int n_best = 1;
  bool dump_framewise = false;
};

int RunDecode(const Globals& g, const DecodeArgs& a, std::ostream& out) {
  const GramVocab vocab = RequireVocab(g);
  const Matrix logits = io::read_logits_file(a.logits);
  const PosteriorMatrix post = log_softmax(logits);
  if (post.num_symbols() != static_cast<std::size_t>(vocab.total_symbols())) {
    throw Error(ErrorKind::kDimensionMismatch,
                "logits have " + std::to_string(post.num_symbols()) +
                    " columns, vocabulary has " +
                    std::to_string(vocab.total_symbols()) + " symbols");
  }
  if (a.dump_framewise) {
    out << format_framewise(greedy_decode(post, vocab).frames, vocab) << '\n';
    return 0;
  }
  if (a.beam <= 0) {
    const GreedyResult r = greedy_decode(post, vocab);
    out << ordered_json{{"mode", "greedy"},
                        {"label", r.label.utf8()},
                        {"frames", r.frames},
                        {"framewise", format_framewise(r.frames, vocab)}}
               .dump()
        << '\n';
    return 0;
  }
  ordered_json hyps = ordered_json::array();
  for (const Hypothesis& h : beam_search(post, vocab, a.beam, a.n_best)) {
    hyps.push_back({{"label", h.label.utf8()}, {"log_prob", Number(h.log_prob)}});
  }
  out << ordered_json{{"mode", "beam"}, {"beam_width", a.beam},
                      {"hypotheses", hyps}}
             .dump()
      << '\n';
  return 0;
}

// ---- oracle-check / normalize-check ---------------------------------------

struct SmallCheckArgs {
  int max_frames = 4;
  int instances = 200;
  int max_symbols = 4;
  int max_label_len = 3;
};

check::InstanceSpec SmallSpec(const SmallCheckArgs& a) {
  check::InstanceSpec spec;
  spec.max_symbols = a.max_symbols;
  spec.max_base_units = a.max_symbols - 1;
  spec.max_gram_len = 2;
  spec.max_label_len = a.max_label_len;
  spec.min_frames = 1;
  spec.max_frames = a.max_frames;
  return spec;
}

int RunOracleCheck(const Globals& g, const SmallCheckArgs& a,
                   std::ostream& out) {
  const double tol = g.tolerance.value_or(1e-9);
  std::mt19937_64 rng(g.seed);
  const auto spec = SmallSpec(a);
  double worst = 0.0, worst_gap = 0.0;
  int mismatched_zero = 0;
  for (int n = 0; n < a.instances; ++n) {
    const auto inst = check::random_instance(rng, spec);
    const PosteriorMatrix post = log_softmax(inst.logits);
    const FBResult fb = likelihood(build_lattice(inst.vocab, inst.label), post);
    const double brute = oracle::brute_force_likelihood(post, inst.label, inst.vocab);
    const double dp = std::exp(fb.log_likelihood);
    if (brute == 0.0) {
      if (dp != 0.0) ++mismatched_zero;
      continue;
    }
    worst = std::max(worst, std::abs(dp - brute) / brute);
    worst_gap = std::max(worst_gap, fb.max_consistency_gap());
  }
  const bool pass = worst <= tol && worst_gap <= tol && mismatched_zero == 0;
  out << ordered_json{{"status", pass ? "PASS" : "FAIL"},
                      {"instances", a.instances},
                      {"max_rel_err", worst},
                      {"max_consistency_gap", worst_gap},
                      {"zero_mismatches", mismatched_zero},
                      {"tolerance", tol}}
             .dump()
      << '\n';
  return pass ? 0 : 1;
}

int RunNormalizeCheck(const Globals& g, const SmallCheckArgs& a,
                      std::ostream& out) {
  const double tol = g.tolerance.value_or(1e-9);
  std::mt19937_64 rng(g.seed);
  const auto spec = SmallSpec(a);
  double worst = 0.0;
  for (int n = 0; n < a.instances; ++n) {
    const auto inst = check::random_instance(rng, spec);
    const PosteriorMatrix post = log_softmax(inst.logits);
    double total = 0.0;
    for (const auto& [units, p] :
         oracle::brute_force_label_distribution(post, inst.vocab)) {
      const FBResult fb = likelihood(build_lattice(inst.vocab, Label(units)), post);
      total += std::exp(fb.log_likelihood);
    }
    worst = std::max(worst, std::abs(total - 1.0));
  }
  const bool pass = worst <= tol;
  out << ordered_json{{"status", pass ? "PASS" : "FAIL"},
                      {"instances", a.instances},
                      {"max_abs_err", worst},
                      {"tolerance", tol}}
             .dump()
      << '\n';
  return pass ? 0 : 1;
}

// ---- gram selection -------------------------------------------------------

struct GramCountArgs {
  std::string corpus;
  std::string units;
  int max_len = 2;
  std::string out;
};

int RunGramCount(const GramCountArgs& a, std::ostream& out) {
  const auto units = UnitsArg(a.units);
  const auto lines = ReadLines(a.corpus);
  const GramStats stats = count_corpus_grams(lines, a.max_len, units);
  if (a.out.empty()) {
    io::write_stats(out, stats);
    return 0;
  }
  auto file = OpenOut(a.out);
  io::write_stats(file, stats);
  out << ordered_json{{"distinct_grams", stats.counts.size()},
                      {"skipped_units", stats.skipped_units},
                      {"out", a.out}}
             .dump()
      << '\n';
  return 0;
}

struct PolicyArgs {
  std::optional<std::int64_t> min_count;
  std::optional<std::size_t> top_k;
  bool keep_all = false;
  int max_len = 0;

  FilterPolicy Resolve(std::int64_t default_min_count) const {
    FilterPolicy policy = FilterPolicy::MinCount(default_min_count);
    if (keep_all) policy = FilterPolicy::KeepAll();
    if (top_k) policy = FilterPolicy::TopKPerLength(*top_k);
    if (min_count) policy = FilterPolicy::MinCount(*min_count);
    if (max_len > 0) policy.max_len = max_len;
    return policy;
  }
};

struct GramFilterArgs {
  std::string stats;
  std::string units;
  PolicyArgs policy;
  std::string out;
};

int RunGramFilter(const GramFilterArgs& a, std::ostream& out) {
  const auto units = UnitsArg(a.units);
  std::ifstream in(a.stats);
  if (!in) throw Error(ErrorKind::kIo, "cannot open '" + a.stats + "'");
  const GramStats stats = io::read_stats(in);
  const auto grams = filter_grams(stats, a.policy.Resolve(2), units);
  const GramVocab vocab = build_vocab(grams, units);
  if (a.out.empty()) {
    io::write_vocab(out, vocab);
    return 0;
  }
  auto file = OpenOut(a.out);
  io::write_vocab(file, vocab);
  out << ordered_json{{"grams", GramList(grams)}, {"out", a.out}}.dump() << '\n';
  return 0;
}

struct ToyArgs {
  int frames_per_unit = 4;
  int dim = 0;  // 0: |C| + 3
  double sigma = 0.3;
  int epochs = 10;
  double lr = 1e-3;
  double momentum = 0.99;
  int stride = 1;
  int window = 3;
};

struct GramRefineArgs {
  std::string corpus;
  std::string units;
  int max_len = 2;
  PolicyArgs initial;
  PolicyArgs refine;
  ToyArgs toy;
  int samples = 0;
  std::string out;
};

int RunGramRefine(const Globals& g, const GramRefineArgs& a, std::ostream& out) {
  const auto units = UnitsArg(a.units);
  const auto lines = ReadLines(a.corpus);
  RefineConfig config;
  config.synth.base_units = units;
  config.synth.frames_per_unit = a.toy.frames_per_unit;
  config.synth.feature_dim =
      a.toy.dim > 0 ? a.toy.dim : static_cast<int>(units.size()) + 3;
  config.synth.noise_sigma = a.toy.sigma;
  config.synth.num_samples = a.samples;
  config.synth.seed = g.seed;
  config.train = {a.toy.epochs, a.toy.lr, a.toy.momentum, g.seed};
  config.stride = a.toy.stride;
  config.window = a.toy.window;
  PolicyArgs refine = a.refine;
  const RefineResult result =
      refine_pipeline(lines, a.max_len, a.initial.Resolve(2), config,
                      refine.Resolve(1));
  if (!a.out.empty()) {
    auto file = OpenOut(a.out);
    io::write_vocab(file, result.vocab);
  }
  ordered_json history = ordered_json::array();
  for (double h : result.report.train_history) history.push_back(Number(h));
  ordered_json usage = ordered_json::array();
  for (const auto& [gram, count] : result.report.usage_stats.sorted()) {
    usage.push_back({{"gram", utf8_encode(gram)}, {"count", count}});
  }
  out << ordered_json{{"initial", GramList(result.report.initial)},
                      {"kept", GramList(result.report.kept)},
                      {"dropped", GramList(result.report.dropped)},
                      {"usage", usage},
                      {"train_history", history},
                      {"skipped", result.report.skipped}}
             .dump()
      << '\n';
  return 0;
}

// ---- toy training ---------------------------------------------------------

struct SynthArgs {
  std::string units;
  int samples = 200;
  int frames_per_unit = 4;
  int dim = 0;
  double sigma = 0.3;
  int min_len = 2;
  int max_len = 8;
  std::string out;
};

int RunSynth(const Globals& g, const SynthArgs& a, std::ostream& out) {
  toy::SynthConfig config;
  config.base_units = UnitsArg(a.units);
  config.num_samples = a.samples;
  config.frames_per_unit = a.frames_per_unit;
  config.feature_dim =
      a.dim > 0 ? a.dim : static_cast<int>(config.base_units.size()) + 3;
  config.noise_sigma = a.sigma;
  config.min_label_length = a.min_len;
  config.max_label_length = a.max_len;
  config.seed = g.seed;
  const auto data = toy::synth_dataset(config);
  if (a.out.empty()) {
    io::write_dataset(out, data);
    return 0;
  }
  auto file = OpenOut(a.out);
  io::write_dataset(file, data);
  out << ordered_json{{"samples", data.size()},
                      {"feature_dim", config.feature_dim},
                      {"out", a.out}}
             .dump()
      << '\n';
  return 0;
}

std::vector<toy::Sample> LoadDataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open '" + path + "'");
  return io::read_dataset(in);
}

struct TrainArgs {
  std::string data;
  std::string loss = "gram";
  double gram_weight = 1.0;
  double ctc_weight = 1.0;
  int ctc_stride = 0;  // 0: same as --stride
  ToyArgs toy;
  std::string model_out;
  std::string history_out;
};

int RunTrain(const Globals& g, const TrainArgs& a, std::ostream& out) {
  const auto data = LoadDataset(a.data);
  if (data.empty()) throw Error(ErrorKind::kInvalidArgument, "dataset is empty");
  const GramVocab vocab = RequireVocab(g);
  const int dim = static_cast<int>(data.front().features.cols());
  std::vector<toy::Head> heads;
  if (a.loss == "gram" || a.loss == "joint") {
    heads.push_back(toy::make_head(toy::HeadLoss::kGram, vocab, a.toy.stride,
                                   a.toy.window, dim, g.seed,
                                   a.loss == "joint" ? a.gram_weight : 1.0));
  }
  if (a.loss == "ctc" || a.loss == "joint") {
    heads.push_back(toy::make_head(
        toy::HeadLoss::kCtc, unigram_vocab(vocab.base_units()),
        a.ctc_stride > 0 ? a.ctc_stride : a.toy.stride, a.toy.window, dim,
        g.seed + 1, a.loss == "joint" ? a.ctc_weight : 1.0));
  }
  const toy::TrainResult result =
      toy::train(heads, data, {a.toy.epochs, a.toy.lr, a.toy.momentum, g.seed});
  if (!a.model_out.empty()) {
    auto file = OpenOut(a.model_out);
    io::write_model(file, heads);
  }
  if (!a.history_out.empty()) {
    auto file = OpenOut(a.history_out);
    io::write_history(file, result.history);
  }
  ordered_json history = ordered_json::array();
  for (double h : result.history) history.push_back(Number(h));
  ordered_json per_head = ordered_json::array();
  for (const auto& hh : result.head_history) {
    ordered_json list = ordered_json::array();
    for (double h : hh) list.push_back(Number(h));
    per_head.push_back(list);
  }
  out << ordered_json{{"loss", a.loss},
                      {"epochs", a.toy.epochs},
                      {"history", history},
                      {"head_history", per_head},
                      {"skipped", result.skipped}}
             .dump()
      << '\n';
  return 0;
}

struct EvalArgs {
  std::string data;
  std::string model;
  std::size_t head = 0;
};

int RunEval(const Globals& g, const EvalArgs& a, std::ostream& out) {
  const auto data = LoadDataset(a.data);
  std::ifstream in(a.model);
  if (!in) throw Error(ErrorKind::kIo, "cannot open '" + a.model + "'");
  const auto heads = io::read_model(in);
  if (a.head >= heads.size()) {
    throw Error(ErrorKind::kInvalidArgument,
                "model has " + std::to_string(heads.size()) + " heads");
  }
  const toy::CerResult cer = toy::evaluate_cer(heads[a.head], data, g.jobs);
  out << ordered_json{{"cer", cer.cer},
                      {"samples", data.size()},
                      {"edits", cer.edits},
                      {"ref_lengths", cer.ref_lengths}}
             .dump()
      << '\n';
  return 0;
}

void AddPolicy(CLI::App* cmd, PolicyArgs& p, const std::string& prefix) {
  cmd->add_option("--" + prefix + "min-count", p.min_count,
                  "Keep multi-unit grams seen at least this often");
  cmd->add_option("--" + prefix + "top-k", p.top_k,
                  "Keep the K most frequent grams of each length >= 2");
  cmd->add_flag("--" + prefix + "keep-all", p.keep_all, "Keep every gram");
  cmd->add_option("--" + prefix + "max-gram-len", p.max_len,
                  "Drop grams longer than this");
}

void AddToy(CLI::App* cmd, ToyArgs& t) {
  cmd->add_option("--frames-per-unit", t.frames_per_unit);
  cmd->add_option("--dim", t.dim, "Feature dimension (default |C|+3)");
  cmd->add_option("--sigma", t.sigma);
  cmd->add_option("--epochs", t.epochs);
  cmd->add_option("--lr", t.lr);
  cmd->add_option("--momentum", t.momentum);
  cmd->add_option("--stride", t.stride);
  cmd->add_option("--window", t.window, "Odd context window in strided frames");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Gram-CTC loss, decoding and gram selection", "gramctc"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--vocab", g.vocab_path, "Vocabulary file");
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--format", g.format, "Matrix output format")
      ->check(CLI::IsMember({"binary", "csv", "json"}));
  app.add_option("--tolerance", g.tolerance, "Check tolerance");
  app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::PositiveNumber);

  LossArgs loss_args;
  auto* loss = app.add_subcommand("loss", "Loss (and gradient) of logits files");
  loss->add_option("--logits", loss_args.logits)->required();
  loss->add_option("--label", loss_args.labels)->required();
  loss->add_option("--grad-out", loss_args.grad_out, "Write the gradient here");

  GradCheckArgs gc_args;
  auto* gc = app.add_subcommand("grad-check", "Finite-difference gradient check");
  gc->add_option("--logits", gc_args.logits);
  gc->add_option("--label", gc_args.label);
  gc->add_option("--instances", gc_args.instances);
  gc->add_option("--max-tau", gc_args.max_tau);
  gc->add_option("--max-T", gc_args.max_frames);
  gc->add_option("--max-label-len", gc_args.max_label_len);
  gc->add_option("--step", gc_args.step);
  gc->add_option("--floor", gc_args.floor, "Relative error denominator floor");

  DecodeArgs dec_args;
  auto* dec = app.add_subcommand("decode", "Greedy or beam decoding");
  dec->add_option("--logits", dec_args.logits)->required();
  dec->add_option("--beam", dec_args.beam, "Beam width (0: greedy)");
  dec->add_option("--n-best", dec_args.n_best);
  dec->add_flag("--dump-framewise", dec_args.dump_framewise,
                "Print the per-frame argmax as 'a|_|bc'");

  SmallCheckArgs oc_args;
  auto* oc = app.add_subcommand("oracle-check", "DP likelihood vs path enumeration");
  oc->add_option("--max-T", oc_args.max_frames);
  oc->add_option("--instances", oc_args.instances);
  oc->add_option("--max-symbols", oc_args.max_symbols);
  oc->add_option("--max-label-len", oc_args.max_label_len);

  SmallCheckArgs nc_args;
  nc_args.instances = 50;
  auto* nc = app.add_subcommand("normalize-check",
                                "Likelihoods over all labels sum to one");
  nc->add_option("--max-T", nc_args.max_frames);
  nc->add_option("--instances", nc_args.instances);
  nc->add_option("--max-symbols", nc_args.max_symbols);

  GramCountArgs cnt_args;
  auto* cnt = app.add_subcommand("gram-count", "Count corpus grams");
  cnt->add_option("--corpus", cnt_args.corpus, "Corpus file, '-' for stdin")->required();
  cnt->add_option("--units", cnt_args.units, "Base units")->required();
  cnt->add_option("--max-len", cnt_args.max_len);
  cnt->add_option("--out", cnt_args.out);

  GramFilterArgs flt_args;
  auto* flt = app.add_subcommand("gram-filter", "Select grams from a stats file");
  flt->add_option("--stats", flt_args.stats)->required();
  flt->add_option("--units", flt_args.units)->required();
  AddPolicy(flt, flt_args.policy, "");
  flt->add_option("--out", flt_args.out, "Vocabulary file to write");

  GramRefineArgs ref_args;
  ref_args.toy.stride = 2;
  auto* ref = app.add_subcommand("gram-refine", "Count, train, decode, refine");
  ref->add_option("--corpus", ref_args.corpus)->required();
  ref->add_option("--units", ref_args.units)->required();
  ref->add_option("--max-len", ref_args.max_len);
  AddPolicy(ref, ref_args.initial, "initial-");
  AddPolicy(ref, ref_args.refine, "refine-");
  AddToy(ref, ref_args.toy);
  ref->add_option("--samples", ref_args.samples, "Cap on rendered words (0: all)");
  ref->add_option("--out", ref_args.out, "Vocabulary file to write");

  SynthArgs syn_args;
  auto* syn = app.add_subcommand("synth", "Generate a synthetic dataset");
  syn->add_option("--units", syn_args.units)->required();
  syn->add_option("--samples", syn_args.samples);
  syn->add_option("--frames-per-unit", syn_args.frames_per_unit);
  syn->add_option("--dim", syn_args.dim);
  syn->add_option("--sigma", syn_args.sigma);
  syn->add_option("--min-len", syn_args.min_len);
  syn->add_option("--max-len", syn_args.max_len);
  syn->add_option("--out", syn_args.out);

  TrainArgs tr_args;
  auto* tr = app.add_subcommand("train-toy", "Train the toy model");
  tr->add_option("--data", tr_args.data)->required();
  tr->add_option("--loss", tr_args.loss)
      ->check(CLI::IsMember({"gram", "ctc", "joint"}));
  tr->add_option("--gram-weight", tr_args.gram_weight);
  tr->add_option("--ctc-weight", tr_args.ctc_weight);
  tr->add_option("--ctc-stride", tr_args.ctc_stride);
  AddToy(tr, tr_args.toy);
  tr->add_option("--model-out", tr_args.model_out);
  tr->add_option("--history-out", tr_args.history_out);

  EvalArgs ev_args;
  auto* ev = app.add_subcommand("eval", "Character error rate of a trained model");
  ev->add_option("--data", ev_args.data)->required();
  ev->add_option("--model", ev_args.model)->required();
  ev->add_option("--head", ev_args.head);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    out << ErrorRecord("usage", e.what()).dump() << '\n';
    err << e.what() << '\n';
    return 2;
  }

  try {
    if (*loss) return RunLoss(g, loss_args, out);
    if (*gc) return RunGradCheck(g, gc_args, out);
    if (*dec) return RunDecode(g, dec_args, out);
    if (*oc) return RunOracleCheck(g, oc_args, out);
    if (*nc) return RunNormalizeCheck(g, nc_args, out);
    if (*cnt) return RunGramCount(cnt_args, out);
    if (*flt) return RunGramFilter(flt_args, out);
    if (*ref) return RunGramRefine(g, ref_args, out);
    if (*syn) return RunSynth(g, syn_args, out);
    if (*tr) return RunTrain(g, tr_args, out);
    if (*ev) return RunEval(g, ev_args, out);
  } catch (const Error& e) {
    out << ErrorRecord(to_string(e.kind()), e.what()).dump() << '\n';
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace gramctc::cli
