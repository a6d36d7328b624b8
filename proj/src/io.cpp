// gramctc/src/io.cpp
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

#include "gramctc/io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gramctc/error.hpp"

namespace gramctc::io {

using nlohmann::json;

namespace {

constexpr char kMagic[4] = {'G', 'C', 'T', 'C'};
constexpr std::uint8_t kVersion = 1;

std::ifstream OpenIn(const std::string& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw Error(ErrorKind::kIo, "cannot open '" + path + "'");
  return in;
}

void StripCr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

void PutU32(std::ostream& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.put(static_cast<char>((v >> (8 * b)) & 0xFF));
}

std::uint32_t GetU32(std::istream& in) {
  unsigned char bytes[4];
  if (!in.read(reinterpret_cast<char*>(bytes), 4)) {
    throw Error(ErrorKind::kFormat, "truncated logits header");
  }
  std::uint32_t v = 0;
  for (int b = 3; b >= 0; --b) v = (v << 8) | bytes[b];
  return v;
}

void PutF64(std::ostream& out, double value) {
  const auto bits = std::bit_cast<std::uint64_t>(value);
  for (int b = 0; b < 8; ++b) {
    out.put(static_cast<char>((bits >> (8 * b)) & 0xFF));
  }
}

double GetF64(std::istream& in) {
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char*>(bytes), 8)) {
    throw Error(ErrorKind::kFormat, "truncated logits payload");
  }
  std::uint64_t bits = 0;
  for (int b = 7; b >= 0; --b) bits = (bits << 8) | bytes[b];
  return std::bit_cast<double>(bits);
}

double ParseDouble(std::string_view text, std::size_t line_no) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
    text.remove_prefix(1);
  }
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) {
    text.remove_suffix(1);
  }
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorKind::kFormat, "bad number '" + std::string(text) +
                                        "' on line " + std::to_string(line_no));
  }
  return value;
}

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Matrix ReadCsv(std::istream& in) {
  std::vector<double> values;
  std::size_t rows = 0, cols = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    StripCr(line);
    if (line.empty()) continue;
    std::size_t count = 0, start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      values.push_back(ParseDouble(
          std::string_view(line).substr(start, comma == std::string::npos
                                                   ? std::string::npos
                                                   : comma - start),
          line_no));
      ++count;
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (rows == 0) {
      cols = count;
    } else if (count != cols) {
      throw Error(ErrorKind::kFormat,
                  "line " + std::to_string(line_no) + " has " +
                      std::to_string(count) + " columns, expected " +
                      std::to_string(cols));
    }
    ++rows;
  }
  return Matrix(rows, cols, std::move(values));
}

Matrix JsonToMatrix(const json& rows) {
  if (!rows.is_array()) throw Error(ErrorKind::kFormat, "matrix must be an array");
  std::vector<double> values;
  std::size_t cols = 0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const json& row = rows[r];
    if (!row.is_array()) throw Error(ErrorKind::kFormat, "matrix row must be an array");
    if (r == 0) {
      cols = row.size();
    } else if (row.size() != cols) {
      throw Error(ErrorKind::kFormat, "ragged matrix rows");
    }
    for (const json& v : row) values.push_back(v.get<double>());
  }
  return Matrix(rows.size(), cols, std::move(values));
}

json MatrixToJson(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return rows;
}

}  // namespace

GramVocab read_vocab(std::istream& in) {
  std::vector<UnitString> grams;
  std::optional<UnitString> header_units;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    StripCr(line);
    if (first && line.rfind("#units:", 0) == 0) {
      std::string_view rest = std::string_view(line).substr(7);
      if (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
      header_units = utf8_decode(rest);
      first = false;
      continue;
    }
    first = false;
    if (line.empty()) continue;
    grams.push_back(utf8_decode(line));
  }
  UnitString units;
  if (header_units) {
    units = *header_units;
  } else {
    for (const UnitString& g : grams) {
      for (Unit u : g) {
        if (units.find(u) == UnitString::npos) units.push_back(u);
      }
    }
  }
  return build_vocab(grams, std::span<const Unit>(units.data(), units.size()));
}

GramVocab read_vocab_file(const std::string& path) {
  auto in = OpenIn(path);
  return read_vocab(in);
}

void write_vocab(std::ostream& out, const GramVocab& vocab) {
  out << "#units: "
      << utf8_encode(std::u32string_view(vocab.base_units().data(),
                                         vocab.base_units().size()))
      << '\n';
  for (const Gram& g : vocab.grams()) out << utf8_encode(g.units) << '\n';
}

Matrix read_logits(std::istream& in) {
  char head[4] = {};
  in.read(head, 4);
  const std::streamsize got = in.gcount();
  if (got == 4 && std::equal(head, head + 4, kMagic)) {
    const int version = in.get();
    if (version != kVersion) {
      throw Error(ErrorKind::kFormat,
                  "unsupported logits version " + std::to_string(version));
    }
    const std::uint32_t rows = GetU32(in);
    const std::uint32_t cols = GetU32(in);
    std::vector<double> values(static_cast<std::size_t>(rows) * cols);
    for (double& v : values) v = GetF64(in);
    return Matrix(rows, cols, std::move(values));
  }
  std::string text(head, head + got);
  text.append(std::istreambuf_iterator<char>(in), {});
  const std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    try {
      return JsonToMatrix(json::parse(text));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::kFormat, std::string("logits json: ") + e.what());
    }
  }
  std::istringstream csv(text);
  return ReadCsv(csv);
}

Matrix read_logits_file(const std::string& path) {
  auto in = OpenIn(path, true);
  return read_logits(in);
}

void write_matrix(std::ostream& out, const Matrix& m, MatrixFormat format) {
  switch (format) {
    case MatrixFormat::kBinary:
      out.write(kMagic, 4);
      out.put(static_cast<char>(kVersion));
      PutU32(out, static_cast<std::uint32_t>(m.rows()));
      PutU32(out, static_cast<std::uint32_t>(m.cols()));
      for (double v : m.data()) PutF64(out, v);
      break;
    case MatrixFormat::kCsv:
      for (std::size_t r = 0; r < m.rows(); ++r) {
        const auto row = m.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) {
          if (c > 0) out << ',';
          out << FormatDouble(row[c]);
        }
        out << '\n';
      }
      break;
    case MatrixFormat::kJson:
      out << MatrixToJson(m).dump() << '\n';
      break;
  }
}

void write_matrix_file(const std::string& path, const Matrix& m,
                       MatrixFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write '" + path + "'");
  write_matrix(out, m, format);
}

void write_stats(std::ostream& out, const GramStats& stats) {
  for (const auto& [gram, count] : stats.sorted()) {
    out << count << '\t' << utf8_encode(gram) << '\n';
  }
}

GramStats read_stats(std::istream& in) {
  GramStats stats;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    StripCr(line);
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || tab + 1 >= line.size()) {
      throw Error(ErrorKind::kFormat,
                  "stats line " + std::to_string(line_no) +
                      " is not 'count<TAB>gram'");
    }
    std::int64_t count = 0;
    const auto [ptr, ec] =
        std::from_chars(line.data(), line.data() + tab, count);
    if (ec != std::errc() || ptr != line.data() + tab || count < 1) {
      throw Error(ErrorKind::kFormat,
                  "bad count on stats line " + std::to_string(line_no));
    }
    stats.counts[utf8_decode(std::string_view(line).substr(tab + 1))] += count;
  }
  return stats;
}

void write_dataset(std::ostream& out, const std::vector<toy::Sample>& data) {
  for (const toy::Sample& s : data) {
    json record;
    record["features"] = MatrixToJson(s.features);
    record["label"] = s.label.utf8();
    out << record.dump() << '\n';
  }
}

std::vector<toy::Sample> read_dataset(std::istream& in) {
  std::vector<toy::Sample> data;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json record = json::parse(line);
      data.push_back({JsonToMatrix(record.at("features")),
                      Label(utf8_decode(record.at("label").get<std::string>()))});
    } catch (const json::exception& e) {
      throw Error(ErrorKind::kFormat, "dataset line " +
                                          std::to_string(line_no) + ": " +
                                          e.what());
    }
  }
  return data;
}

void write_history(std::ostream& out, const std::vector<double>& history) {
  out << "epoch,loss\n";
  for (std::size_t e = 0; e < history.size(); ++e) {
    out << e + 1 << ',' << FormatDouble(history[e]) << '\n';
  }
}

namespace {

json HeadToJson(const toy::Head& head) {
  json j;
  j["loss"] = head.loss == toy::HeadLoss::kGram ? "gram" : "ctc";
  j["stride"] = head.stride;
  j["weight"] = head.weight;
  j["window"] = head.model.window();
  j["frame_dim"] = head.model.frame_dim();
  const auto& units = head.vocab.base_units();
  j["units"] = utf8_encode(std::u32string_view(units.data(), units.size()));
  json grams = json::array();
  for (const Gram& g : head.vocab.grams()) grams.push_back(utf8_encode(g.units));
  j["grams"] = grams;
  j["weights"] = MatrixToJson(head.model.weights());
  j["bias"] = head.model.bias();
  return j;
}

toy::Head HeadFromJson(const json& j) {
  const std::string loss = j.at("loss").get<std::string>();
  if (loss != "gram" && loss != "ctc") {
    throw Error(ErrorKind::kFormat, "unknown head loss '" + loss + "'");
  }
  GramVocab vocab = build_vocab(j.at("grams").get<std::vector<std::string>>(),
                                j.at("units").get<std::string>());
  const int frame_dim = j.at("frame_dim").get<int>();
  const int stride = j.at("stride").get<int>();
  if (stride < 1 || frame_dim % stride != 0) {
    throw Error(ErrorKind::kFormat, "inconsistent stride and frame_dim");
  }
  toy::Head head = toy::make_head(
      loss == "gram" ? toy::HeadLoss::kGram : toy::HeadLoss::kCtc,
      std::move(vocab), stride, j.at("window").get<int>(),
      frame_dim / stride, 0, j.at("weight").get<double>());
  Matrix weights = JsonToMatrix(j.at("weights"));
  auto bias = j.at("bias").get<std::vector<double>>();
  if (weights.rows() != head.model.weights().rows() ||
      weights.cols() != head.model.weights().cols() ||
      bias.size() != head.model.bias().size()) {
    throw Error(ErrorKind::kFormat, "model parameter shapes do not match");
  }
  head.model.weights() = std::move(weights);
  head.model.bias() = std::move(bias);
  return head;
}

}  // namespace

void write_model(std::ostream& out, const std::vector<toy::Head>& heads) {
  json heads_json = json::array();
  for (const toy::Head& h : heads) heads_json.push_back(HeadToJson(h));
  out << json{{"heads", heads_json}}.dump() << '\n';
}

std::vector<toy::Head> read_model(std::istream& in) {
  try {
    const json j = json::parse(in);
    std::vector<toy::Head> heads;
    for (const json& h : j.at("heads")) heads.push_back(HeadFromJson(h));
    if (heads.empty()) throw Error(ErrorKind::kFormat, "model has no heads");
    return heads;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kFormat, std::string("model file: ") + e.what());
  }
}

}  // namespace gramctc::io
