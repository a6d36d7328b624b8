// gramctc/include/gramctc/io.hpp
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

#ifndef GRAMCTC_IO_HPP_
#define GRAMCTC_IO_HPP_

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "gramctc/gramselect.hpp"
#include "gramctc/matrix.hpp"
#include "gramctc/toytrain.hpp"
#include "gramctc/vocab.hpp"

namespace gramctc::io {

// Vocabulary file: UTF-8, one gram per line in id order, optional first line
// "#units: <concatenated base units>". Without the header the base units are
// all units appearing in the grams, in order of first appearance.
GramVocab read_vocab(std::istream& in);
GramVocab read_vocab_file(const std::string& path);
void write_vocab(std::ostream& out, const GramVocab& vocab);

// Logits file: "GCTC", version byte 1, uint32 T, uint32 V (little-endian),
// then T*V little-endian float64 row-major. read_logits also accepts CSV
// (T lines of V comma-separated numbers).
enum class MatrixFormat { kBinary, kCsv, kJson };
Matrix read_logits(std::istream& in);
Matrix read_logits_file(const std::string& path);
void write_matrix(std::ostream& out, const Matrix& m, MatrixFormat format);
void write_matrix_file(const std::string& path, const Matrix& m,
                       MatrixFormat format);

// Stats file: "count<TAB>gram" lines, descending by count.
void write_stats(std::ostream& out, const GramStats& stats);
GramStats read_stats(std::istream& in);

// Dataset: JSON lines {"features": [[...], ...], "label": "..."}.
void write_dataset(std::ostream& out, const std::vector<toy::Sample>& data);
std::vector<toy::Sample> read_dataset(std::istream& in);

// Loss history CSV: header "epoch,loss", epochs from 1.
void write_history(std::ostream& out, const std::vector<double>& history);

// Model file: JSON {"heads": [...]}, one entry per output head with its
// loss, stride, weight, window, vocabulary and parameters.
void write_model(std::ostream& out, const std::vector<toy::Head>& heads);
std::vector<toy::Head> read_model(std::istream& in);

}  // namespace gramctc::io

#endif  // GRAMCTC_IO_HPP_
