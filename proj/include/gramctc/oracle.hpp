// gramctc/include/gramctc/oracle.hpp
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

#ifndef GRAMCTC_ORACLE_HPP_
#define GRAMCTC_ORACLE_HPP_

#include <cstdint>
#include <map>
#include <span>

#include "gramctc/loss.hpp"
#include "gramctc/vocab.hpp"

namespace gramctc::oracle {

inline constexpr std::uint64_t kDefaultPathCap = 1'000'000;

// Merge adjacent identical gram ids, drop blanks, concatenate. Repeats are
// judged by vocabulary entry, so ['a', 'ab'] gives "aab".
Label collapse(std::span<const int> path, const GramVocab& vocab);

// |G'|^T saturated at UINT64_MAX.
std::uint64_t path_count(std::size_t num_symbols, std::size_t num_frames);

// Sum of prod_t y over all paths collapsing to label, by enumeration in
// probability space. Throws Error(kCapExceeded) if |G'|^T > cap.
double brute_force_likelihood(const PosteriorMatrix& post, const Label& label,
                              const GramVocab& vocab,
                              std::uint64_t cap = kDefaultPathCap);

std::map<UnitString, double> brute_force_label_distribution(
    const PosteriorMatrix& post, const GramVocab& vocab,
    std::uint64_t cap = kDefaultPathCap);

}  // namespace gramctc::oracle

#endif  // GRAMCTC_ORACLE_HPP_
