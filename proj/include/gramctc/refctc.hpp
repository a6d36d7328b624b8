// gramctc/include/gramctc/refctc.hpp
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

#ifndef GRAMCTC_REFCTC_HPP_
#define GRAMCTC_REFCTC_HPP_

#include <span>

#include "gramctc/loss.hpp"
#include "gramctc/matrix.hpp"
#include "gramctc/utf8.hpp"

namespace gramctc::refctc {

// Classic CTC over the blank-interleaved 2|l|+1 state sequence. Column 0 is
// blank and column k is base_units[k - 1]. Kept free of the gram lattice
// code so the two can be checked against each other.
LossGrad ctc_loss_grad(ConstMatrixView logits, const UnitString& label,
                       std::span<const Unit> base_units);

}  // namespace gramctc::refctc

#endif  // GRAMCTC_REFCTC_HPP_
