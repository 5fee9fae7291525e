// Copyright 2026 The ftdnd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FTDND_GF2_H
#define FTDND_GF2_H

#include <vector>

#include "ftdnd/pauli.h"

namespace ftdnd {

struct Gf2Echelon {
    std::vector<BitVector> rows;  // reduced rows, one per pivot
    std::vector<size_t> pivots;   // pivot column of each row
};

/// Reduced row echelon form (Gauss-Jordan). Zero rows are dropped.
Gf2Echelon gf2_rref(std::vector<BitVector> rows);
size_t gf2_rank(const std::vector<BitVector> &rows);
bool gf2_in_span(const std::vector<BitVector> &rows, const BitVector &v);

/// Symplectic row x‖z of a Pauli.
BitVector symplectic(const PauliOperator &p);

}  // namespace ftdnd

#endif
