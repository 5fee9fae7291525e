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

#include "ftdnd/gf2.h"

namespace ftdnd {

Gf2Echelon gf2_rref(std::vector<BitVector> rows) {
    Gf2Echelon out;
    if (rows.empty()) {
        return out;
    }
    size_t cols = rows[0].size();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows.size(); c++) {
        size_t p = r;
        while (p < rows.size() && !rows[p].get(c)) {
            p++;
        }
        if (p == rows.size()) {
            continue;
        }
        std::swap(rows[r], rows[p]);
        for (size_t i = 0; i < rows.size(); i++) {
            if (i != r && rows[i].get(c)) {
                rows[i] ^= rows[r];
            }
        }
        out.pivots.push_back(c);
        r++;
    }
    rows.resize(r);
    out.rows = std::move(rows);
    return out;
}

size_t gf2_rank(const std::vector<BitVector> &rows) {
    return gf2_rref(rows).pivots.size();
}

bool gf2_in_span(const std::vector<BitVector> &rows, const BitVector &v) {
    auto extended = rows;
    extended.push_back(v);
    return gf2_rank(extended) == gf2_rank(rows);
}

BitVector symplectic(const PauliOperator &p) {
    return concat(p.x, p.z);
}

}  // namespace ftdnd
