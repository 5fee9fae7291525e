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

#ifndef FTDND_CODE_H
#define FTDND_CODE_H

#include <cstdint>
#include <string>
#include <vector>

#include "ftdnd/pauli.h"

namespace ftdnd {

/// Syndrome bits ordered Z-generator block first (these detect X errors), then the X-generator block.
/// As an integer, bit j of the syndrome is 2^j.
using Syndrome = BitVector;

struct LogicalClass {
    bool b1 = false;  // logical X component
    bool b2 = false;  // logical Z component
    bool operator==(const LogicalClass &) const = default;
    LogicalClass operator^(const LogicalClass &o) const {
        return {b1 != o.b1, b2 != o.b2};
    }
};

struct Violation {
    std::string kind;
    std::string a;
    std::string b;
    std::string message;
};

class MinWeightTables;

struct StabilizerCode {
    std::string name;
    size_t n = 0;
    size_t k = 1;
    size_t d = 0;
    size_t t = 0;
    std::vector<PauliOperator> x_generators;
    std::vector<PauliOperator> z_generators;
    /// pure_errors_x[j] pairs with z_generators[j]; pure_errors_z[j] pairs with x_generators[j].
    std::vector<PauliOperator> pure_errors_x;
    std::vector<PauliOperator> pure_errors_z;
    PauliOperator logical_x;
    PauliOperator logical_z;

    size_t num_checks() const {
        return x_generators.size() + z_generators.size();
    }
    /// Generators in syndrome order (Z block, then X block).
    std::vector<PauliOperator> generators() const;
    /// Pure errors aligned with generators().
    std::vector<PauliOperator> pure_errors() const;
    bool is_css() const;

    /// Row j of H_Z (support of z_generators[j]) and H_X as bit-vectors over n qubits.
    std::vector<BitVector> hz() const;
    std::vector<BitVector> hx() const;
};

/// Cached per distinct code content; safe to call concurrently.
const MinWeightTables &min_weight_tables(const StabilizerCode &code);

/// Minimum-weight X-only and Z-only representatives for every half-syndrome.
class MinWeightTables {
   public:
    explicit MinWeightTables(const StabilizerCode &code);
    /// X-only error with minimum weight whose Z-block syndrome is `sx` (as an integer).
    const BitVector &x_rep(uint64_t sx) const {
        return x_reps_[sx];
    }
    const BitVector &z_rep(uint64_t sz) const {
        return z_reps_[sz];
    }

   private:
    std::vector<BitVector> x_reps_;
    std::vector<BitVector> z_reps_;
};

std::vector<Violation> validate(const StabilizerCode &code);

Syndrome syndrome(const StabilizerCode &code, const PauliOperator &error);
/// Z-block (X-error part) and X-block (Z-error part) of a syndrome.
BitVector syndrome_z_block(const StabilizerCode &code, const Syndrome &s);
BitVector syndrome_x_block(const StabilizerCode &code, const Syndrome &s);
Syndrome join_syndrome(const BitVector &z_block, const BitVector &x_block);

LogicalClass logical_class(const StabilizerCode &code, const PauliOperator &residual);
/// Logical class without the trivial-syndrome precondition.
LogicalClass logical_class_unchecked(const StabilizerCode &code, const PauliOperator &residual);

/// Product of the minimum-weight X-only and Z-only errors for the two syndrome blocks; ties go to the
/// lexicographically smallest bit string.
PauliOperator min_weight_representative(const StabilizerCode &code, const Syndrome &s);

StabilizerCode parse_code(const std::string &text);
std::string render_code(const StabilizerCode &code);
StabilizerCode load_code_file(const std::string &path);

/// Steane, Surface-17, color [[19,1,5]] and Surface-49, validated.
const std::vector<StabilizerCode> &builtin_codes();
const StabilizerCode &builtin_code(const std::string &name);

}  // namespace ftdnd

#endif
