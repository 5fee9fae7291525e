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

#ifndef FTDND_FRAME_SIM_H
#define FTDND_FRAME_SIM_H

#include <cstdint>
#include <vector>

#include "ftdnd/circuit.h"
#include "ftdnd/noise.h"

namespace ftdnd {

struct SimRecord {
    BitVector measurements;  // one bit per label, in label order
    PauliOperator frame;     // accumulated error on every circuit qubit after the last step
    BitVector checks;        // one bit per parity check, set when the check fails
    bool accepted() const {
        return checks.none();
    }
    PauliOperator block_frame(const Block &b) const;
};

/// A Pauli inserted on one qubit between step boundary-1 and step boundary (boundary 0 is the input).
struct Injection {
    uint32_t boundary;
    uint32_t qubit;
    uint8_t pauli;  // bit 0 X, bit 1 Z
};

/// Step-by-step Pauli-frame propagation. `input_error` covers either every circuit qubit or just the
/// data-role qubits in increasing order.
SimRecord run(const Circuit &circuit, const PauliOperator &input_error, const std::vector<FaultEvent> &faults,
              const std::vector<Injection> &injections = {});

/// The circuit as a linear map over GF(2): for every boundary, qubit and Pauli type, the packed effect on
/// (measurement bits, final X frame, final Z frame). A shot is the XOR of the effects of its faults.
class CompiledCircuit {
   public:
    using State = std::vector<uint64_t>;

    CompiledCircuit() = default;
    explicit CompiledCircuit(const Circuit &circuit);

    const Circuit &circuit() const {
        return circuit_;
    }
    size_t num_measurements() const {
        return num_meas_;
    }
    size_t words() const {
        return words_;
    }

    State zero_state() const {
        return State(words_, 0);
    }
    void inject(State &st, uint32_t boundary, uint32_t qubit, uint8_t pauli) const;
    /// Injects `p` (indexed over `b`'s qubits) on block `b`.
    void inject_block(State &st, uint32_t boundary, const Block &b, const PauliOperator &p) const;
    void apply_fault(State &st, const FaultEvent &f) const;
    void apply_faults(State &st, const std::vector<FaultEvent> &faults) const {
        for (const auto &f : faults) {
            apply_fault(st, f);
        }
    }

    bool measurement(const State &st, size_t label) const {
        return (st[label >> 6] >> (label & 63)) & 1;
    }
    /// Parity of the listed measurement labels.
    bool parity(const State &st, const std::vector<uint32_t> &labels) const;
    bool frame_x(const State &st, uint32_t q) const {
        size_t i = num_meas_ + q;
        return (st[i >> 6] >> (i & 63)) & 1;
    }
    bool frame_z(const State &st, uint32_t q) const {
        size_t i = num_meas_ + nq_ + q;
        return (st[i >> 6] >> (i & 63)) & 1;
    }
    PauliOperator block_frame(const State &st, const Block &b) const;
    bool accepted(const State &st) const;
    SimRecord record(const State &st) const;
    SimRecord run(const PauliOperator &input_error, const std::vector<FaultEvent> &faults,
                  const std::vector<Injection> &injections = {}) const;

   private:
    const uint64_t *effect(uint32_t boundary, uint32_t q, int z) const {
        return &effects_[((size_t)(boundary * nq_ + q) * 2 + z) * words_];
    }
    void xor_in(State &st, const uint64_t *e) const {
        for (size_t w = 0; w < words_; w++) {
            st[w] ^= e[w];
        }
    }

    Circuit circuit_;
    size_t nq_ = 0;
    size_t num_meas_ = 0;
    size_t words_ = 0;
    std::vector<uint64_t> effects_;
    std::vector<std::vector<int32_t>> meas_label_;  // [step][index] -> label, or -1
    std::vector<uint32_t> data_qubits_;
};

}  // namespace ftdnd

#endif
