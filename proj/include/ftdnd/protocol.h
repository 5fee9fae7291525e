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

#ifndef FTDND_PROTOCOL_H
#define FTDND_PROTOCOL_H

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ftdnd/circuit.h"
#include "ftdnd/decoders.h"
#include "ftdnd/frame_sim.h"
#include "ftdnd/noise.h"

namespace ftdnd {

enum class Baseline : uint8_t { Lookup, Naive };
Baseline parse_baseline(const std::string &name);
const char *baseline_name(Baseline b);

/// Syndromes read from one record: one per surface round or EC unit, in circuit order.
/// Throws std::invalid_argument when the circuit kind has no syndrome layout or a label is missing.
std::vector<Syndrome> extract_syndromes(const Circuit &circuit, const StabilizerCode &code,
                                        const BitVector &measurements);

/// Repeats the last round until there are max_rounds of them.
std::vector<Syndrome> surface_round_padding(std::vector<Syndrome> rounds, size_t max_rounds);

struct ShotOutcome {
    BitVector x_bits;  // Z-generator syndromes (X errors) of every EC unit or round
    BitVector z_bits;
    /// Bit 0: the tracked output block (the first one) needs a logical X on top of the baseline; bit 1: a logical Z.
    uint8_t labels = 0;
    uint8_t block_labels = 0;  // the same two bits for every output block b, at 2b and 2b+1
    uint32_t rounds = 0;
    uint32_t prep_attempts = 0;
    PrepBasis basis = PrepBasis::Zero;
    /// Residual error on each output block after the baseline correction.
    std::array<uint32_t, 2> residual_x{};
    std::array<uint32_t, 2> residual_z{};
    bool failure() const {
        return labels != 0;
    }
};

/// Explicit faults for exhaustive checks.
struct Scenario {
    std::vector<PauliOperator> inputs;                    // per input data block; missing ones are clean
    std::vector<std::vector<FaultEvent>> circuit_faults;  // surface: per round; otherwise only [0]
    std::vector<std::vector<FaultEvent>> prep_faults;     // per ancilla slot; a rejected prep is redone cleanly
};

/// Shot simulator for one protocol: a surface-code memory of adaptive rounds, a single EC unit, or a
/// CNOT exRec. Immutable after construction and safe to share between threads.
class ProtocolRunner {
   public:
    ProtocolRunner(const ProtocolSpec &spec, Baseline baseline);
    /// A lone Steane or Knill EC unit of an exRec protocol (one input block, one output block).
    static ProtocolRunner ec_unit(const ProtocolSpec &spec, Baseline baseline);
    ~ProtocolRunner();
    ProtocolRunner(ProtocolRunner &&) noexcept;

    const ProtocolSpec &spec() const;
    const StabilizerCode &code() const;
    Baseline baseline() const;
    /// The surface cycle, EC unit or exRec circuit.
    const Circuit &circuit() const;
    size_t x_bits() const;
    size_t z_bits() const;
    size_t num_outputs() const;
    size_t num_inputs() const;
    size_t num_prep_slots() const;
    const Circuit &prep_circuit(size_t slot) const;
    const Block &prep_target(size_t slot) const;
    /// Decoder used to define labels: the hook-aware table for the surface code, min-weight otherwise.
    const LookupTable &ideal_table() const;

    /// Per-p fault samplers.
    class Noise {
       public:
        double p() const {
            return p_;
        }

       private:
        friend class ProtocolRunner;
        double p_ = 0;
        std::unique_ptr<FaultSampler> circuit;
        std::vector<std::unique_ptr<FaultSampler>> preps;
    };
    Noise noise(double p) const;

    /// One shot; the stream depends only on (seed, shot).
    ShotOutcome sample(const Noise &noise, uint64_t seed, uint64_t shot) const;
    ShotOutcome run(const Scenario &scenario) const;

   private:
    struct Impl;
    explicit ProtocolRunner(std::unique_ptr<Impl> impl);
    static std::unique_ptr<Impl> build(const ProtocolSpec &spec, Baseline baseline, bool single_unit);
    std::unique_ptr<Impl> impl_;
};

struct FtReport {
    uint64_t cases = 0;
    uint64_t condition1_violations = 0;
    /// Output farther than s2 from the code space, counting a one-cycle residual of k faults as weight k.
    uint64_t condition2_violations = 0;
    /// Output farther than s2 from the code space in plain Pauli weight.
    uint64_t condition2_strict_violations = 0;
    std::string first_violation;
    bool ok() const {
        return condition1_violations == 0 && condition2_violations == 0;
    }
};

/// Checks both conditions for every input error of weight s1 and fault set of size s2 with s1 + s2 <= t.
/// Fault sets with exactly t faults are drawn at random (`sampled` of them) when `sampled` > 0, otherwise
/// enumerated. Surface faults range over all rounds the protocol may use; EC-unit faults over the unit
/// circuit and every ancilla preparation.
FtReport check_fault_tolerance(const ProtocolRunner &runner, uint64_t sampled = 0, uint64_t seed = 1);

}  // namespace ftdnd

#endif
