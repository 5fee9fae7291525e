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

#ifndef FTDND_CIRCUIT_H
#define FTDND_CIRCUIT_H

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ftdnd/code.h"

namespace ftdnd {

enum class Op : uint8_t { PrepZ, PrepX, CNOT, MeasZ, MeasX, Idle };

const char *op_name(Op op);
/// Number of distinct faults a location of this kind can suffer.
size_t fault_alphabet_size(Op op);

struct Location {
    Op op;
    uint32_t q0;      // the qubit, or the CNOT control
    uint32_t q1 = 0;  // CNOT target
    bool operator==(const Location &) const = default;
};

enum class Role : uint8_t { Data, Ancilla, Verifier };

struct Block {
    std::string name;
    uint32_t first;
    uint32_t size;
    Role role;
    bool operator==(const Block &) const = default;
};

struct MeasurementLabel {
    std::string name;
    uint32_t step;
    uint32_t qubit;
    bool operator==(const MeasurementLabel &) const = default;
};

/// Verification condition: the XOR of the listed measurement labels must be zero to accept.
struct ParityCheck {
    std::string name;
    std::vector<uint32_t> labels;
    bool operator==(const ParityCheck &) const = default;
};

class Circuit {
   public:
    Circuit() = default;
    explicit Circuit(size_t num_qubits);

    size_t num_qubits() const {
        return roles_.size();
    }
    size_t depth() const {
        return steps_.size();
    }
    const std::vector<std::vector<Location>> &steps() const {
        return steps_;
    }
    const std::vector<Role> &roles() const {
        return roles_;
    }
    const std::vector<Block> &blocks() const {
        return blocks_;
    }
    const std::vector<MeasurementLabel> &labels() const {
        return labels_;
    }
    const std::vector<ParityCheck> &checks() const {
        return checks_;
    }
    const std::map<std::string, std::string> &meta() const {
        return meta_;
    }
    /// Step from which a qubit is alive without being prepared in this circuit (injected states).
    std::optional<uint32_t> live_from(uint32_t q) const;

    size_t num_locations() const;
    /// Number of single-fault events (sum of per-location alphabet sizes).
    size_t num_single_faults() const;

    const Block &block(const std::string &name) const;
    bool has_block(const std::string &name) const;
    bool has_label(const std::string &name) const;
    size_t label_index(const std::string &name) const;
    std::string meta_value(const std::string &key, const std::string &fallback = "") const;
    int meta_int(const std::string &key, int fallback = -1) const;

    // Construction.
    void add_block(const std::string &name, uint32_t first, uint32_t size, Role role);
    void ensure_depth(size_t depth);
    void add(size_t step, Location loc);
    /// Adds a measurement location and its label.
    void measure(size_t step, Op op, uint32_t q, const std::string &label);
    void add_check(const std::string &name, std::vector<uint32_t> labels);
    void set_meta(const std::string &key, const std::string &value);
    void set_live_from(uint32_t q, uint32_t step);
    /// Removes Idle locations.
    void strip_idles();
    /// Inserts Idle on every alive qubit that has no location in a step, orders locations and labels
    /// deterministically, and checks structural invariants.
    void finalize();
    /// Throws std::logic_error describing the first broken invariant.
    void check_invariants() const;

    /// Copies the non-idle locations of `other` into this circuit, qubits remapped through `qubit_map`
    /// (identity when empty), steps shifted by `step_offset`, label and check names prefixed with `prefix`.
    void append(const Circuit &other, const std::vector<uint32_t> &qubit_map, size_t step_offset,
                const std::string &prefix, bool copy_blocks = true);

    bool operator==(const Circuit &) const = default;

   private:
    std::vector<std::vector<Location>> steps_;
    std::vector<Role> roles_;
    std::vector<Block> blocks_;
    std::vector<MeasurementLabel> labels_;
    std::vector<ParityCheck> checks_;
    std::map<std::string, std::string> meta_;
    std::map<uint32_t, uint32_t> live_from_;
};

std::string render_circuit(const Circuit &c);
Circuit parse_circuit(const std::string &text);
Circuit load_circuit_file(const std::string &path);

enum class Corner : uint8_t { NW, NE, SW, SE };

/// Order in which an ancilla touches the corners of its plaquette during the four CNOT steps.
struct SurfaceSchedule {
    std::array<Corner, 4> x_order{Corner::NW, Corner::NE, Corner::SW, Corner::SE};
    std::array<Corner, 4> z_order{Corner::NW, Corner::SW, Corner::NE, Corner::SE};
};

/// One rotated-surface-code syndrome cycle in six steps. Qubits: data 0..n-1, then one ancilla per
/// generator in syndrome order (Z generators, then X generators). Labels Z1.., X1.. equal the syndrome bits.
Circuit surface_cycle(const StabilizerCode &code, const SurfaceSchedule &schedule = {});
/// Surface-17 for d=3, Surface-49 for d=5.
Circuit surface_cycle(int d);
/// Qubits of the plaquette of each generator (syndrome order), by corner; -1 where the corner is absent.
std::vector<std::array<int, 4>> surface_plaquettes(const StabilizerCode &code);
/// `rounds` cycles back to back, labels prefixed R1., R2., ...
Circuit surface_rounds(const StabilizerCode &code, size_t rounds, const SurfaceSchedule &schedule = {});

enum class PrepBasis : uint8_t { Zero, Plus };

/// Encoder for |0> (basis Zero) or |+> (basis Plus) from product states and CNOTs, derived from the
/// reduced row echelon form of H_X (resp. H_Z). Single block "anc".
Circuit default_css_prep(const StabilizerCode &code, PrepBasis basis);

struct VerificationPlan {
    /// Checks against the dangerous error type, with logical parity.
    size_t primary = 1;
    /// Checks against the other error type (syndrome only).
    size_t secondary = 0;
    static VerificationPlan for_code(const StabilizerCode &code);
};

/// Encoder for block "anc" plus verifier copies; accepted iff every parity check reads zero.
Circuit verified_prep(const StabilizerCode &code, PrepBasis basis, const Circuit &encoder,
                      const VerificationPlan &plan);

/// EC units. The ancilla blocks are injected (prepared by separate verified-prep circuits).
/// Steane: data, anc_plus (target of data, MeasZ -> X-error syndrome), anc_zero (control onto data,
/// MeasX -> Z-error syndrome). Depth 3.
Circuit steane_ec(const StabilizerCode &code);
/// Knill: data, bell_plus (control of the Bell pair, MeasZ), bell_zero (output block). Depth 4; the last
/// step is the byproduct (Q) step on the output block.
Circuit knill_ec(const StabilizerCode &code);

/// Two data blocks B1, B2; LEC on each, transversal CNOT B1 -> B2, TEC on each.
Circuit cnot_exrec(const Circuit &ec);

enum class ProtocolKind : uint8_t { SurfaceRounds, SteaneExRec, KnillExRec };

struct ProtocolSpec {
    std::string id;
    ProtocolKind kind;
    std::string code_name;
    size_t d = 3;
    size_t max_rounds = 0;
    Circuit prep_zero;
    Circuit prep_plus;
    VerificationPlan plan;
};

/// Ids: surface-d3, surface-d5, steane-d3, steane-d5, knill-d3, knill-d5.
ProtocolSpec make_protocol(const std::string &id);
/// Same, with user-supplied encoder circuit files (empty path keeps the default encoder).
ProtocolSpec make_protocol(const std::string &id, const std::string &zero_encoder_path,
                           const std::string &plus_encoder_path);
std::vector<std::string> protocol_ids();

}  // namespace ftdnd

#endif
