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

#include "ftdnd/protocol.h"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace ftdnd {

Baseline parse_baseline(const std::string &name) {
    if (name == "lookup") {
        return Baseline::Lookup;
    }
    if (name == "naive") {
        return Baseline::Naive;
    }
    throw std::invalid_argument("unknown baseline decoder '" + name + "' (expected lookup or naive)");
}

const char *baseline_name(Baseline b) {
    return b == Baseline::Lookup ? "lookup" : "naive";
}

namespace {

// Syndrome bits of one EC unit or round: Z-block bit j is the parity of x_rows[j] over the gathered x_labels
// outcomes (bit i = x_labels[i]); likewise for the X block.
struct UnitPlan {
    std::vector<uint32_t> x_labels;
    std::vector<uint32_t> x_rows;
    std::vector<uint32_t> z_labels;
    std::vector<uint32_t> z_rows;
    bool knill = false;
    uint32_t boundary = 0;
    std::string target;  // Steane: block receiving R; Knill: block receiving the logical byproduct
};

size_t find_label(const Circuit &c, const std::string &name) {
    return c.label_index(name);
}

std::vector<uint32_t> labels_named(const Circuit &c, const std::string &prefix, size_t count) {
    std::vector<uint32_t> out;
    for (size_t i = 1; i <= count; i++) {
        out.push_back((uint32_t)find_label(c, prefix + std::to_string(i)));
    }
    return out;
}

std::vector<UnitPlan> unit_plans(const Circuit &c, const StabilizerCode &code) {
    PackedCode pc(code);
    std::string kind = c.meta_value("kind");
    size_t mz = code.z_generators.size(), mx = code.x_generators.size();
    std::vector<UnitPlan> out;
    auto identity_rows = [](size_t m) {
        std::vector<uint32_t> r;
        for (size_t j = 0; j < m; j++) {
            r.push_back(uint32_t{1} << j);
        }
        return r;
    };
    if (kind == "surface_cycle" || kind == "surface_rounds") {
        for (size_t r = 1;; r++) {
            std::string prefix = kind == "surface_cycle" ? "" : "R" + std::to_string(r) + ".";
            if (kind == "surface_rounds" && !c.has_label(prefix + "Z1")) {
                break;
            }
            UnitPlan u;
            u.x_labels = labels_named(c, prefix + "Z", mz);
            u.z_labels = labels_named(c, prefix + "X", mx);
            u.x_rows = identity_rows(mz);
            u.z_rows = identity_rows(mx);
            out.push_back(u);
            if (kind == "surface_cycle") {
                break;
            }
        }
        return out;
    }
    bool exrec = kind == "steane_exrec" || kind == "knill_exrec";
    bool knill = kind == "knill_ec" || kind == "knill_exrec";
    if (!exrec && kind != "steane_ec" && kind != "knill_ec") {
        throw std::invalid_argument("circuit kind '" + kind + "' has no syndrome layout");
    }
    std::vector<std::string> prefixes = exrec ? std::vector<std::string>{"LEC1.", "LEC2.", "TEC1.", "TEC2."}
                                              : std::vector<std::string>{""};
    for (size_t i = 0; i < prefixes.size(); i++) {
        const std::string &p = prefixes[i];
        UnitPlan u;
        u.knill = knill;
        u.x_labels = labels_named(c, p + (knill ? "bell_plus.m" : "anc_plus.m"), code.n);
        u.z_labels = labels_named(c, p + (knill ? "data.m" : "anc_zero.m"), code.n);
        u.x_rows = pc.hz;
        u.z_rows = pc.hx;
        if (exrec) {
            bool lec = i < 2;
            u.boundary = lec ? (uint32_t)c.meta_int("exrec.cnot_step") : (uint32_t)c.depth();
            u.target = c.meta_value(std::string(lec ? "exrec.lec_out" : "exrec.out") + std::to_string(i % 2 + 1));
        } else {
            u.boundary = (uint32_t)c.depth();
            u.target = knill ? "bell_zero" : "data";
        }
        out.push_back(u);
    }
    return out;
}

uint64_t unit_syndrome(const UnitPlan &u, uint32_t mx, uint32_t mz) {
    uint64_t s = 0;
    for (size_t j = 0; j < u.x_rows.size(); j++) {
        s |= (uint64_t)(__builtin_popcount(u.x_rows[j] & mx) & 1) << j;
    }
    for (size_t j = 0; j < u.z_rows.size(); j++) {
        s |= (uint64_t)(__builtin_popcount(u.z_rows[j] & mz) & 1) << (u.x_rows.size() + j);
    }
    return s;
}

uint32_t pack_bits(const BitVector &v) {
    return (uint32_t)v.to_u64();
}

}  // namespace

std::vector<Syndrome> extract_syndromes(const Circuit &circuit, const StabilizerCode &code,
                                        const BitVector &measurements) {
    if (measurements.size() != circuit.labels().size()) {
        throw DimensionError("record has " + std::to_string(measurements.size()) + " measurement bits, circuit has " +
                             std::to_string(circuit.labels().size()) + " labels");
    }
    std::vector<Syndrome> out;
    for (const auto &u : unit_plans(circuit, code)) {
        uint32_t mx = 0, mz = 0;
        for (size_t i = 0; i < u.x_labels.size(); i++) {
            mx |= (uint32_t)measurements.get(u.x_labels[i]) << i;
        }
        for (size_t i = 0; i < u.z_labels.size(); i++) {
            mz |= (uint32_t)measurements.get(u.z_labels[i]) << i;
        }
        out.push_back(Syndrome::from_u64(code.num_checks(), unit_syndrome(u, mx, mz)));
    }
    return out;
}

std::vector<Syndrome> surface_round_padding(std::vector<Syndrome> rounds, size_t max_rounds) {
    if (rounds.empty()) {
        throw std::invalid_argument("round padding needs at least one round");
    }
    if (rounds.size() > max_rounds) {
        throw std::invalid_argument(std::to_string(rounds.size()) + " rounds exceed the maximum of " +
                                    std::to_string(max_rounds));
    }
    while (rounds.size() < max_rounds) {
        rounds.push_back(rounds.back());
    }
    return rounds;
}

struct ProtocolRunner::Impl {
    ProtocolSpec spec;
    const StabilizerCode *code = nullptr;
    Baseline baseline = Baseline::Lookup;
    bool surface = false;
    PackedCode packed{builtin_code("steane")};
    Circuit circuit;
    CompiledCircuit compiled;
    std::vector<UnitPlan> units;
    std::vector<Block> inputs;
    std::vector<Block> outputs;
    LookupTable ideal;
    // Ancilla slots.
    std::vector<Block> slot_target;
    std::vector<uint32_t> slot_boundary;
    std::vector<int> slot_prep;  // 0 zero, 1 plus
    std::array<CompiledCircuit, 2> prep_compiled;
    uint64_t meas_mask = 0;

    void decode(uint64_t s, uint32_t &rx, uint32_t &rz) const {
        if (baseline == Baseline::Lookup) {
            rx = ideal.x_mask(s);
            rz = ideal.z_mask(s);
        } else {
            packed.naive(s, rx, rz);
        }
    }

    void inject_mask(CompiledCircuit::State &st, uint32_t boundary, uint32_t first, uint32_t mask, uint8_t pauli) const {
        while (mask) {
            int q = __builtin_ctz(mask);
            mask &= mask - 1;
            compiled.inject(st, boundary, first + q, pauli);
        }
    }

    uint32_t gather(const CompiledCircuit::State &st, const std::vector<uint32_t> &labels) const {
        uint32_t m = 0;
        for (size_t i = 0; i < labels.size(); i++) {
            m |= (uint32_t)compiled.measurement(st, labels[i]) << i;
        }
        return m;
    }

    void block_masks(const CompiledCircuit::State &st, const Block &b, uint32_t &ex, uint32_t &ez) const {
        ex = ez = 0;
        for (uint32_t i = 0; i < b.size; i++) {
            ex |= (uint32_t)compiled.frame_x(st, b.first + i) << i;
            ez |= (uint32_t)compiled.frame_z(st, b.first + i) << i;
        }
    }

    uint8_t ideal_bits(uint32_t ex, uint32_t ez) const {
        uint64_t s = packed.syndrome(ex, ez);
        return packed.logical_bits(ex ^ ideal.x_mask(s), ez ^ ideal.z_mask(s));
    }

    void write_bits(BitVector &dst, size_t offset, uint64_t value, size_t count) const {
        for (size_t j = 0; j < count; j++) {
            if ((value >> j) & 1) {
                dst.set(offset + j, true);
            }
        }
    }

    template <typename InputFn, typename PrepFn, typename CircuitFn>
    ShotOutcome shot(InputFn &&input, PrepFn &&prep_faults, CircuitFn &&circuit_faults) const;
};

template <typename InputFn, typename PrepFn, typename CircuitFn>
ShotOutcome ProtocolRunner::Impl::shot(InputFn &&input, PrepFn &&prep_faults, CircuitFn &&circuit_faults) const {
    ShotOutcome out;
    size_t mz = code->z_generators.size(), mx = code->x_generators.size();
    std::vector<FaultEvent> faults;
    auto st = compiled.zero_state();
    if (surface) {
        out.x_bits = BitVector(mz * spec.max_rounds);
        out.z_bits = BitVector(mx * spec.max_rounds);
        uint32_t dx = 0, dz = 0;
        input(0, dx, dz);
        std::vector<uint64_t> syn;
        ProtocolState ps;
        ps.t = code->t;
        bool majority = code->t == 1 && spec.max_rounds == 3;
        uint64_t decided = 0;
        for (size_t r = 0;; r++) {
            if (r == spec.max_rounds) {
                throw std::logic_error("surface protocol did not terminate within " + std::to_string(spec.max_rounds) +
                                       " rounds");
            }
            faults.clear();
            circuit_faults(r, faults);
            uint64_t s = 0;
            if (!faults.empty() || dx || dz) {
                std::fill(st.begin(), st.end(), 0);
                inject_mask(st, 0, 0, dx, 1);
                inject_mask(st, 0, 0, dz, 2);
                compiled.apply_faults(st, faults);
                s = st[0] & meas_mask;
                block_masks(st, inputs[0], dx, dz);
            }
            syn.push_back(s);
            if (majority) {
                if (syn.size() == 3) {
                    auto pick = [&](uint64_t v) { return Syndrome::from_u64(code->num_checks(), v); };
                    decided = ft_decode_d3(pick(syn[0]), pick(syn[1]), pick(syn[2])).to_u64();
                    break;
                }
            } else if (ft_protocol_step(ps, Syndrome::from_u64(code->num_checks(), s)) == Decision::DecodeNow) {
                decided = s;
                break;
            }
        }
        out.rounds = (uint32_t)syn.size();
        for (size_t r = 0; r < spec.max_rounds; r++) {
            uint64_t s = syn[std::min(r, syn.size() - 1)];
            write_bits(out.x_bits, r * mz, s, mz);
            write_bits(out.z_bits, r * mx, s >> mz, mx);
        }
        uint32_t rx, rz;
        decode(decided, rx, rz);
        out.residual_x[0] = dx ^ rx;
        out.residual_z[0] = dz ^ rz;
        out.labels = out.block_labels = ideal_bits(out.residual_x[0], out.residual_z[0]);
        return out;
    }

    out.x_bits = BitVector(mz * units.size());
    out.z_bits = BitVector(mx * units.size());
    for (size_t b = 0; b < inputs.size(); b++) {
        uint32_t ex = 0, ez = 0;
        input(b, ex, ez);
        inject_mask(st, 0, inputs[b].first, ex, 1);
        inject_mask(st, 0, inputs[b].first, ez, 2);
    }
    // Ancilla factory: each slot is prepared until its verification passes.
    auto pst = prep_compiled[0].zero_state();
    for (size_t slot = 0; slot < slot_target.size(); slot++) {
        const CompiledCircuit &pc = prep_compiled[slot_prep[slot]];
        for (uint32_t attempt = 0;; attempt++) {
            if (attempt == 100000) {
                throw std::runtime_error("ancilla verification keeps failing; p is too large");
            }
            out.prep_attempts++;
            faults.clear();
            prep_faults(slot, attempt, faults);
            if (faults.empty()) {
                break;
            }
            pst.assign(pc.words(), 0);
            pc.apply_faults(pst, faults);
            if (!pc.accepted(pst)) {
                continue;
            }
            uint32_t ex, ez;
            const Block &anc = pc.circuit().block("anc");
            ex = ez = 0;
            for (uint32_t i = 0; i < anc.size; i++) {
                ex |= (uint32_t)pc.frame_x(pst, anc.first + i) << i;
                ez |= (uint32_t)pc.frame_z(pst, anc.first + i) << i;
            }
            inject_mask(st, slot_boundary[slot], slot_target[slot].first, ex, 1);
            inject_mask(st, slot_boundary[slot], slot_target[slot].first, ez, 2);
            break;
        }
    }
    faults.clear();
    circuit_faults(0, faults);
    compiled.apply_faults(st, faults);
    for (size_t i = 0; i < units.size(); i++) {
        const UnitPlan &u = units[i];
        uint32_t m_x = gather(st, u.x_labels), m_z = gather(st, u.z_labels);
        uint64_t s = unit_syndrome(u, m_x, m_z);
        write_bits(out.x_bits, i * mz, s, mz);
        write_bits(out.z_bits, i * mx, s >> mz, mx);
        uint32_t rx, rz;
        decode(s, rx, rz);
        const Block &target = circuit.block(u.target);
        if (u.knill) {
            // Teleportation byproduct from the corrected Bell-measurement patterns.
            if (__builtin_popcount((m_x ^ rx) & packed.logical_z) & 1) {
                inject_mask(st, u.boundary, target.first, packed.logical_x, 1);
            }
            if (__builtin_popcount((m_z ^ rz) & packed.logical_x) & 1) {
                inject_mask(st, u.boundary, target.first, packed.logical_z, 2);
            }
        } else {
            inject_mask(st, u.boundary, target.first, rx, 1);
            inject_mask(st, u.boundary, target.first, rz, 2);
        }
    }
    for (size_t b = 0; b < outputs.size(); b++) {
        block_masks(st, outputs[b], out.residual_x[b], out.residual_z[b]);
        out.block_labels |= ideal_bits(out.residual_x[b], out.residual_z[b]) << (2 * b);
    }
    out.labels = out.block_labels & 3;
    out.rounds = 1;
    return out;
}

ProtocolRunner::ProtocolRunner(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {
}
ProtocolRunner::~ProtocolRunner() = default;
ProtocolRunner::ProtocolRunner(ProtocolRunner &&) noexcept = default;

std::unique_ptr<ProtocolRunner::Impl> ProtocolRunner::build(const ProtocolSpec &spec, Baseline baseline,
                                                            bool single_unit) {
        auto m = std::make_unique<ProtocolRunner::Impl>();
        m->spec = spec;
        m->code = &builtin_code(spec.code_name);
        m->baseline = baseline;
        m->packed = PackedCode(*m->code);
        const StabilizerCode &code = *m->code;
        if (spec.kind == ProtocolKind::SurfaceRounds) {
            if (single_unit) {
                throw std::invalid_argument("the surface protocol has no separate EC unit");
            }
            m->surface = true;
            m->circuit = surface_cycle(code);
            m->ideal = build_lookup(code, &m->circuit);
            m->inputs = {m->circuit.block("data")};
            m->outputs = m->inputs;
        } else {
            bool knill = spec.kind == ProtocolKind::KnillExRec;
            Circuit ec = knill ? knill_ec(code) : steane_ec(code);
            m->circuit = single_unit ? ec : cnot_exrec(ec);
            m->ideal = build_lookup(code);
            if (single_unit) {
                m->inputs = {m->circuit.block("data")};
            } else {
                m->inputs = {m->circuit.block("B1"), m->circuit.block("B2")};
            }
            std::vector<std::string> prefixes = single_unit ? std::vector<std::string>{""}
                                                            : std::vector<std::string>{"LEC1.", "LEC2.", "TEC1.", "TEC2."};
            for (const auto &p : prefixes) {
                const char *plus = knill ? "bell_plus" : "anc_plus";
                const char *zero = knill ? "bell_zero" : "anc_zero";
                for (int k = 0; k < 2; k++) {
                    const Block &b = m->circuit.block(p + (k == 0 ? plus : zero));
                    m->slot_target.push_back(b);
                    m->slot_boundary.push_back(m->circuit.live_from(b.first).value_or(0));
                    m->slot_prep.push_back(k == 0 ? 1 : 0);
                }
            }
            m->prep_compiled[0] = CompiledCircuit(spec.prep_zero);
            m->prep_compiled[1] = CompiledCircuit(spec.prep_plus);
        }
        m->compiled = CompiledCircuit(m->circuit);
        m->units = unit_plans(m->circuit, code);
        if (!m->surface) {
            for (size_t b = 0; b < (single_unit ? 1u : 2u); b++) {
                const std::string name = single_unit ? m->units[0].target
                                                     : m->circuit.meta_value("exrec.out" + std::to_string(b + 1));
                m->outputs.push_back(m->circuit.block(name));
            }
        }
        size_t nm = m->circuit.labels().size();
        if (m->surface && nm > 64) {
            throw std::invalid_argument("surface cycle with more than 64 syndrome bits");
        }
        m->meas_mask = nm >= 64 ? ~uint64_t{0} : (uint64_t{1} << nm) - 1;
        return m;
}

ProtocolRunner::ProtocolRunner(const ProtocolSpec &spec, Baseline baseline)
    : impl_(build(spec, baseline, false)) {
}

ProtocolRunner ProtocolRunner::ec_unit(const ProtocolSpec &spec, Baseline baseline) {
    return ProtocolRunner(build(spec, baseline, true));
}

const ProtocolSpec &ProtocolRunner::spec() const {
    return impl_->spec;
}
const StabilizerCode &ProtocolRunner::code() const {
    return *impl_->code;
}
Baseline ProtocolRunner::baseline() const {
    return impl_->baseline;
}
const Circuit &ProtocolRunner::circuit() const {
    return impl_->circuit;
}
size_t ProtocolRunner::x_bits() const {
    size_t per = impl_->code->z_generators.size();
    return impl_->surface ? per * impl_->spec.max_rounds : per * impl_->units.size();
}
size_t ProtocolRunner::z_bits() const {
    size_t per = impl_->code->x_generators.size();
    return impl_->surface ? per * impl_->spec.max_rounds : per * impl_->units.size();
}
size_t ProtocolRunner::num_outputs() const {
    return impl_->outputs.size();
}
size_t ProtocolRunner::num_inputs() const {
    return impl_->inputs.size();
}
size_t ProtocolRunner::num_prep_slots() const {
    return impl_->slot_target.size();
}
const Circuit &ProtocolRunner::prep_circuit(size_t slot) const {
    return impl_->prep_compiled[impl_->slot_prep.at(slot)].circuit();
}
const Block &ProtocolRunner::prep_target(size_t slot) const {
    return impl_->slot_target.at(slot);
}
const LookupTable &ProtocolRunner::ideal_table() const {
    return impl_->ideal;
}

ProtocolRunner::Noise ProtocolRunner::noise(double p) const {
    DepolarizingParams params{p};
    params.validate();
    Noise n;
    n.p_ = p;
    n.circuit = std::make_unique<FaultSampler>(impl_->circuit, params);
    if (!impl_->surface) {
        n.preps.push_back(std::make_unique<FaultSampler>(impl_->spec.prep_zero, params));
        n.preps.push_back(std::make_unique<FaultSampler>(impl_->spec.prep_plus, params));
    }
    return n;
}

ShotOutcome ProtocolRunner::sample(const Noise &noise, uint64_t seed, uint64_t shot) const {
    ShotRng rng(seed, shot);
    const Impl &m = *impl_;
    ShotOutcome out = m.shot([](size_t, uint32_t &ex, uint32_t &ez) { ex = ez = 0; },
                             [&](size_t slot, uint32_t, std::vector<FaultEvent> &f) {
                                 noise.preps[m.slot_prep[slot]]->sample(rng, f);
                             },
                             [&](size_t, std::vector<FaultEvent> &f) { noise.circuit->sample(rng, f); });
    out.basis = (shot & 1) ? PrepBasis::Plus : PrepBasis::Zero;
    return out;
}

ShotOutcome ProtocolRunner::run(const Scenario &sc) const {
    const Impl &m = *impl_;
    if (sc.inputs.size() > m.inputs.size()) {
        throw std::invalid_argument("scenario has more input errors than the protocol has input blocks");
    }
    for (size_t b = 0; b < sc.inputs.size(); b++) {
        if (sc.inputs[b].n() != m.inputs[b].size) {
            throw DimensionError("input error on " + std::to_string(sc.inputs[b].n()) + " qubits for block " +
                                 m.inputs[b].name);
        }
    }
    if (sc.prep_faults.size() > m.slot_target.size()) {
        throw std::invalid_argument("scenario has faults for more ancilla slots than the protocol uses");
    }
    return m.shot(
        [&](size_t b, uint32_t &ex, uint32_t &ez) {
            ex = ez = 0;
            if (b < sc.inputs.size()) {
                ex = pack_bits(sc.inputs[b].x);
                ez = pack_bits(sc.inputs[b].z);
            }
        },
        [&](size_t slot, uint32_t attempt, std::vector<FaultEvent> &f) {
            if (attempt == 0 && slot < sc.prep_faults.size()) {
                f = sc.prep_faults[slot];
            }
        },
        [&](size_t round, std::vector<FaultEvent> &f) {
            if (round < sc.circuit_faults.size()) {
                f = sc.circuit_faults[round];
            }
        });
}

namespace {

// A single fault somewhere in a protocol: `source` is the surface round, or 0 for the EC circuit and
// 1 + slot for an ancilla preparation.
struct Site {
    uint32_t source;
    FaultEvent fault;
};

// Syndromes reachable as products of at most k pieces, per k.
std::vector<std::vector<bool>> closure(const std::vector<uint64_t> &pieces, size_t m, size_t t) {
    std::vector<std::vector<bool>> levels(t + 1, std::vector<bool>(uint64_t{1} << m, false));
    std::vector<uint64_t> frontier{0};
    levels[0][0] = true;
    std::vector<bool> seen(uint64_t{1} << m, false);
    seen[0] = true;
    for (size_t k = 1; k <= t; k++) {
        levels[k] = levels[k - 1];
        std::vector<uint64_t> next;
        for (uint64_t s : frontier) {
            for (uint64_t p : pieces) {
                uint64_t v = s ^ p;
                if (!seen[v]) {
                    seen[v] = true;
                    levels[k][v] = true;
                    next.push_back(v);
                }
            }
        }
        frontier.swap(next);
    }
    return levels;
}

std::string describe(const ProtocolRunner &runner, const std::vector<PauliOperator> &inputs,
                     const std::vector<Site> &sites) {
    std::ostringstream os;
    for (size_t b = 0; b < inputs.size(); b++) {
        os << "input " << b << ": " << inputs[b] << "\n";
    }
    bool surface = runner.spec().kind == ProtocolKind::SurfaceRounds;
    for (const auto &s : sites) {
        const Circuit &c = surface || s.source == 0 ? runner.circuit() : runner.prep_circuit(s.source - 1);
        if (surface) {
            os << "round " << s.source + 1 << ": ";
        } else if (s.source == 0) {
            os << "EC circuit: ";
        } else {
            os << "prep slot " << s.source - 1 << ": ";
        }
        os << format_fault_trace(c, {s.fault});
    }
    return os.str();
}

}  // namespace

FtReport check_fault_tolerance(const ProtocolRunner &runner, uint64_t sampled, uint64_t seed) {
    const StabilizerCode &code = runner.code();
    PackedCode pc(code);
    size_t t = code.t, n = code.n, m = code.num_checks();
    bool surface = runner.spec().kind == ProtocolKind::SurfaceRounds;
    if (runner.num_inputs() != 1) {
        throw std::invalid_argument("fault-tolerance checks take a surface protocol or a single EC unit");
    }

    // Single-fault sites.
    std::vector<Site> sites;
    auto collect = [&](const Circuit &c, uint32_t source) {
        for_each_fault_set(c, 1, [&](const std::vector<FaultEvent> &f) {
            if (f.size() == 1) {
                sites.push_back({source, f[0]});
            }
        });
    };
    if (surface) {
        for (uint32_t r = 0; r < runner.spec().max_rounds; r++) {
            collect(runner.circuit(), r);
        }
    } else {
        collect(runner.circuit(), 0);
        for (uint32_t s = 0; s < runner.num_prep_slots(); s++) {
            collect(runner.prep_circuit(s), 1 + s);
        }
    }

    // Reachable syndromes: plain weight, and weight where a one-cycle single-fault residual counts as 1.
    std::vector<uint64_t> weight_pieces, cycle_pieces;
    for (uint32_t q = 0; q < n; q++) {
        for (uint32_t p = 1; p < 4; p++) {
            weight_pieces.push_back(pc.syndrome((p & 1) << q, (p >> 1) << q));
        }
    }
    cycle_pieces = weight_pieces;
    if (surface) {
        CompiledCircuit cc(runner.circuit());
        const Block &data = runner.circuit().block("data");
        auto st = cc.zero_state();
        for_each_fault_set(runner.circuit(), 1, [&](const std::vector<FaultEvent> &f) {
            std::fill(st.begin(), st.end(), 0);
            cc.apply_faults(st, f);
            uint32_t ex = 0, ez = 0;
            for (uint32_t i = 0; i < data.size; i++) {
                ex |= (uint32_t)cc.frame_x(st, data.first + i) << i;
                ez |= (uint32_t)cc.frame_z(st, data.first + i) << i;
            }
            cycle_pieces.push_back(pc.syndrome(ex, ez));
        });
    }
    std::sort(cycle_pieces.begin(), cycle_pieces.end());
    cycle_pieces.erase(std::unique(cycle_pieces.begin(), cycle_pieces.end()), cycle_pieces.end());
    auto strict = closure(weight_pieces, m, t);
    auto relaxed = closure(cycle_pieces, m, t);

    FtReport rep;
    auto check = [&](const std::vector<PauliOperator> &inputs, const std::vector<Site> &chosen) {
        Scenario sc;
        sc.inputs = inputs;
        for (const auto &s : chosen) {
            auto &dst = surface || s.source == 0 ? sc.circuit_faults : sc.prep_faults;
            uint32_t idx = surface ? s.source : (s.source == 0 ? 0 : s.source - 1);
            if (dst.size() <= idx) {
                dst.resize(idx + 1);
            }
            dst[idx].push_back(s.fault);
        }
        for (auto &f : sc.circuit_faults) {
            std::sort(f.begin(), f.end());
        }
        for (auto &f : sc.prep_faults) {
            std::sort(f.begin(), f.end());
        }
        ShotOutcome out = runner.run(sc);
        size_t s2 = chosen.size();
        rep.cases++;
        uint64_t syn = pc.syndrome(out.residual_x[0], out.residual_z[0]);
        bool bad1 = out.block_labels != 0;
        bool bad2 = !relaxed[s2][syn];
        rep.condition1_violations += bad1;
        rep.condition2_violations += bad2;
        rep.condition2_strict_violations += !strict[s2][syn];
        if ((bad1 || bad2) && rep.first_violation.empty()) {
            rep.first_violation = std::string(bad1 ? "condition 1" : "condition 2") + " violated by\n" +
                                  describe(runner, inputs, chosen);
        }
    };

    // Input errors of weight s1.
    auto for_each_input = [&](size_t s1, const std::function<void(const PauliOperator &)> &fn) {
        std::vector<uint32_t> qs(s1), ps(s1);
        std::function<void(size_t, uint32_t)> rec = [&](size_t k, uint32_t start) {
            if (k == s1) {
                PauliOperator e(n);
                for (size_t i = 0; i < s1; i++) {
                    e.set(qs[i], "XZY"[ps[i] - 1]);
                }
                fn(e);
                return;
            }
            for (uint32_t q = start; q < n; q++) {
                for (uint32_t p = 1; p < 4; p++) {
                    qs[k] = q;
                    ps[k] = p;
                    rec(k + 1, q + 1);
                }
            }
        };
        rec(0, 0);
    };
    auto same_location = [](const Site &a, const Site &b) {
        return a.source == b.source && a.fault.step == b.fault.step && a.fault.index == b.fault.index;
    };
    // Fault sets of size s2 over distinct locations (sites of one location are adjacent).
    auto for_each_fault_combo = [&](size_t s2, const std::function<void(const std::vector<Site> &)> &fn) {
        std::vector<Site> chosen;
        std::function<void(size_t)> rec = [&](size_t start) {
            if (chosen.size() == s2) {
                fn(chosen);
                return;
            }
            for (size_t i = start; i < sites.size(); i++) {
                if (!chosen.empty() && same_location(chosen.back(), sites[i])) {
                    continue;
                }
                chosen.push_back(sites[i]);
                rec(i + 1);
                chosen.pop_back();
            }
        };
        rec(0);
    };

    ShotRng rng(seed, 0);
    for (size_t s1 = 0; s1 <= t; s1++) {
        for (size_t s2 = 0; s1 + s2 <= t; s2++) {
            for_each_input(s1, [&](const PauliOperator &e) {
                std::vector<PauliOperator> inputs{e};
                if (s2 == t && sampled > 0) {
                    if (s1 != 0) {
                        return;
                    }
                    for (uint64_t k = 0; k < sampled; k++) {
                        std::vector<Site> chosen;
                        while (chosen.size() < s2) {
                            const Site &cand = sites[rng.below((uint32_t)sites.size())];
                            bool clash = false;
                            for (const auto &c : chosen) {
                                clash |= same_location(c, cand);
                            }
                            if (!clash) {
                                chosen.push_back(cand);
                            }
                        }
                        check(inputs, chosen);
                    }
                    return;
                }
                for_each_fault_combo(s2, [&](const std::vector<Site> &chosen) { check(inputs, chosen); });
            });
        }
    }
    return rep;
}

}  // namespace ftdnd
