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

#include "ftdnd/frame_sim.h"

#include <stdexcept>

namespace ftdnd {

namespace {

std::vector<uint32_t> data_qubits(const Circuit &c) {
    std::vector<uint32_t> out;
    for (uint32_t q = 0; q < c.num_qubits(); q++) {
        if (c.roles()[q] == Role::Data) {
            out.push_back(q);
        }
    }
    return out;
}

const Location &location_of(const Circuit &c, const FaultEvent &f) {
    if (f.step >= c.depth() || f.index >= c.steps()[f.step].size()) {
        throw std::out_of_range("fault references a nonexistent location (step " + std::to_string(f.step) +
                                ", index " + std::to_string(f.index) + ")");
    }
    const Location &l = c.steps()[f.step][f.index];
    if (f.payload == 0 || f.payload > fault_alphabet_size(l.op)) {
        throw std::invalid_argument(std::string("fault payload out of range for ") + op_name(l.op));
    }
    return l;
}

std::vector<std::vector<int32_t>> measurement_labels(const Circuit &c) {
    std::vector<std::vector<int32_t>> m(c.depth());
    for (size_t s = 0; s < c.depth(); s++) {
        m[s].assign(c.steps()[s].size(), -1);
    }
    for (size_t i = 0; i < c.labels().size(); i++) {
        const auto &lab = c.labels()[i];
        const auto &step = c.steps()[lab.step];
        for (size_t k = 0; k < step.size(); k++) {
            if (step[k].q0 == lab.qubit && (step[k].op == Op::MeasZ || step[k].op == Op::MeasX)) {
                m[lab.step][k] = (int32_t)i;
            }
        }
    }
    return m;
}

void apply_pauli(PauliOperator &frame, uint32_t q, uint8_t pauli) {
    if (pauli & 1) {
        frame.x.flip(q);
    }
    if (pauli & 2) {
        frame.z.flip(q);
    }
}

}  // namespace

PauliOperator SimRecord::block_frame(const Block &b) const {
    PauliOperator p(b.size);
    for (uint32_t i = 0; i < b.size; i++) {
        p.x.set(i, frame.x.get(b.first + i));
        p.z.set(i, frame.z.get(b.first + i));
    }
    return p;
}

SimRecord run(const Circuit &c, const PauliOperator &input_error, const std::vector<FaultEvent> &faults,
              const std::vector<Injection> &injections) {
    size_t nq = c.num_qubits();
    PauliOperator frame(nq);
    if (input_error.n() == nq) {
        frame = input_error;
    } else {
        auto dq = data_qubits(c);
        if (input_error.n() != dq.size()) {
            throw DimensionError("input error acts on " + std::to_string(input_error.n()) + " qubits, circuit has " +
                                 std::to_string(dq.size()) + " data qubits");
        }
        for (size_t i = 0; i < dq.size(); i++) {
            frame.x.set(dq[i], input_error.x.get(i));
            frame.z.set(dq[i], input_error.z.get(i));
        }
    }
    auto labels = measurement_labels(c);
    std::vector<std::vector<uint8_t>> fault_at(c.depth());
    for (size_t s = 0; s < c.depth(); s++) {
        fault_at[s].assign(c.steps()[s].size(), 0);
    }
    for (const auto &f : faults) {
        location_of(c, f);
        fault_at[f.step][f.index] = f.payload;
    }
    SimRecord rec{BitVector(c.labels().size()), PauliOperator(nq), BitVector(c.checks().size())};
    auto inject_at = [&](size_t boundary) {
        for (const auto &inj : injections) {
            if (inj.boundary == boundary) {
                apply_pauli(frame, inj.qubit, inj.pauli);
            }
        }
    };
    for (size_t s = 0; s < c.depth(); s++) {
        inject_at(s);
        const auto &step = c.steps()[s];
        for (size_t i = 0; i < step.size(); i++) {
            const Location &l = step[i];
            uint8_t f = fault_at[s][i];
            switch (l.op) {
                case Op::PrepZ:
                    frame.x.set(l.q0, f != 0);
                    frame.z.set(l.q0, false);
                    break;
                case Op::PrepX:
                    frame.x.set(l.q0, false);
                    frame.z.set(l.q0, f != 0);
                    break;
                case Op::CNOT:
                    if (frame.x.get(l.q0)) {
                        frame.x.flip(l.q1);
                    }
                    if (frame.z.get(l.q1)) {
                        frame.z.flip(l.q0);
                    }
                    apply_pauli(frame, l.q0, f & 3);
                    apply_pauli(frame, l.q1, f >> 2);
                    break;
                case Op::MeasZ:
                    rec.measurements.set(labels[s][i], frame.x.get(l.q0) != (f != 0));
                    break;
                case Op::MeasX:
                    rec.measurements.set(labels[s][i], frame.z.get(l.q0) != (f != 0));
                    break;
                case Op::Idle:
                    apply_pauli(frame, l.q0, f);
                    break;
            }
        }
    }
    inject_at(c.depth());
    rec.frame = frame;
    for (size_t k = 0; k < c.checks().size(); k++) {
        bool par = false;
        for (uint32_t lab : c.checks()[k].labels) {
            par ^= rec.measurements.get(lab);
        }
        rec.checks.set(k, par);
    }
    return rec;
}

CompiledCircuit::CompiledCircuit(const Circuit &c)
    : circuit_(c),
      nq_(c.num_qubits()),
      num_meas_(c.labels().size()),
      words_((num_meas_ + 2 * nq_ + 63) / 64),
      meas_label_(measurement_labels(c)),
      data_qubits_(data_qubits(c)) {
    size_t depth = c.depth();
    effects_.assign((depth + 1) * nq_ * 2 * words_, 0);
    auto mut = [&](uint32_t b, uint32_t q, int z) { return &effects_[((size_t)(b * nq_ + q) * 2 + z) * words_]; };
    auto set_bit = [&](uint64_t *e, size_t i) { e[i >> 6] ^= uint64_t{1} << (i & 63); };
    for (uint32_t q = 0; q < nq_; q++) {
        set_bit(mut(depth, q, 0), num_meas_ + q);
        set_bit(mut(depth, q, 1), num_meas_ + nq_ + q);
    }
    // Walk backwards: the effect of a Pauli before step s is the effect of its image after step s, plus any
    // measurement it flips in step s.
    for (size_t s = depth; s-- > 0;) {
        uint32_t b = (uint32_t)s;
        for (uint32_t q = 0; q < nq_; q++) {
            std::copy(mut(b + 1, q, 0), mut(b + 1, q, 0) + 2 * words_, mut(b, q, 0));
        }
        const auto &step = c.steps()[s];
        for (size_t i = 0; i < step.size(); i++) {
            const Location &l = step[i];
            switch (l.op) {
                case Op::PrepZ:
                case Op::PrepX:
                    std::fill(mut(b, l.q0, 0), mut(b, l.q0, 0) + 2 * words_, 0);
                    break;
                case Op::CNOT: {
                    uint64_t *xc = mut(b, l.q0, 0);
                    const uint64_t *xt = mut(b + 1, l.q1, 0);
                    uint64_t *zt = mut(b, l.q1, 1);
                    const uint64_t *zc = mut(b + 1, l.q0, 1);
                    for (size_t w = 0; w < words_; w++) {
                        xc[w] ^= xt[w];
                        zt[w] ^= zc[w];
                    }
                    break;
                }
                case Op::MeasZ:
                    set_bit(mut(b, l.q0, 0), meas_label_[s][i]);
                    break;
                case Op::MeasX:
                    set_bit(mut(b, l.q0, 1), meas_label_[s][i]);
                    break;
                case Op::Idle:
                    break;
            }
        }
    }
}

void CompiledCircuit::inject(State &st, uint32_t boundary, uint32_t q, uint8_t pauli) const {
    if (pauli & 1) {
        xor_in(st, effect(boundary, q, 0));
    }
    if (pauli & 2) {
        xor_in(st, effect(boundary, q, 1));
    }
}

void CompiledCircuit::inject_block(State &st, uint32_t boundary, const Block &b, const PauliOperator &p) const {
    if (p.n() != b.size) {
        throw DimensionError("Pauli on " + std::to_string(p.n()) + " qubits injected into block " + b.name);
    }
    for (size_t i : p.x.ones()) {
        xor_in(st, effect(boundary, b.first + (uint32_t)i, 0));
    }
    for (size_t i : p.z.ones()) {
        xor_in(st, effect(boundary, b.first + (uint32_t)i, 1));
    }
}

void CompiledCircuit::apply_fault(State &st, const FaultEvent &f) const {
    const Location &l = location_of(circuit_, f);
    uint32_t after = f.step + 1;
    switch (l.op) {
        case Op::PrepZ:
            inject(st, after, l.q0, 1);
            break;
        case Op::PrepX:
            inject(st, after, l.q0, 2);
            break;
        case Op::CNOT:
            inject(st, after, l.q0, f.payload & 3);
            inject(st, after, l.q1, f.payload >> 2);
            break;
        case Op::Idle:
            inject(st, after, l.q0, f.payload);
            break;
        case Op::MeasZ:
        case Op::MeasX: {
            int32_t lab = meas_label_[f.step][f.index];
            st[lab >> 6] ^= uint64_t{1} << (lab & 63);
            break;
        }
    }
}

bool CompiledCircuit::parity(const State &st, const std::vector<uint32_t> &labels) const {
    bool p = false;
    for (uint32_t l : labels) {
        p ^= measurement(st, l);
    }
    return p;
}

PauliOperator CompiledCircuit::block_frame(const State &st, const Block &b) const {
    PauliOperator p(b.size);
    for (uint32_t i = 0; i < b.size; i++) {
        if (frame_x(st, b.first + i)) {
            p.x.set(i, true);
        }
        if (frame_z(st, b.first + i)) {
            p.z.set(i, true);
        }
    }
    return p;
}

bool CompiledCircuit::accepted(const State &st) const {
    for (const auto &ch : circuit_.checks()) {
        if (parity(st, ch.labels)) {
            return false;
        }
    }
    return true;
}

SimRecord CompiledCircuit::record(const State &st) const {
    SimRecord rec{BitVector(num_meas_), PauliOperator(nq_), BitVector(circuit_.checks().size())};
    for (size_t i = 0; i < num_meas_; i++) {
        rec.measurements.set(i, measurement(st, i));
    }
    for (uint32_t q = 0; q < nq_; q++) {
        rec.frame.x.set(q, frame_x(st, q));
        rec.frame.z.set(q, frame_z(st, q));
    }
    for (size_t k = 0; k < circuit_.checks().size(); k++) {
        rec.checks.set(k, parity(st, circuit_.checks()[k].labels));
    }
    return rec;
}

SimRecord CompiledCircuit::run(const PauliOperator &input_error, const std::vector<FaultEvent> &faults,
                               const std::vector<Injection> &injections) const {
    State st = zero_state();
    if (input_error.n() == nq_) {
        for (size_t q : input_error.x.ones()) {
            inject(st, 0, (uint32_t)q, 1);
        }
        for (size_t q : input_error.z.ones()) {
            inject(st, 0, (uint32_t)q, 2);
        }
    } else {
        if (input_error.n() != data_qubits_.size()) {
            throw DimensionError("input error acts on " + std::to_string(input_error.n()) +
                                 " qubits, circuit has " + std::to_string(data_qubits_.size()) + " data qubits");
        }
        for (size_t i : input_error.x.ones()) {
            inject(st, 0, data_qubits_[i], 1);
        }
        for (size_t i : input_error.z.ones()) {
            inject(st, 0, data_qubits_[i], 2);
        }
    }
    apply_faults(st, faults);
    for (const auto &inj : injections) {
        inject(st, inj.boundary, inj.qubit, inj.pauli);
    }
    return record(st);
}

}  // namespace ftdnd
