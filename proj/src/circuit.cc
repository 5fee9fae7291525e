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

#include "ftdnd/circuit.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "ftdnd/gf2.h"

namespace ftdnd {

const char *op_name(Op op) {
    switch (op) {
        case Op::PrepZ:
            return "PrepZ";
        case Op::PrepX:
            return "PrepX";
        case Op::CNOT:
            return "CNOT";
        case Op::MeasZ:
            return "MeasZ";
        case Op::MeasX:
            return "MeasX";
        case Op::Idle:
            return "Idle";
    }
    return "?";
}

size_t fault_alphabet_size(Op op) {
    switch (op) {
        case Op::CNOT:
            return 15;
        case Op::Idle:
            return 3;
        default:
            return 1;
    }
}

namespace {

bool is_prep(Op op) {
    return op == Op::PrepZ || op == Op::PrepX;
}

bool is_meas(Op op) {
    return op == Op::MeasZ || op == Op::MeasX;
}

Op parse_op(const std::string &s) {
    for (Op op : {Op::PrepZ, Op::PrepX, Op::CNOT, Op::MeasZ, Op::MeasX, Op::Idle}) {
        if (s == op_name(op)) {
            return op;
        }
    }
    throw ParseError("unknown circuit operation '" + s + "'");
}

const char *role_name(Role r) {
    switch (r) {
        case Role::Data:
            return "data";
        case Role::Ancilla:
            return "ancilla";
        case Role::Verifier:
            return "verifier";
    }
    return "?";
}

Role parse_role(const std::string &s) {
    if (s == "data") {
        return Role::Data;
    }
    if (s == "ancilla") {
        return Role::Ancilla;
    }
    if (s == "verifier") {
        return Role::Verifier;
    }
    throw ParseError("unknown qubit role '" + s + "'");
}

}  // namespace

Circuit::Circuit(size_t num_qubits) : roles_(num_qubits, Role::Data) {
}

std::optional<uint32_t> Circuit::live_from(uint32_t q) const {
    auto it = live_from_.find(q);
    if (it == live_from_.end()) {
        return std::nullopt;
    }
    return it->second;
}

size_t Circuit::num_locations() const {
    size_t c = 0;
    for (const auto &s : steps_) {
        c += s.size();
    }
    return c;
}

size_t Circuit::num_single_faults() const {
    size_t c = 0;
    for (const auto &s : steps_) {
        for (const auto &l : s) {
            c += fault_alphabet_size(l.op);
        }
    }
    return c;
}

const Block &Circuit::block(const std::string &name) const {
    for (const auto &b : blocks_) {
        if (b.name == name) {
            return b;
        }
    }
    throw std::invalid_argument("circuit has no block '" + name + "'");
}

bool Circuit::has_block(const std::string &name) const {
    for (const auto &b : blocks_) {
        if (b.name == name) {
            return true;
        }
    }
    return false;
}

bool Circuit::has_label(const std::string &name) const {
    for (const auto &l : labels_) {
        if (l.name == name) {
            return true;
        }
    }
    return false;
}

size_t Circuit::label_index(const std::string &name) const {
    for (size_t i = 0; i < labels_.size(); i++) {
        if (labels_[i].name == name) {
            return i;
        }
    }
    throw std::invalid_argument("circuit has no measurement label '" + name + "'");
}

std::string Circuit::meta_value(const std::string &key, const std::string &fallback) const {
    auto it = meta_.find(key);
    return it == meta_.end() ? fallback : it->second;
}

int Circuit::meta_int(const std::string &key, int fallback) const {
    auto it = meta_.find(key);
    return it == meta_.end() ? fallback : std::stoi(it->second);
}

void Circuit::add_block(const std::string &name, uint32_t first, uint32_t size, Role role) {
    if (first + size > roles_.size()) {
        roles_.resize(first + size, Role::Data);
    }
    for (uint32_t q = first; q < first + size; q++) {
        roles_[q] = role;
    }
    blocks_.push_back({name, first, size, role});
}

void Circuit::ensure_depth(size_t depth) {
    if (steps_.size() < depth) {
        steps_.resize(depth);
    }
}

void Circuit::add(size_t step, Location loc) {
    ensure_depth(step + 1);
    uint32_t top = loc.op == Op::CNOT ? std::max(loc.q0, loc.q1) : loc.q0;
    if (top >= roles_.size()) {
        roles_.resize(top + 1, Role::Data);
    }
    steps_[step].push_back(loc);
}

void Circuit::measure(size_t step, Op op, uint32_t q, const std::string &label) {
    add(step, {op, q});
    labels_.push_back({label, (uint32_t)step, q});
}

void Circuit::add_check(const std::string &name, std::vector<uint32_t> labels) {
    checks_.push_back({name, std::move(labels)});
}

void Circuit::set_meta(const std::string &key, const std::string &value) {
    meta_[key] = value;
}

void Circuit::set_live_from(uint32_t q, uint32_t step) {
    live_from_[q] = step;
}

void Circuit::strip_idles() {
    for (auto &s : steps_) {
        s.erase(std::remove_if(s.begin(), s.end(), [](const Location &l) { return l.op == Op::Idle; }), s.end());
    }
}

void Circuit::finalize() {
    strip_idles();
    size_t nq = roles_.size();
    std::vector<std::vector<int>> at(nq, std::vector<int>(steps_.size(), -1));
    for (size_t s = 0; s < steps_.size(); s++) {
        for (size_t i = 0; i < steps_[s].size(); i++) {
            const auto &l = steps_[s][i];
            for (int k = 0; k < (l.op == Op::CNOT ? 2 : 1); k++) {
                uint32_t q = k ? l.q1 : l.q0;
                if (at[q][s] >= 0) {
                    throw std::logic_error("qubit " + std::to_string(q) + " used twice in step " + std::to_string(s));
                }
                at[q][s] = (int)i;
            }
        }
    }
    for (uint32_t q = 0; q < nq; q++) {
        auto lf = live_from(q);
        bool prepared_first = false;
        for (size_t s = 0; s < steps_.size(); s++) {
            if (at[q][s] >= 0) {
                prepared_first = is_prep(steps_[s][at[q][s]].op);
                break;
            }
        }
        bool alive = !lf && !prepared_first;
        for (size_t s = 0; s < steps_.size(); s++) {
            if (!alive && lf && *lf == s) {
                alive = true;
            }
            if (at[q][s] >= 0) {
                Op op = steps_[s][at[q][s]].op;
                if (is_prep(op)) {
                    alive = true;
                } else if (is_meas(op)) {
                    alive = false;
                }
            } else if (alive) {
                steps_[s].push_back({Op::Idle, q});
            }
        }
    }
    for (auto &s : steps_) {
        std::sort(s.begin(), s.end(), [](const Location &a, const Location &b) { return a.q0 < b.q0; });
    }
    check_invariants();
}

void Circuit::check_invariants() const {
    size_t nq = roles_.size();
    std::vector<std::vector<bool>> measured(steps_.size(), std::vector<bool>(nq, false));
    for (size_t s = 0; s < steps_.size(); s++) {
        std::vector<bool> used(nq, false);
        for (const auto &l : steps_[s]) {
            if (l.op == Op::CNOT && l.q0 == l.q1) {
                throw std::logic_error("CNOT with identical control and target in step " + std::to_string(s));
            }
            for (int k = 0; k < (l.op == Op::CNOT ? 2 : 1); k++) {
                uint32_t q = k ? l.q1 : l.q0;
                if (q >= nq) {
                    throw std::logic_error("qubit id out of range in step " + std::to_string(s));
                }
                if (used[q]) {
                    throw std::logic_error("qubit " + std::to_string(q) + " used twice in step " + std::to_string(s));
                }
                used[q] = true;
            }
            if (is_meas(l.op)) {
                measured[s][l.q0] = true;
            }
        }
    }
    size_t meas_count = 0;
    for (const auto &s : steps_) {
        for (const auto &l : s) {
            meas_count += is_meas(l.op);
        }
    }
    if (meas_count != labels_.size()) {
        throw std::logic_error("measurement locations and labels differ in number");
    }
    std::set<std::pair<uint32_t, uint32_t>> seen;
    std::set<std::string> names;
    for (const auto &lab : labels_) {
        if (lab.step >= steps_.size() || lab.qubit >= nq || !measured[lab.step][lab.qubit]) {
            throw std::logic_error("label " + lab.name + " does not point at a measurement");
        }
        if (!seen.insert({lab.step, lab.qubit}).second || !names.insert(lab.name).second) {
            throw std::logic_error("duplicate measurement label " + lab.name);
        }
    }
    for (const auto &c : checks_) {
        for (uint32_t i : c.labels) {
            if (i >= labels_.size()) {
                throw std::logic_error("check " + c.name + " references a missing label");
            }
        }
    }
}

void Circuit::append(const Circuit &other, const std::vector<uint32_t> &qubit_map, size_t step_offset,
                     const std::string &prefix, bool copy_blocks) {
    auto map = [&](uint32_t q) { return qubit_map.empty() ? q : qubit_map.at(q); };
    size_t label_offset = labels_.size();
    ensure_depth(step_offset + other.depth());
    for (size_t s = 0; s < other.steps_.size(); s++) {
        for (const auto &l : other.steps_[s]) {
            if (l.op == Op::Idle) {
                continue;
            }
            Location m = l;
            m.q0 = map(l.q0);
            if (l.op == Op::CNOT) {
                m.q1 = map(l.q1);
            }
            add(step_offset + s, m);
        }
    }
    for (const auto &lab : other.labels_) {
        labels_.push_back({prefix + lab.name, (uint32_t)(lab.step + step_offset), map(lab.qubit)});
    }
    for (const auto &c : other.checks_) {
        std::vector<uint32_t> ls;
        for (uint32_t i : c.labels) {
            ls.push_back(i + label_offset);
        }
        checks_.push_back({prefix + c.name, ls});
    }
    for (const auto &[q, s] : other.live_from_) {
        live_from_[map(q)] = s + step_offset;
    }
    if (copy_blocks) {
        for (const auto &b : other.blocks_) {
            uint32_t first = map(b.first);
            for (uint32_t i = 0; i < b.size; i++) {
                if (map(b.first + i) != first + i) {
                    throw std::logic_error("block " + b.name + " is not contiguous after remapping");
                }
            }
            add_block(prefix + b.name, first, b.size, b.role);
        }
    }
}

std::string render_circuit(const Circuit &c) {
    std::ostringstream out;
    out << "circuit v1\n";
    out << "qubits " << c.num_qubits() << "\n";
    for (const auto &b : c.blocks()) {
        out << "block " << b.name << " " << b.first << " " << b.size << " " << role_name(b.role) << "\n";
    }
    for (const auto &[k, v] : c.meta()) {
        out << "meta " << k << " " << v << "\n";
    }
    for (uint32_t q = 0; q < c.num_qubits(); q++) {
        if (auto lf = c.live_from(q)) {
            out << "live " << q << " " << *lf << "\n";
        }
    }
    for (size_t s = 0; s < c.depth(); s++) {
        out << "step " << s << "\n";
        for (const auto &l : c.steps()[s]) {
            out << "  " << op_name(l.op) << " " << l.q0;
            if (l.op == Op::CNOT) {
                out << " " << l.q1;
            }
            out << "\n";
        }
    }
    for (const auto &lab : c.labels()) {
        out << "label " << lab.name << " = (" << lab.step << ", " << lab.qubit << ")\n";
    }
    for (const auto &ch : c.checks()) {
        out << "check " << ch.name << " =";
        for (uint32_t i : ch.labels) {
            out << " " << c.labels()[i].name;
        }
        out << "\n";
    }
    return out.str();
}

Circuit parse_circuit(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    Circuit c;
    long current_step = -1;
    bool header = false;
    size_t line_no = 0;
    std::vector<std::pair<std::string, std::vector<std::string>>> pending_checks;
    std::vector<MeasurementLabel> pending_labels;
    std::vector<std::pair<size_t, Location>> locations;
    auto fail = [&](const std::string &msg) { throw ParseError("circuit line " + std::to_string(line_no) + ": " + msg); };
    while (std::getline(in, line)) {
        line_no++;
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word)) {
            continue;
        }
        if (!header) {
            std::string version;
            ls >> version;
            if (word != "circuit" || version != "v1") {
                fail("expected 'circuit v1' header");
            }
            header = true;
        } else if (word == "qubits") {
            size_t n;
            if (!(ls >> n)) {
                fail("bad qubit count");
            }
            c = Circuit(n);
        } else if (word == "block") {
            std::string name, role;
            uint32_t first, size;
            if (!(ls >> name >> first >> size >> role)) {
                fail("bad block line");
            }
            c.add_block(name, first, size, parse_role(role));
        } else if (word == "meta") {
            std::string k, v;
            ls >> k;
            std::getline(ls, v);
            v.erase(0, v.find_first_not_of(' '));
            c.set_meta(k, v);
        } else if (word == "live") {
            uint32_t q, s;
            if (!(ls >> q >> s)) {
                fail("bad live line");
            }
            c.set_live_from(q, s);
        } else if (word == "step") {
            long s;
            if (!(ls >> s) || s != current_step + 1) {
                fail("steps must be numbered consecutively from 0");
            }
            current_step = s;
            c.ensure_depth(s + 1);
        } else if (word == "label") {
            std::string name, eq, rest;
            ls >> name >> eq;
            std::getline(ls, rest);
            uint32_t s, q;
            if (eq != "=" || std::sscanf(rest.c_str(), " (%u , %u)", &s, &q) != 2) {
                fail("bad label line");
            }
            pending_labels.push_back({name, s, q});
        } else if (word == "check") {
            std::string name, eq, lab;
            ls >> name >> eq;
            if (eq != "=") {
                fail("bad check line");
            }
            std::vector<std::string> names;
            while (ls >> lab) {
                names.push_back(lab);
            }
            pending_checks.push_back({name, names});
        } else {
            if (current_step < 0) {
                fail("location before the first step");
            }
            Op op = parse_op(word);
            Location l{op, 0, 0};
            if (!(ls >> l.q0)) {
                fail("missing qubit");
            }
            if (op == Op::CNOT && !(ls >> l.q1)) {
                fail("CNOT needs control and target");
            }
            if (l.q0 >= c.num_qubits() || (op == Op::CNOT && l.q1 >= c.num_qubits())) {
                fail("qubit id out of range");
            }
            locations.push_back({(size_t)current_step, l});
        }
    }
    if (!header) {
        throw ParseError("empty circuit file");
    }
    // Measurement locations are re-added through measure() so that labels stay attached.
    for (const auto &[s, l] : locations) {
        if (l.op == Op::MeasZ || l.op == Op::MeasX) {
            auto it = std::find_if(pending_labels.begin(), pending_labels.end(),
                                   [&](const MeasurementLabel &m) { return m.step == s && m.qubit == l.q0; });
            if (it == pending_labels.end()) {
                throw ParseError("measurement at step " + std::to_string(s) + " qubit " + std::to_string(l.q0) +
                                 " has no label");
            }
        } else {
            c.add(s, l);
        }
    }
    for (const auto &lab : pending_labels) {
        auto it = std::find_if(locations.begin(), locations.end(), [&](const auto &sl) {
            return sl.first == lab.step && sl.second.q0 == lab.qubit &&
                   (sl.second.op == Op::MeasZ || sl.second.op == Op::MeasX);
        });
        if (it == locations.end()) {
            throw ParseError("label " + lab.name + " does not point at a measurement");
        }
        c.measure(lab.step, it->second.op, lab.qubit, lab.name);
    }
    for (const auto &[name, names] : pending_checks) {
        std::vector<uint32_t> idx;
        for (const auto &n : names) {
            idx.push_back((uint32_t)c.label_index(n));
        }
        c.add_check(name, idx);
    }
    c.finalize();
    return c;
}

Circuit load_circuit_file(const std::string &path) {
    std::ifstream f(path);
    if (!f) {
        throw std::runtime_error("cannot open circuit file " + path);
    }
    std::stringstream buf;
    buf << f.rdbuf();
    return parse_circuit(buf.str());
}

std::vector<std::array<int, 4>> surface_plaquettes(const StabilizerCode &code) {
    size_t d = (size_t)std::llround(std::sqrt((double)code.n));
    if (d * d != code.n) {
        throw std::invalid_argument("code " + code.name + " is not a rotated surface code");
    }
    auto gens = code.generators();
    std::vector<std::array<int, 4>> out;
    for (size_t g = 0; g < gens.size(); g++) {
        const auto &gen = gens[g];
        BitVector support = gen.x;
        support |= gen.z;
        bool found = false;
        for (int i = -1; i < (int)d && !found; i++) {
            for (int j = -1; j < (int)d && !found; j++) {
                std::array<int, 4> corners;
                BitVector face(code.n);
                int rows[4] = {i, i, i + 1, i + 1};
                int cols[4] = {j, j + 1, j, j + 1};
                for (int c = 0; c < 4; c++) {
                    bool inside = rows[c] >= 0 && rows[c] < (int)d && cols[c] >= 0 && cols[c] < (int)d;
                    corners[c] = inside ? rows[c] * (int)d + cols[c] : -1;
                    if (inside) {
                        face.set(corners[c], true);
                    }
                }
                if (face.popcount() >= 2 && face == support) {
                    out.push_back(corners);
                    found = true;
                }
            }
        }
        if (!found) {
            throw std::invalid_argument("generator " + gen.str() + " is not a plaquette of the rotated layout");
        }
    }
    return out;
}

Circuit surface_cycle(const StabilizerCode &code, const SurfaceSchedule &schedule) {
    auto plaquettes = surface_plaquettes(code);
    uint32_t n = code.n;
    size_t nz = code.z_generators.size();
    Circuit c(n + plaquettes.size());
    c.add_block("data", 0, n, Role::Data);
    c.add_block("anc_z", n, nz, Role::Ancilla);
    c.add_block("anc_x", n + nz, code.x_generators.size(), Role::Ancilla);
    c.ensure_depth(6);
    for (size_t a = 0; a < plaquettes.size(); a++) {
        bool z_type = a < nz;
        uint32_t anc = n + a;
        c.add(0, {z_type ? Op::PrepZ : Op::PrepX, anc});
        const auto &order = z_type ? schedule.z_order : schedule.x_order;
        for (size_t slot = 0; slot < 4; slot++) {
            int q = plaquettes[a][(int)order[slot]];
            if (q < 0) {
                continue;
            }
            if (z_type) {
                c.add(1 + slot, {Op::CNOT, (uint32_t)q, anc});
            } else {
                c.add(1 + slot, {Op::CNOT, anc, (uint32_t)q});
            }
        }
    }
    for (size_t a = 0; a < plaquettes.size(); a++) {
        bool z_type = a < nz;
        std::string label = (z_type ? "Z" : "X") + std::to_string(z_type ? a + 1 : a - nz + 1);
        c.measure(5, z_type ? Op::MeasZ : Op::MeasX, n + a, label);
    }
    c.set_meta("code", code.name);
    c.set_meta("kind", "surface_cycle");
    c.finalize();
    return c;
}

Circuit surface_cycle(int d) {
    if (d == 3) {
        return surface_cycle(builtin_code("surface17"));
    }
    if (d == 5) {
        return surface_cycle(builtin_code("surface49"));
    }
    throw std::invalid_argument("surface_cycle supports d = 3 or 5, got " + std::to_string(d));
}

Circuit surface_rounds(const StabilizerCode &code, size_t rounds, const SurfaceSchedule &schedule) {
    Circuit cycle = surface_cycle(code, schedule);
    Circuit c(cycle.num_qubits());
    for (size_t r = 0; r < rounds; r++) {
        c.append(cycle, {}, 6 * r, "R" + std::to_string(r + 1) + ".", false);
    }
    for (const auto &b : cycle.blocks()) {
        c.add_block(b.name, b.first, b.size, b.role);
    }
    c.set_meta("code", code.name);
    c.set_meta("kind", "surface_rounds");
    c.finalize();
    return c;
}

namespace {

// Controls and targets are disjoint, so the CNOTs commute and form a bipartite graph; an edge colouring
// with max-degree colours (alternating-path recolouring) gives a depth-optimal schedule.
void schedule_cnots(Circuit &c, const std::vector<std::pair<uint32_t, uint32_t>> &cnots, size_t first_step) {
    size_t colours = 0;
    std::map<uint32_t, size_t> degree;
    for (const auto &[a, b] : cnots) {
        colours = std::max({colours, ++degree[a], ++degree[b]});
    }
    // at[v][k]: the other end of v's edge with colour k, or -1
    std::map<uint32_t, std::vector<int64_t>> at;
    for (const auto &[v, d] : degree) {
        at[v].assign(colours, -1);
    }
    auto free_colour = [&](uint32_t v) {
        const auto &row = at[v];
        return (size_t)(std::find(row.begin(), row.end(), -1) - row.begin());
    };
    for (const auto &[a, b] : cnots) {
        size_t ca = free_colour(a), cb = free_colour(b);
        if (at[b][ca] != -1) {
            // flip the ca/cb path leaving b so ca becomes free at b; in a bipartite graph it never reaches a
            std::vector<uint32_t> path{b};
            size_t k = ca;
            for (int64_t w = at[b][ca]; w != -1; w = at[(uint32_t)w][k == ca ? cb : ca], k = k == ca ? cb : ca) {
                path.push_back((uint32_t)w);
            }
            std::vector<std::array<int64_t, 3>> edges;
            k = ca;
            for (size_t i = 0; i + 1 < path.size(); i++, k = k == ca ? cb : ca) {
                edges.push_back({path[i], path[i + 1], (int64_t)k});
            }
            for (const auto &e : edges) {
                at[(uint32_t)e[0]][e[2]] = -1;
                at[(uint32_t)e[1]][e[2]] = -1;
            }
            for (const auto &e : edges) {
                size_t other = (size_t)e[2] == ca ? cb : ca;
                at[(uint32_t)e[0]][other] = e[1];
                at[(uint32_t)e[1]][other] = e[0];
            }
        }
        at[a][ca] = b;
        at[b][ca] = a;
    }
    for (const auto &[a, b] : cnots) {
        const auto &row = at[a];
        size_t k = (size_t)(std::find(row.begin(), row.end(), (int64_t)b) - row.begin());
        c.add(first_step + k, {Op::CNOT, a, b});
    }
}

}  // namespace

Circuit default_css_prep(const StabilizerCode &code, PrepBasis basis) {
    if (!code.is_css()) {
        throw std::invalid_argument("default_css_prep requires a CSS code");
    }
    bool zero = basis == PrepBasis::Zero;
    auto ech = gf2_rref(zero ? code.hx() : code.hz());
    uint32_t n = code.n;
    Circuit c(n);
    c.add_block("anc", 0, n, Role::Ancilla);
    std::vector<bool> pivot(n, false);
    for (size_t p : ech.pivots) {
        pivot[p] = true;
    }
    for (uint32_t q = 0; q < n; q++) {
        // |0>: pivots start in |+> and fan X out; |+>: pivots start in |0> and collect X.
        bool plus_state = zero ? pivot[q] : !pivot[q];
        c.add(0, {plus_state ? Op::PrepX : Op::PrepZ, q});
    }
    std::vector<std::pair<uint32_t, uint32_t>> cnots;
    for (size_t r = 0; r < ech.rows.size(); r++) {
        uint32_t p = ech.pivots[r];
        for (size_t j : ech.rows[r].ones()) {
            if (j == p) {
                continue;
            }
            if (zero) {
                cnots.push_back({p, (uint32_t)j});
            } else {
                cnots.push_back({(uint32_t)j, p});
            }
        }
    }
    schedule_cnots(c, cnots, 1);
    c.set_meta("code", code.name);
    c.set_meta("kind", "encoder");
    c.set_meta("basis", zero ? "zero" : "plus");
    c.finalize();
    return c;
}

VerificationPlan VerificationPlan::for_code(const StabilizerCode &code) {
    VerificationPlan p;
    p.primary = std::max<size_t>(1, code.t);
    p.secondary = code.t >= 2 ? code.t : 0;
    return p;
}

Circuit verified_prep(const StabilizerCode &code, PrepBasis basis, const Circuit &encoder, const VerificationPlan &plan) {
    uint32_t n = code.n;
    if (encoder.num_qubits() != n) {
        throw std::invalid_argument("encoder acts on " + std::to_string(encoder.num_qubits()) + " qubits, code has " +
                                    std::to_string(n));
    }
    bool zero = basis == PrepBasis::Zero;
    // Every block but the primary verifiers: the ancilla, then each secondary verifier. All of them get
    // the primary checks; the ancilla then gets the secondary checks against the already checked copies.
    size_t checked = 1 + plan.secondary;
    size_t num_blocks = checked * (1 + plan.primary);
    size_t e = encoder.depth();
    Circuit c(n * num_blocks);
    std::vector<uint32_t> map(n);
    uint32_t next_base = 0;
    auto add_copy = [&](const std::string &name, Role role) {
        uint32_t base = next_base;
        next_base += n;
        for (uint32_t q = 0; q < n; q++) {
            map[q] = base + q;
        }
        c.append(encoder, map, 0, name.empty() ? "" : name + ".", false);
        c.add_block(name.empty() ? "anc" : name, base, n, role);
        return base;
    };
    auto hz = code.hz();
    auto hx = code.hx();
    // Couples `target_base` to a fresh verifier copy at step `couple` and adds its checks.
    auto check = [&](uint32_t subject, uint32_t verifier, const std::string &name, bool primary, size_t couple) {
        // Primary checks look for the error type this state spreads (X for |0>, Z for |+>).
        bool subject_is_control = zero == primary;
        bool measure_z = subject_is_control;
        for (uint32_t q = 0; q < n; q++) {
            if (subject_is_control) {
                c.add(couple, {Op::CNOT, subject + q, verifier + q});
            } else {
                c.add(couple, {Op::CNOT, verifier + q, subject + q});
            }
        }
        size_t first_label = c.labels().size();
        for (uint32_t q = 0; q < n; q++) {
            c.measure(couple + 1, measure_z ? Op::MeasZ : Op::MeasX, verifier + q, name + ".m" + std::to_string(q + 1));
        }
        const auto &rows = measure_z ? hz : hx;
        for (size_t r = 0; r < rows.size(); r++) {
            std::vector<uint32_t> ls;
            for (size_t q : rows[r].ones()) {
                ls.push_back((uint32_t)(first_label + q));
            }
            c.add_check(name + ".h" + std::to_string(r + 1), ls);
        }
        if (primary) {
            const BitVector &logical = measure_z ? code.logical_z.z : code.logical_x.x;
            std::vector<uint32_t> ls;
            for (size_t q : logical.ones()) {
                ls.push_back((uint32_t)(first_label + q));
            }
            c.add_check(name + ".logical", ls);
        }
    };
    std::vector<std::pair<std::string, uint32_t>> subjects{{"", add_copy("", Role::Ancilla)}};
    for (size_t j = 0; j < plan.secondary; j++) {
        std::string name = "sec" + std::to_string(j + 1);
        subjects.push_back({name, add_copy(name, Role::Verifier)});
    }
    for (const auto &[name, base] : subjects) {
        for (size_t v = 0; v < plan.primary; v++) {
            std::string vname = (name.empty() ? "" : name + ".") + "ver" + std::to_string(v + 1);
            check(base, add_copy(vname, Role::Verifier), vname, true, e + v);
        }
    }
    for (size_t j = 0; j < plan.secondary; j++) {
        check(0, subjects[1 + j].second, subjects[1 + j].first, false, e + plan.primary + j);
    }
    size_t nv = plan.primary + plan.secondary;
    c.ensure_depth(nv ? e + nv + 1 : e);
    c.set_meta("code", code.name);
    c.set_meta("kind", "verified_prep");
    c.set_meta("basis", zero ? "zero" : "plus");
    c.finalize();
    return c;
}

Circuit steane_ec(const StabilizerCode &code) {
    if (!code.is_css()) {
        throw std::invalid_argument("Steane EC requires a CSS code");
    }
    uint32_t n = code.n;
    Circuit c(3 * n);
    c.add_block("data", 0, n, Role::Data);
    c.add_block("anc_plus", n, n, Role::Ancilla);
    c.add_block("anc_zero", 2 * n, n, Role::Ancilla);
    for (uint32_t q = n; q < 3 * n; q++) {
        c.set_live_from(q, 0);
    }
    for (uint32_t q = 0; q < n; q++) {
        c.add(0, {Op::CNOT, q, n + q});
        c.add(1, {Op::CNOT, 2 * n + q, q});
    }
    for (uint32_t q = 0; q < n; q++) {
        c.measure(1, Op::MeasZ, n + q, "anc_plus.m" + std::to_string(q + 1));
    }
    for (uint32_t q = 0; q < n; q++) {
        c.measure(2, Op::MeasX, 2 * n + q, "anc_zero.m" + std::to_string(q + 1));
    }
    c.set_meta("code", code.name);
    c.set_meta("kind", "steane_ec");
    c.set_meta("ec.input_block", "data");
    c.set_meta("ec.output_block", "data");
    c.set_meta("ec.first_data_step", "0");
    c.set_meta("ec.output_ready_step", "2");
    c.finalize();
    return c;
}

Circuit knill_ec(const StabilizerCode &code) {
    if (!code.is_css()) {
        throw std::invalid_argument("Knill EC requires a CSS code");
    }
    uint32_t n = code.n;
    Circuit c(3 * n);
    c.add_block("data", 0, n, Role::Data);
    c.add_block("bell_plus", n, n, Role::Ancilla);
    c.add_block("bell_zero", 2 * n, n, Role::Ancilla);
    for (uint32_t q = n; q < 3 * n; q++) {
        c.set_live_from(q, 0);
    }
    for (uint32_t q = 0; q < n; q++) {
        c.add(0, {Op::CNOT, n + q, 2 * n + q});
        c.add(1, {Op::CNOT, q, n + q});
    }
    for (uint32_t q = 0; q < n; q++) {
        c.measure(2, Op::MeasX, q, "data.m" + std::to_string(q + 1));
    }
    for (uint32_t q = 0; q < n; q++) {
        c.measure(2, Op::MeasZ, n + q, "bell_plus.m" + std::to_string(q + 1));
    }
    c.ensure_depth(4);
    c.set_meta("code", code.name);
    c.set_meta("kind", "knill_ec");
    c.set_meta("ec.input_block", "data");
    c.set_meta("ec.output_block", "bell_zero");
    c.set_meta("ec.first_data_step", "1");
    c.set_meta("ec.output_ready_step", "4");
    c.finalize();
    return c;
}

Circuit cnot_exrec(const Circuit &ec) {
    std::string kind = ec.meta_value("kind");
    if (kind != "steane_ec" && kind != "knill_ec") {
        throw std::invalid_argument("cnot_exrec expects a Steane or Knill EC unit");
    }
    const Block &in = ec.block(ec.meta_value("ec.input_block"));
    const Block &out = ec.block(ec.meta_value("ec.output_block"));
    uint32_t n = in.size;
    uint32_t per_unit = (uint32_t)ec.num_qubits() - n;
    size_t ready = ec.meta_int("ec.output_ready_step");
    size_t first_data = ec.meta_int("ec.first_data_step");
    size_t cnot_step = ready;
    size_t tec_offset = cnot_step + 1 - first_data;

    Circuit c(2 * n + 4 * per_unit);
    c.add_block("B1", 0, n, Role::Data);
    c.add_block("B2", n, n, Role::Data);
    const char *units[4] = {"LEC1", "LEC2", "TEC1", "TEC2"};
    uint32_t next = 2 * n;
    std::array<uint32_t, 2> lec_out{};
    std::array<uint32_t, 2> tec_out{};
    for (int u = 0; u < 4; u++) {
        bool lec = u < 2;
        int blk = u % 2;
        uint32_t input_first = lec ? n * blk : lec_out[blk];
        std::vector<uint32_t> map(ec.num_qubits());
        for (uint32_t q = 0; q < ec.num_qubits(); q++) {
            if (q >= in.first && q < in.first + n) {
                map[q] = input_first + (q - in.first);
            } else {
                map[q] = next++;
            }
        }
        size_t offset = lec ? 0 : tec_offset;
        c.append(ec, map, offset, std::string(units[u]) + ".", false);
        for (const auto &b : ec.blocks()) {
            if (b.name != in.name) {
                c.add_block(std::string(units[u]) + "." + b.name, map[b.first], b.size, b.role);
            }
        }
        (lec ? lec_out : tec_out)[blk] = map[out.first];
    }
    for (uint32_t q = 0; q < n; q++) {
        c.add(cnot_step, {Op::CNOT, lec_out[0] + q, lec_out[1] + q});
    }
    c.ensure_depth(tec_offset + ec.depth());
    size_t lec_meas_end = 0;
    for (const auto &lab : c.labels()) {
        if (lab.name.rfind("LEC", 0) == 0) {
            lec_meas_end = std::max<size_t>(lec_meas_end, lab.step + 1);
        }
    }
    auto block_of = [&](uint32_t first) {
        for (const auto &b : c.blocks()) {
            if (b.first == first) {
                return b.name;
            }
        }
        return std::string();
    };
    c.set_meta("code", ec.meta_value("code"));
    c.set_meta("kind", kind == "steane_ec" ? "steane_exrec" : "knill_exrec");
    c.set_meta("exrec.cnot_step", std::to_string(cnot_step));
    c.set_meta("exrec.tec_offset", std::to_string(tec_offset));
    c.set_meta("exrec.lec_meas_end", std::to_string(lec_meas_end));
    c.set_meta("exrec.lec_out1", block_of(lec_out[0]));
    c.set_meta("exrec.lec_out2", block_of(lec_out[1]));
    c.set_meta("exrec.out1", block_of(tec_out[0]));
    c.set_meta("exrec.out2", block_of(tec_out[1]));
    c.finalize();
    return c;
}

std::vector<std::string> protocol_ids() {
    return {"surface-d3", "surface-d5", "steane-d3", "steane-d5", "knill-d3", "knill-d5"};
}

ProtocolSpec make_protocol(const std::string &id, const std::string &zero_encoder_path,
                           const std::string &plus_encoder_path) {
    ProtocolSpec p;
    p.id = id;
    auto dash = id.find("-d");
    if (dash == std::string::npos) {
        throw std::invalid_argument("unknown protocol '" + id + "'");
    }
    std::string family = id.substr(0, dash);
    int d = std::atoi(id.c_str() + dash + 2);
    if (d != 3 && d != 5) {
        throw std::invalid_argument("unknown protocol '" + id + "' (distance must be 3 or 5)");
    }
    p.d = d;
    if (family == "surface") {
        p.kind = ProtocolKind::SurfaceRounds;
        p.code_name = d == 3 ? "surface17" : "surface49";
        p.max_rounds = d == 3 ? 3 : 6;
        return p;
    }
    if (family == "steane") {
        p.kind = ProtocolKind::SteaneExRec;
    } else if (family == "knill") {
        p.kind = ProtocolKind::KnillExRec;
    } else {
        throw std::invalid_argument("unknown protocol '" + id + "'");
    }
    p.code_name = d == 3 ? "steane" : "color19";
    const auto &code = builtin_code(p.code_name);
    p.plan = VerificationPlan::for_code(code);
    Circuit zero_enc = zero_encoder_path.empty() ? default_css_prep(code, PrepBasis::Zero)
                                                 : load_circuit_file(zero_encoder_path);
    Circuit plus_enc = plus_encoder_path.empty() ? default_css_prep(code, PrepBasis::Plus)
                                                 : load_circuit_file(plus_encoder_path);
    p.prep_zero = verified_prep(code, PrepBasis::Zero, zero_enc, p.plan);
    p.prep_plus = verified_prep(code, PrepBasis::Plus, plus_enc, p.plan);
    return p;
}

ProtocolSpec make_protocol(const std::string &id) {
    return make_protocol(id, "", "");
}

}  // namespace ftdnd
