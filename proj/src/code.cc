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

#include "ftdnd/code.h"

#include <bit>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "builtin_code_data.h"
#include "ftdnd/gf2.h"

namespace ftdnd {

std::vector<PauliOperator> StabilizerCode::generators() const {
    std::vector<PauliOperator> g = z_generators;
    g.insert(g.end(), x_generators.begin(), x_generators.end());
    return g;
}

std::vector<PauliOperator> StabilizerCode::pure_errors() const {
    std::vector<PauliOperator> t = pure_errors_x;
    t.insert(t.end(), pure_errors_z.begin(), pure_errors_z.end());
    return t;
}

bool StabilizerCode::is_css() const {
    for (const auto &g : x_generators) {
        if (g.z.any()) {
            return false;
        }
    }
    for (const auto &g : z_generators) {
        if (g.x.any()) {
            return false;
        }
    }
    return true;
}

std::vector<BitVector> StabilizerCode::hz() const {
    std::vector<BitVector> r;
    for (const auto &g : z_generators) {
        r.push_back(g.z);
    }
    return r;
}

std::vector<BitVector> StabilizerCode::hx() const {
    std::vector<BitVector> r;
    for (const auto &g : x_generators) {
        r.push_back(g.x);
    }
    return r;
}

namespace {

std::string tag(const char *list, size_t j) {
    return std::string(list) + "[" + std::to_string(j + 1) + "]";
}

void add(std::vector<Violation> &out, std::string kind, std::string a, std::string b, std::string message) {
    out.push_back({std::move(kind), std::move(a), std::move(b), std::move(message)});
}

struct Named {
    std::string name;
    const PauliOperator *op;
};

std::vector<Named> named(const std::vector<PauliOperator> &ops, const char *list) {
    std::vector<Named> r;
    for (size_t j = 0; j < ops.size(); j++) {
        r.push_back({tag(list, j), &ops[j]});
    }
    return r;
}

/// Returns the lexicographically smaller of two n-bit masks (bit 0 is the leading character).
bool mask_lex_less(uint64_t a, uint64_t b) {
    uint64_t d = a ^ b;
    if (!d) {
        return false;
    }
    return !((a >> std::countr_zero(d)) & 1);
}

std::vector<BitVector> min_weight_half(size_t n, const std::vector<BitVector> &checks) {
    size_t m = checks.size();
    if (n > 63) {
        throw DimensionError("min-weight enumeration supports n <= 63");
    }
    std::vector<uint64_t> check_masks;
    for (const auto &c : checks) {
        check_masks.push_back(c.to_u64());
    }
    size_t count = size_t{1} << m;
    std::vector<uint64_t> best(count, 0);
    std::vector<bool> found(count, false);
    found[0] = true;
    size_t remaining = count - 1;
    for (size_t w = 1; w <= n && remaining > 0; w++) {
        std::vector<bool> found_now(count, false);
        // Gosper's hack over all n-bit masks of weight w.
        uint64_t v = (uint64_t{1} << w) - 1;
        uint64_t limit = uint64_t{1} << n;
        while (v < limit) {
            uint64_t s = 0;
            for (size_t j = 0; j < m; j++) {
                s |= uint64_t(std::popcount(v & check_masks[j]) & 1) << j;
            }
            if (!found[s]) {
                if (!found_now[s]) {
                    found_now[s] = true;
                    best[s] = v;
                    remaining--;
                } else if (mask_lex_less(v, best[s])) {
                    best[s] = v;
                }
            }
            uint64_t t = v | (v - 1);
            v = (t + 1) | (((~t & -~t) - 1) >> (std::countr_zero(v) + 1));
        }
        for (size_t s = 0; s < count; s++) {
            if (found_now[s]) {
                found[s] = true;
            }
        }
    }
    if (remaining) {
        throw std::logic_error("some syndromes are unreachable by single-type errors");
    }
    std::vector<BitVector> out;
    out.reserve(count);
    for (uint64_t b : best) {
        out.push_back(BitVector::from_u64(n, b));
    }
    return out;
}

}  // namespace

std::vector<Violation> validate(const StabilizerCode &code) {
    std::vector<Violation> out;
    size_t n = code.n;
    if (code.x_generators.size() + code.z_generators.size() != n - code.k) {
        add(out, "generator_count", "generators", "",
            "expected " + std::to_string(n - code.k) + " generators, found " +
                std::to_string(code.x_generators.size() + code.z_generators.size()));
    }
    if (code.pure_errors_x.size() != code.z_generators.size()) {
        add(out, "pure_error_count", "pure_errors_x", "z_generators", "one X-type pure error per Z generator");
    }
    if (code.pure_errors_z.size() != code.x_generators.size()) {
        add(out, "pure_error_count", "pure_errors_z", "x_generators", "one Z-type pure error per X generator");
    }
    auto all_ops = named(code.x_generators, "x_generators");
    for (auto &v : named(code.z_generators, "z_generators")) {
        all_ops.push_back(v);
    }
    for (auto &v : named(code.pure_errors_x, "pure_errors_x")) {
        all_ops.push_back(v);
    }
    for (auto &v : named(code.pure_errors_z, "pure_errors_z")) {
        all_ops.push_back(v);
    }
    all_ops.push_back({"logical_x", &code.logical_x});
    all_ops.push_back({"logical_z", &code.logical_z});
    for (const auto &op : all_ops) {
        if (op.op->n() != n) {
            add(out, "dimension", op.name, "", "operator acts on " + std::to_string(op.op->n()) + " qubits");
        }
    }
    if (!out.empty()) {
        return out;
    }

    auto gens = named(code.z_generators, "z_generators");
    for (auto &v : named(code.x_generators, "x_generators")) {
        gens.push_back(v);
    }
    for (size_t i = 0; i < gens.size(); i++) {
        for (size_t j = i + 1; j < gens.size(); j++) {
            if (!commutes(*gens[i].op, *gens[j].op)) {
                add(out, "generators_commute", gens[i].name, gens[j].name, "generators anticommute");
            }
        }
    }
    std::vector<BitVector> rows;
    for (const auto &g : gens) {
        rows.push_back(symplectic(*g.op));
    }
    if (gf2_rank(rows) != rows.size()) {
        add(out, "generators_independent", "generators", "", "generators are linearly dependent");
    }

    auto pures = named(code.pure_errors_x, "pure_errors_x");
    for (auto &v : named(code.pure_errors_z, "pure_errors_z")) {
        pures.push_back(v);
    }
    for (size_t j = 0; j < pures.size(); j++) {
        for (size_t k = 0; k < gens.size(); k++) {
            bool anti = !commutes(*pures[j].op, *gens[k].op);
            if (anti != (j == k)) {
                add(out, "pure_error_pairing", pures[j].name, gens[k].name,
                    anti ? "pure error anticommutes with a generator it must commute with"
                         : "pure error commutes with its paired generator");
            }
        }
        for (size_t k = j + 1; k < pures.size(); k++) {
            if (!commutes(*pures[j].op, *pures[k].op)) {
                add(out, "pure_errors_commute", pures[j].name, pures[k].name, "pure errors anticommute");
            }
        }
    }

    for (const auto *lname : {"logical_x", "logical_z"}) {
        const PauliOperator &l = std::string(lname) == "logical_x" ? code.logical_x : code.logical_z;
        for (const auto &g : gens) {
            if (!commutes(l, *g.op)) {
                add(out, "logical_commutes_with_stabilizer", lname, g.name, "logical operator anticommutes");
            }
        }
        if (weight(l) < code.d) {
            add(out, "logical_weight", lname, "",
                "weight " + std::to_string(weight(l)) + " below distance " + std::to_string(code.d));
        }
    }
    if (commutes(code.logical_x, code.logical_z)) {
        add(out, "logicals_anticommute", "logical_x", "logical_z", "logical_x commutes with logical_z");
    }
    if (code.t != (code.d - 1) / 2) {
        add(out, "t", "t", "", "t must equal floor((d-1)/2)");
    }
    return out;
}

Syndrome syndrome(const StabilizerCode &code, const PauliOperator &error) {
    if (error.n() != code.n) {
        throw DimensionError("syndrome: error acts on " + std::to_string(error.n()) + " qubits, code has " +
                             std::to_string(code.n));
    }
    Syndrome s(code.num_checks());
    size_t j = 0;
    for (const auto &g : code.z_generators) {
        s.set(j++, !commutes(g, error));
    }
    for (const auto &g : code.x_generators) {
        s.set(j++, !commutes(g, error));
    }
    return s;
}

BitVector syndrome_z_block(const StabilizerCode &code, const Syndrome &s) {
    BitVector r(code.z_generators.size());
    for (size_t j = 0; j < r.size(); j++) {
        r.set(j, s.get(j));
    }
    return r;
}

BitVector syndrome_x_block(const StabilizerCode &code, const Syndrome &s) {
    BitVector r(code.x_generators.size());
    size_t off = code.z_generators.size();
    for (size_t j = 0; j < r.size(); j++) {
        r.set(j, s.get(off + j));
    }
    return r;
}

Syndrome join_syndrome(const BitVector &z_block, const BitVector &x_block) {
    return concat(z_block, x_block);
}

LogicalClass logical_class_unchecked(const StabilizerCode &code, const PauliOperator &residual) {
    return {!commutes(residual, code.logical_z), !commutes(residual, code.logical_x)};
}

LogicalClass logical_class(const StabilizerCode &code, const PauliOperator &residual) {
    if (syndrome(code, residual).any()) {
        throw std::invalid_argument("logical_class: residual " + residual.str() + " has a nonzero syndrome");
    }
    return logical_class_unchecked(code, residual);
}

MinWeightTables::MinWeightTables(const StabilizerCode &code)
    : x_reps_(min_weight_half(code.n, code.hz())), z_reps_(min_weight_half(code.n, code.hx())) {
}

const MinWeightTables &min_weight_tables(const StabilizerCode &code) {
    static std::mutex mu;
    static std::map<std::string, std::unique_ptr<MinWeightTables>> cache;
    std::string key = render_code(code);
    std::lock_guard<std::mutex> lock(mu);
    auto &slot = cache[key];
    if (!slot) {
        slot = std::make_unique<MinWeightTables>(code);
    }
    return *slot;
}

PauliOperator min_weight_representative(const StabilizerCode &code, const Syndrome &s) {
    if (s.size() != code.num_checks()) {
        throw DimensionError("min_weight_representative: syndrome length mismatch");
    }
    const auto &tables = min_weight_tables(code);
    return PauliOperator(tables.x_rep(syndrome_z_block(code, s).to_u64()),
                         tables.z_rep(syndrome_x_block(code, s).to_u64()));
}

namespace {

std::string trim(const std::string &s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

StabilizerCode parse_code(const std::string &text) {
    StabilizerCode code;
    std::map<std::string, std::vector<std::string>> sections;
    std::string current;
    bool have_n = false;
    std::istringstream in(text);
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        line_no++;
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        auto colon = line.find(':');
        if (colon != std::string::npos) {
            std::string key = trim(line.substr(0, colon));
            std::string value = trim(line.substr(colon + 1));
            if (key == "name") {
                code.name = value;
            } else if (key == "n") {
                code.n = std::stoul(value);
                have_n = true;
            } else if (key == "k") {
                code.k = std::stoul(value);
            } else if (key == "d") {
                code.d = std::stoul(value);
            } else if (key == "x_generators" || key == "z_generators" || key == "pure_errors_x" ||
                       key == "pure_errors_z" || key == "logical_x" || key == "logical_z") {
                current = key;
                sections[key];
                if (!value.empty()) {
                    sections[key].push_back(value);
                }
            } else {
                throw ParseError("code file line " + std::to_string(line_no) + ": unknown key '" + key + "'");
            }
            continue;
        }
        if (current.empty()) {
            throw ParseError("code file line " + std::to_string(line_no) + ": operator outside a section");
        }
        sections[current].push_back(line);
    }
    if (!have_n) {
        throw ParseError("code file: missing n");
    }
    code.t = code.d >= 1 ? (code.d - 1) / 2 : 0;
    auto ops = [&](const char *key) {
        std::vector<PauliOperator> r;
        for (const auto &s : sections[key]) {
            r.push_back(PauliOperator::parse(s, code.n));
        }
        return r;
    };
    code.x_generators = ops("x_generators");
    code.z_generators = ops("z_generators");
    code.pure_errors_x = ops("pure_errors_x");
    code.pure_errors_z = ops("pure_errors_z");
    auto lx = ops("logical_x");
    auto lz = ops("logical_z");
    if (lx.size() != 1 || lz.size() != 1) {
        throw ParseError("code file: exactly one logical_x and one logical_z expected");
    }
    code.logical_x = lx[0];
    code.logical_z = lz[0];
    return code;
}

std::string render_code(const StabilizerCode &code) {
    std::ostringstream out;
    out << "name: " << code.name << "\nn: " << code.n << "\nk: " << code.k << "\nd: " << code.d << "\n";
    auto section = [&](const char *key, const std::vector<PauliOperator> &ops) {
        out << key << ":\n";
        for (const auto &p : ops) {
            out << "  " << p.str() << "\n";
        }
    };
    section("x_generators", code.x_generators);
    section("z_generators", code.z_generators);
    section("pure_errors_x", code.pure_errors_x);
    section("pure_errors_z", code.pure_errors_z);
    section("logical_x", {code.logical_x});
    section("logical_z", {code.logical_z});
    return out.str();
}

StabilizerCode load_code_file(const std::string &path) {
    std::ifstream f(path);
    if (!f) {
        throw std::runtime_error("cannot open code file " + path);
    }
    std::stringstream buf;
    buf << f.rdbuf();
    StabilizerCode code = parse_code(buf.str());
    auto violations = validate(code);
    if (!violations.empty()) {
        throw std::invalid_argument("code file " + path + " fails validation: " + violations[0].message + " (" +
                                    violations[0].a + ", " + violations[0].b + ")");
    }
    return code;
}

const std::vector<StabilizerCode> &builtin_codes() {
    static const std::vector<StabilizerCode> codes = [] {
        std::vector<StabilizerCode> r;
        for (const char *text : {kSteaneCode, kSurface17Code, kColor19Code, kSurface49Code}) {
            StabilizerCode code = parse_code(text);
            auto violations = validate(code);
            if (!violations.empty()) {
                throw std::logic_error("built-in code " + code.name + " fails validation: " + violations[0].message +
                                       " (" + violations[0].a + ", " + violations[0].b + ")");
            }
            r.push_back(std::move(code));
        }
        return r;
    }();
    return codes;
}

const StabilizerCode &builtin_code(const std::string &name) {
    for (const auto &c : builtin_codes()) {
        if (c.name == name) {
            return c;
        }
    }
    throw std::invalid_argument("unknown code '" + name + "' (known: steane, surface17, color19, surface49)");
}

}  // namespace ftdnd
