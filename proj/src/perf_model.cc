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

#include "ftdnd/perf_model.h"

#include <cstdio>
#include <stdexcept>

#include "ftdnd/circuit.h"

namespace ftdnd {

using boost::multiprecision::cpp_int;

unsigned adder_tree_depth(uint64_t v) {
    unsigned d = 0;
    // Smallest d with 2^d >= v + 1.
    while (d < 64 && (uint64_t{1} << d) < v + 1) {
        d++;
    }
    return d;
}

double t_tot(uint64_t S, const std::vector<uint64_t> &hidden, const DelayParams &d) {
    if (S < 1) {
        throw std::invalid_argument("t_tot needs at least one syndrome bit");
    }
    double t = d.t_and + adder_tree_depth(S) * d.t_add + d.t_max;
    for (uint64_t L : hidden) {
        t += d.t_not + d.t_and + d.t_mult + adder_tree_depth(L) * d.t_add;
    }
    return t;
}

unsigned num_adders(uint64_t S, const std::vector<uint64_t> &hidden) {
    unsigned a = adder_tree_depth(S);
    for (uint64_t L : hidden) {
        a += adder_tree_depth(L);
    }
    return a;
}

double adder_leniency(uint64_t ftec_depth, uint64_t S, const std::vector<uint64_t> &hidden, double gate_delay) {
    if (ftec_depth < 1) {
        throw std::invalid_argument("FTEC depth must be at least 1");
    }
    return ftec_depth * gate_delay / num_adders(S, hidden);
}

cpp_int inference_map_bytes(unsigned syndrome_bits, unsigned bits_per_entry) {
    if (syndrome_bits < 1) {
        throw std::invalid_argument("inference map needs at least one syndrome bit");
    }
    cpp_int bits = cpp_int(1) << syndrome_bits;
    return bits * bits_per_entry / 8;
}

std::string format_bytes(const cpp_int &bytes) {
    static const char *prefixes[] = {"B", "kB", "MB", "GB", "TB", "PB", "EB"};
    int idx = 0;
    cpp_int unit = 1;
    while (idx < 6 && bytes >= unit * 1000) {
        unit *= 1000;
        idx++;
    }
    // Scale to a double via a decimal shift so values beyond 2^1024 stay representable.
    cpp_int scaled = bytes * 1000000 / unit;
    double v = scaled.convert_to<double>() / 1e6;
    char buf[64];
    if (v < 1000) {
        int decimals = v < 10 ? 2 : v < 100 ? 1 : 0;
        std::snprintf(buf, sizeof buf, "%.*f %s", decimals, v, prefixes[idx]);
    } else {
        std::snprintf(buf, sizeof buf, "%.2e %s", v, prefixes[idx]);
    }
    return buf;
}

NaiveCost naive_decode_cost(uint64_t n, uint64_t k) {
    if (n <= k) {
        throw std::invalid_argument("naive decoder cost needs n > k");
    }
    uint64_t rows = n - k;
    return {rows <= 1 ? 0u : adder_tree_depth(rows - 1), rows * ((2 * n + 63) / 64)};
}

std::vector<TimingPreset> timing_presets() {
    std::vector<TimingPreset> out;
    for (const auto &id : {"steane-d3", "steane-d5", "knill-d3", "knill-d5", "surface-d3", "surface-d5"}) {
        ProtocolSpec p = make_protocol(id);
        const auto &code = builtin_code(p.code_name);
        uint64_t per_type = code.z_generators.size();
        if (p.kind == ProtocolKind::SurfaceRounds) {
            out.push_back({id, surface_cycle(code).depth() * p.max_rounds, per_type * p.max_rounds});
        } else {
            Circuit ec = p.kind == ProtocolKind::SteaneExRec ? steane_ec(code) : knill_ec(code);
            out.push_back({id, cnot_exrec(ec).depth(), 4 * per_type});
        }
    }
    return out;
}

}  // namespace ftdnd
