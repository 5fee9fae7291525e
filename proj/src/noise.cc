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

#include "ftdnd/noise.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ftdnd {

void DepolarizingParams::validate() const {
    if (!(p >= 0 && p <= 1)) {
        throw std::invalid_argument("noise strength p must lie in [0, 1], got " + std::to_string(p));
    }
}

double DepolarizingParams::rate(Op op) const {
    switch (op) {
        case Op::CNOT:
        case Op::Idle:
            return p;
        default:
            return 2 * p / 3;
    }
}

std::array<uint32_t, 4> philox4x32_10(std::array<uint32_t, 4> c, std::array<uint32_t, 2> k) {
    constexpr uint32_t M0 = 0xD2511F53, M1 = 0xCD9E8D57;
    constexpr uint32_t W0 = 0x9E3779B9, W1 = 0xBB67AE85;
    for (int round = 0; round < 10; round++) {
        uint64_t p0 = (uint64_t)M0 * c[0];
        uint64_t p1 = (uint64_t)M1 * c[2];
        uint32_t hi0 = (uint32_t)(p0 >> 32), lo0 = (uint32_t)p0;
        uint32_t hi1 = (uint32_t)(p1 >> 32), lo1 = (uint32_t)p1;
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
        k[0] += W0;
        k[1] += W1;
    }
    return c;
}

ShotRng::ShotRng(uint64_t seed, uint64_t shot) : key_{(uint32_t)seed, (uint32_t)(seed >> 32)}, shot_(shot) {
}

uint64_t ShotRng::next_u64() {
    if (used_ >= 4) {
        buf_ = philox4x32_10({(uint32_t)shot_, (uint32_t)(shot_ >> 32), (uint32_t)block_, (uint32_t)(block_ >> 32)},
                             key_);
        block_++;
        used_ = 0;
    }
    uint64_t v = (uint64_t)buf_[used_] | ((uint64_t)buf_[used_ + 1] << 32);
    used_ += 2;
    return v;
}

double ShotRng::uniform_open0() {
    return ((next_u64() >> 11) + 1) * 0x1.0p-53;
}

uint32_t ShotRng::below(uint32_t n) {
    return (uint32_t)(((unsigned __int128)next_u64() * n) >> 64);
}

FaultSampler::FaultSampler(const Circuit &circuit, const DepolarizingParams &params) {
    params.validate();
    for (uint32_t s = 0; s < circuit.depth(); s++) {
        const auto &step = circuit.steps()[s];
        for (uint32_t i = 0; i < step.size(); i++) {
            double r = params.rate(step[i].op);
            if (r <= 0) {
                continue;
            }
            auto it = std::find_if(classes_.begin(), classes_.end(), [&](const RateClass &c) { return c.rate == r; });
            if (it == classes_.end()) {
                classes_.push_back({r, r < 1 ? std::log1p(-r) : 0.0, {}});
                it = classes_.end() - 1;
            }
            it->locations.push_back({s, i, (uint8_t)fault_alphabet_size(step[i].op)});
        }
    }
}

void FaultSampler::sample(ShotRng &rng, std::vector<FaultEvent> &out) const {
    size_t start = out.size();
    for (const auto &c : classes_) {
        size_t n = c.locations.size();
        size_t pos = 0;
        while (true) {
            if (c.rate < 1) {
                double skip = std::floor(std::log(rng.uniform_open0()) / c.log1m);
                if (skip >= (double)(n - pos)) {
                    break;
                }
                pos += (size_t)skip;
            } else if (pos >= n) {
                break;
            }
            FaultEvent e = c.locations[pos];
            e.payload = (uint8_t)(1 + rng.below(e.payload));
            out.push_back(e);
            pos++;
        }
    }
    std::sort(out.begin() + start, out.end());
}

std::vector<FaultEvent> sample_faults(const Circuit &circuit, const DepolarizingParams &params, uint64_t seed,
                                      uint64_t shot) {
    FaultSampler sampler(circuit, params);
    ShotRng rng(seed, shot);
    std::vector<FaultEvent> out;
    sampler.sample(rng, out);
    return out;
}

namespace {

std::vector<FaultEvent> all_locations(const Circuit &circuit) {
    std::vector<FaultEvent> locs;
    for (uint32_t s = 0; s < circuit.depth(); s++) {
        for (uint32_t i = 0; i < circuit.steps()[s].size(); i++) {
            locs.push_back({s, i, (uint8_t)fault_alphabet_size(circuit.steps()[s][i].op)});
        }
    }
    return locs;
}

void enumerate_rec(const std::vector<FaultEvent> &locs, size_t from, size_t remaining, std::vector<FaultEvent> &cur,
                   const std::function<void(const std::vector<FaultEvent> &)> &fn) {
    if (remaining == 0) {
        fn(cur);
        return;
    }
    for (size_t i = from; i < locs.size(); i++) {
        for (uint8_t p = 1; p <= locs[i].payload; p++) {
            cur.push_back({locs[i].step, locs[i].index, p});
            enumerate_rec(locs, i + 1, remaining - 1, cur, fn);
            cur.pop_back();
        }
    }
}

}  // namespace

uint64_t count_fault_sets(const Circuit &circuit, size_t max_faults) {
    // Elementary symmetric polynomials of the alphabet sizes.
    std::vector<uint64_t> e(max_faults + 1, 0);
    e[0] = 1;
    for (const auto &l : all_locations(circuit)) {
        for (size_t k = max_faults; k >= 1; k--) {
            e[k] += e[k - 1] * l.payload;
        }
    }
    uint64_t total = 0;
    for (uint64_t v : e) {
        total += v;
    }
    return total;
}

void for_each_fault_set(const Circuit &circuit, size_t max_faults,
                        const std::function<void(const std::vector<FaultEvent> &)> &fn) {
    auto locs = all_locations(circuit);
    std::vector<FaultEvent> cur;
    for (size_t k = 0; k <= max_faults; k++) {
        enumerate_rec(locs, 0, k, cur, fn);
    }
}

std::string format_fault_trace(const Circuit &circuit, const std::vector<FaultEvent> &faults) {
    static const char *paulis = "IXZY";
    std::ostringstream out;
    for (const auto &f : faults) {
        const Location &l = circuit.steps().at(f.step).at(f.index);
        out << f.step << " " << op_name(l.op) << " " << l.q0;
        if (l.op == Op::CNOT) {
            out << " " << l.q1 << " " << paulis[f.payload & 3] << paulis[f.payload >> 2];
        } else if (l.op == Op::Idle) {
            out << " " << paulis[f.payload & 3];
        } else {
            out << " flip";
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace ftdnd
