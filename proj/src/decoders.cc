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

#include "ftdnd/decoders.h"

#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>

#include "ftdnd/frame_sim.h"
#include "ftdnd/noise.h"
#include "ftdnd/perf_model.h"

namespace ftdnd {

namespace {

uint32_t pack(const BitVector &v) {
    return (uint32_t)v.to_u64();
}

BitVector unpack(uint32_t m, size_t n) {
    return BitVector::from_u64(n, m);
}

template <typename T>
void write_le(std::ostream &out, T v) {
    unsigned char buf[sizeof(T)];
    for (size_t i = 0; i < sizeof(T); i++) {
        buf[i] = (unsigned char)((uint64_t)v >> (8 * i));
    }
    out.write((const char *)buf, sizeof(T));
}

template <typename T>
T read_le(std::istream &in) {
    unsigned char buf[sizeof(T)];
    if (!in.read((char *)buf, sizeof(T))) {
        throw std::runtime_error("truncated lookup-table file");
    }
    uint64_t v = 0;
    for (size_t i = 0; i < sizeof(T); i++) {
        v |= (uint64_t)buf[i] << (8 * i);
    }
    return (T)v;
}

constexpr char kMagic[6] = {'F', 'T', 'L', 'U', 'T', '\n'};
constexpr uint32_t kVersion = 1;

}  // namespace

PackedCode::PackedCode(const StabilizerCode &code) : n(code.n) {
    if (!code.is_css() || code.n > 32) {
        throw std::invalid_argument("packed form needs a CSS code on at most 32 qubits");
    }
    for (const auto &r : code.hz()) {
        hz.push_back(pack(r));
    }
    for (const auto &r : code.hx()) {
        hx.push_back(pack(r));
    }
    logical_x = pack(code.logical_x.x);
    logical_z = pack(code.logical_z.z);
    for (const auto &p : code.pure_errors_x) {
        pure_x.push_back(pack(p.x));
    }
    for (const auto &p : code.pure_errors_z) {
        pure_z.push_back(pack(p.z));
    }
}

void PackedCode::naive(uint64_t s, uint32_t &rx, uint32_t &rz) const {
    rx = rz = 0;
    for (size_t j = 0; j < pure_x.size(); j++) {
        if ((s >> j) & 1) {
            rx ^= pure_x[j];
        }
    }
    for (size_t j = 0; j < pure_z.size(); j++) {
        if ((s >> (pure_x.size() + j)) & 1) {
            rz ^= pure_z[j];
        }
    }
}

PauliOperator LookupTable::recovery(uint64_t index) const {
    if (index >= x_.size()) {
        throw std::out_of_range("syndrome index " + std::to_string(index) + " outside lookup table");
    }
    PauliOperator p(n_);
    p.x = unpack(x_[index], n_);
    p.z = unpack(z_[index], n_);
    return p;
}

void LookupTable::save(const std::string &path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write lookup table " + path);
    }
    out.write(kMagic, sizeof kMagic);
    write_le<uint32_t>(out, kVersion);
    write_le<uint32_t>(out, (uint32_t)code_name_.size());
    out.write(code_name_.data(), code_name_.size());
    write_le<uint32_t>(out, (uint32_t)n_);
    write_le<uint32_t>(out, (uint32_t)num_checks_);
    write_le<uint64_t>(out, hook_entries_);
    write_le<uint64_t>(out, x_.size());
    for (size_t i = 0; i < x_.size(); i++) {
        write_le<uint32_t>(out, x_[i]);
        write_le<uint32_t>(out, z_[i]);
        write_le<uint8_t>(out, cls_[i]);
    }
}

LookupTable LookupTable::load(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open lookup table " + path);
    }
    char magic[sizeof kMagic];
    if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0) {
        throw std::runtime_error(path + " is not a lookup-table file");
    }
    if (read_le<uint32_t>(in) != kVersion) {
        throw std::runtime_error("unsupported lookup-table version in " + path);
    }
    LookupTable t;
    uint32_t len = read_le<uint32_t>(in);
    t.code_name_.resize(len);
    in.read(t.code_name_.data(), len);
    t.n_ = read_le<uint32_t>(in);
    t.num_checks_ = read_le<uint32_t>(in);
    t.hook_entries_ = read_le<uint64_t>(in);
    uint64_t size = read_le<uint64_t>(in);
    if (t.num_checks_ > kMaxCheckBits || size != (uint64_t{1} << t.num_checks_)) {
        throw std::runtime_error("inconsistent lookup-table header in " + path);
    }
    t.x_.resize(size);
    t.z_.resize(size);
    t.cls_.resize(size);
    for (uint64_t i = 0; i < size; i++) {
        t.x_[i] = read_le<uint32_t>(in);
        t.z_[i] = read_le<uint32_t>(in);
        t.cls_[i] = read_le<uint8_t>(in);
    }
    return t;
}

LookupTable build_lookup(const StabilizerCode &code, const Circuit *cycle, size_t max_faults) {
    size_t checks = code.num_checks();
    if (checks > LookupTable::kMaxCheckBits || code.n > LookupTable::kMaxQubits) {
        throw TableSizeError("a lookup table for " + code.name + " needs 2^" + std::to_string(checks) +
                             " entries (" + format_bytes(inference_map_bytes((unsigned)checks, 2 * (unsigned)code.n)) +
                             "); for scale, a distance-9 color code table is about 8.8 exabytes");
    }
    if (!code.is_css()) {
        throw std::invalid_argument("lookup tables are built for CSS codes");
    }
    if (max_faults == SIZE_MAX) {
        max_faults = code.t;
    }
    LookupTable t;
    t.code_name_ = code.name;
    t.n_ = code.n;
    t.num_checks_ = checks;
    uint64_t size = uint64_t{1} << checks;
    size_t mz = code.z_generators.size();
    const auto &mw = min_weight_tables(code);
    t.x_.resize(size);
    t.z_.resize(size);
    t.cls_.assign(size, 0);
    uint64_t zmask = (uint64_t{1} << mz) - 1;
    for (uint64_t s = 0; s < size; s++) {
        t.x_[s] = pack(mw.x_rep(s & zmask));
        t.z_[s] = pack(mw.z_rep(s >> mz));
    }
    if (cycle == nullptr) {
        return t;
    }

    PackedCode packed(code);
    auto syn = [&](uint32_t ex, uint32_t ez) { return packed.syndrome(ex, ez); };
    // Syndromes of every error of weight <= t keep their minimum-weight entries.
    std::vector<bool> protected_slot(size, false);
    std::vector<std::pair<uint32_t, uint32_t>> all = {{0, 0}}, frontier = {{0, 0}};
    for (size_t w = 0; w < code.t; w++) {
        std::vector<std::pair<uint32_t, uint32_t>> next;
        for (auto [ex, ez] : frontier) {
            uint32_t used = ex | ez;
            int top = used ? 31 - __builtin_clz(used) : -1;
            for (size_t q = top + 1; q < code.n; q++) {
                uint32_t b = uint32_t{1} << q;
                next.push_back({ex | b, ez});
                next.push_back({ex, ez | b});
                next.push_back({ex | b, ez | b});
            }
        }
        all.insert(all.end(), next.begin(), next.end());
        frontier.swap(next);
    }
    for (auto [ex, ez] : all) {
        protected_slot[syn(ex, ez)] = true;
    }

    CompiledCircuit cc(*cycle);
    const Block &data = cycle->block("data");
    if (data.size != code.n) {
        throw std::invalid_argument("measurement cycle data block does not match code " + code.name);
    }
    // Per syndrome, one residual for each logical class (relative to the minimum-weight entry) seen.
    struct Seen {
        std::array<bool, 4> has{};
        std::array<std::pair<uint32_t, uint32_t>, 4> err{};
        std::string trace;
    };
    std::map<uint64_t, Seen> hooks;
    auto st = cc.zero_state();
    for_each_fault_set(*cycle, max_faults, [&](const std::vector<FaultEvent> &faults) {
        std::fill(st.begin(), st.end(), 0);
        cc.apply_faults(st, faults);
        uint32_t ex = 0, ez = 0;
        for (uint32_t i = 0; i < data.size; i++) {
            ex |= (uint32_t)cc.frame_x(st, data.first + i) << i;
            ez |= (uint32_t)cc.frame_z(st, data.first + i) << i;
        }
        if ((size_t)__builtin_popcount(ex | ez) <= code.t) {
            return;
        }
        uint64_t s = syn(ex, ez);
        uint8_t cls = packed.logical_bits(ex ^ t.x_[s], ez ^ t.z_[s]);
        Seen &seen = hooks[s];
        if (!seen.has[cls]) {
            seen.has[cls] = true;
            seen.err[cls] = {ex, ez};
            if (cls != 0) {
                seen.trace = format_fault_trace(*cycle, faults);
            }
        }
    });
    for (const auto &[s, seen] : hooks) {
        int classes = seen.has[0] + seen.has[1] + seen.has[2] + seen.has[3];
        if (classes > 1) {
            throw HookConflictError("hook errors with syndrome " + std::to_string(s) +
                                    " need different logical corrections; one comes from:\n" + seen.trace);
        }
        uint8_t cls = seen.has[0] ? 0 : seen.has[1] ? 1 : seen.has[2] ? 2 : 3;
        if (protected_slot[s]) {
            if (cls != 0) {
                throw HookConflictError("hook error with syndrome " + std::to_string(s) +
                                        " is not equivalent to the error of weight <= t it shares a syndrome "
                                        "with; faults:\n" + seen.trace);
            }
            continue;
        }
        t.x_[s] = seen.err[cls].first;
        t.z_[s] = seen.err[cls].second;
        t.cls_[s] = cls;
        t.hook_entries_++;
    }
    return t;
}

PauliOperator naive_decode(const StabilizerCode &code, const Syndrome &s) {
    auto pe = code.pure_errors();
    if (s.size() != pe.size()) {
        throw DimensionError("syndrome has " + std::to_string(s.size()) + " bits, code has " +
                             std::to_string(pe.size()) + " checks");
    }
    PauliOperator r(code.n);
    for (size_t j : s.ones()) {
        r *= pe[j];
    }
    return r;
}

Syndrome ft_decode_d3(const Syndrome &s1, const Syndrome &s2, const Syndrome &s3) {
    if (s1 == s2 || s1 == s3) {
        return s1;
    }
    return s3;
}

Decision ft_protocol_step(ProtocolState &st, const Syndrome &s) {
    if (st.t < 1) {
        throw std::invalid_argument("protocol needs t >= 1");
    }
    st.rounds++;
    if (st.pending_final) {
        st.last_syndrome = s;
        return Decision::DecodeNow;
    }
    if (!st.last_syndrome) {
        st.repeat_count = 1;
    } else if (*st.last_syndrome != s) {
        if (!st.increased_last_round) {
            st.n_diff++;
            st.increased_last_round = true;
            st.repeat_count = 0;
        } else {
            st.increased_last_round = false;
            st.repeat_count = 1;
        }
    } else {
        st.increased_last_round = false;
        st.repeat_count++;
    }
    st.last_syndrome = s;
    if (st.n_diff >= st.t) {
        st.pending_final = true;
        return Decision::MeasureAgain;
    }
    if (st.repeat_count >= st.t - st.n_diff + 1) {
        return Decision::DecodeNow;
    }
    return Decision::MeasureAgain;
}

ThresholdFit fit_pseudothreshold(const std::vector<ThresholdPoint> &points, int order) {
    if (order < 2) {
        throw std::invalid_argument("fit order must be at least 2");
    }
    if (points.size() < 3) {
        throw std::invalid_argument("pseudo-threshold fit needs at least 3 points");
    }
    bool weighted = true;
    for (const auto &pt : points) {
        weighted &= pt.err > 0;
    }
    double sxy = 0, sxx = 0;
    for (const auto &pt : points) {
        double x = std::pow(pt.p, order);
        double w = weighted ? 1 / (pt.err * pt.err) : 1;
        sxy += w * x * pt.p_l;
        sxx += w * x * x;
    }
    double a = sxy / sxx;
    if (!(a > 0)) {
        throw std::domain_error("fitted coefficient is not positive");
    }
    return {a, std::pow(a, -1.0 / (order - 1))};
}

Interval wilson_interval(uint64_t k, uint64_t n, double z) {
    if (n == 0) {
        return {0, 1};
    }
    double ph = (double)k / n;
    double z2 = z * z;
    double denom = 1 + z2 / n;
    double center = (ph + z2 / (2.0 * n)) / denom;
    double half = z * std::sqrt(ph * (1 - ph) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

}  // namespace ftdnd
