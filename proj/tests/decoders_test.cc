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

#include <cmath>
#include <cstdio>
#include <random>

#include "ftdnd/frame_sim.h"
#include "ftdnd/noise.h"
#include "gtest/gtest.h"

using namespace ftdnd;

namespace {

Syndrome bits(const std::string &s) {
    Syndrome out(s.size());
    for (size_t i = 0; i < s.size(); i++) {
        out.set(i, s[i] == '1');
    }
    return out;
}

PauliOperator pauli(size_t n, const std::vector<std::pair<size_t, char>> &terms) {
    PauliOperator p(n);
    for (auto [q, c] : terms) {
        p.set(q, c);
    }
    return p;
}

std::string tmp_path(const std::string &name) {
    return testing::TempDir() + name;
}

}  // namespace

TEST(decoders, min_weight_table_reproduces_syndromes) {
    for (const auto &code : builtin_codes()) {
        if (code.num_checks() >= 24) {
            continue;
        }
        LookupTable t = build_lookup(code);
        ASSERT_EQ(t.size(), uint64_t{1} << code.num_checks());
        ASSERT_EQ(t.hook_entries(), 0u);
        for (uint64_t s = 0; s < t.size(); s++) {
            Syndrome syn = Syndrome::from_u64(code.num_checks(), s);
            PauliOperator r = t.recovery(s);
            ASSERT_EQ(syndrome(code, r), syn) << code.name << " " << s;
            ASSERT_EQ(r, min_weight_representative(code, syn));
        }
    }
}

TEST(decoders, lookup_corrects_every_low_weight_error) {
    for (const auto &name : {"steane", "surface17", "color19"}) {
        const auto &code = builtin_code(name);
        LookupTable t = build_lookup(code);
        for (size_t q = 0; q < code.n; q++) {
            for (char c : std::string("XYZ")) {
                PauliOperator e = pauli(code.n, {{q, c}});
                PauliOperator r = multiply(e, t.decode(syndrome(code, e)));
                ASSERT_EQ(logical_class(code, r), LogicalClass{}) << name << " " << e;
            }
        }
    }
    const auto &color = builtin_code("color19");
    LookupTable t = build_lookup(color);
    for (size_t a = 0; a < color.n; a++) {
        for (size_t b = a + 1; b < color.n; b++) {
            for (char ca : std::string("XYZ")) {
                for (char cb : std::string("XYZ")) {
                    PauliOperator e = pauli(color.n, {{a, ca}, {b, cb}});
                    PauliOperator r = multiply(e, t.decode(syndrome(color, e)));
                    ASSERT_EQ(logical_class(color, r), LogicalClass{}) << e;
                }
            }
        }
    }
}

TEST(decoders, steane_single_x_entry) {
    const auto &code = builtin_code("steane");
    LookupTable t = build_lookup(code);
    // Z-block "100", X-block "000".
    ASSERT_EQ(t.decode(bits("100000")), pauli(7, {{3, 'X'}}));
    ASSERT_EQ(t.decode(bits("000000")), PauliOperator(7));
}

TEST(decoders, naive_decoder_clears_every_syndrome) {
    for (const auto &name : {"steane", "surface17", "color19"}) {
        const auto &code = builtin_code(name);
        size_t m = code.num_checks();
        for (uint64_t s = 0; s < (uint64_t{1} << m); s++) {
            Syndrome syn = Syndrome::from_u64(m, s);
            ASSERT_EQ(syndrome(code, naive_decode(code, syn)), syn) << name << " " << s;
        }
    }
    ASSERT_THROW(naive_decode(builtin_code("steane"), Syndrome(5)), DimensionError);
    ASSERT_EQ(naive_decode(builtin_code("steane"), bits("110000")), pauli(7, {{1, 'X'}, {3, 'X'}}));
    ASSERT_EQ(naive_decode(builtin_code("steane"), bits("000000")), PauliOperator(7));
}

TEST(decoders, naive_differs_from_min_weight_on_single_errors) {
    const auto &code = builtin_code("steane");
    LookupTable t = build_lookup(code);
    size_t mismatches = 0;
    for (size_t q = 0; q < code.n; q++) {
        PauliOperator e = pauli(code.n, {{q, 'X'}});
        Syndrome s = syndrome(code, e);
        PauliOperator naive = multiply(e, naive_decode(code, s));
        mismatches += logical_class(code, naive).b1;
        ASSERT_FALSE(logical_class(code, multiply(e, t.decode(s))).b1);
    }
    // Pure errors are not minimum weight, so some single X errors become logical.
    ASSERT_GT(mismatches, 0u);
}

TEST(decoders, surface17_hook_table) {
    const auto &code = builtin_code("surface17");
    Circuit cycle = surface_cycle(code);
    LookupTable plain = build_lookup(code);
    LookupTable hooked = build_lookup(code, &cycle);
    ASSERT_GT(hooked.hook_entries(), 0u);
    CompiledCircuit cc(cycle);
    const Block &data = cycle.block("data");
    size_t checked = 0;
    for_each_fault_set(cycle, 1, [&](const std::vector<FaultEvent> &f) {
        auto st = cc.zero_state();
        cc.apply_faults(st, f);
        PauliOperator e = cc.block_frame(st, data);
        PauliOperator r = multiply(e, hooked.decode(syndrome(code, e)));
        ASSERT_EQ(logical_class(code, r), LogicalClass{}) << format_fault_trace(cycle, f);
        checked++;
    });
    ASSERT_GT(checked, 0u);
    // Entries for syndromes of weight-1 errors are untouched.
    for (size_t q = 0; q < code.n; q++) {
        for (char c : std::string("XYZ")) {
            uint64_t s = syndrome(code, pauli(code.n, {{q, c}})).to_u64();
            ASSERT_EQ(hooked.recovery(s), plain.recovery(s));
        }
    }
    for (uint64_t s = 0; s < hooked.size(); s++) {
        ASSERT_EQ(syndrome(code, hooked.recovery(s)).to_u64(), s);
        LogicalClass cls = logical_class(code, multiply(hooked.recovery(s), plain.recovery(s)));
        ASSERT_EQ(cls, hooked.entry_class(s));
    }
}

TEST(decoders, surface49_two_fault_hooks) {
    const auto &code = builtin_code("surface49");
    Circuit cycle = surface_cycle(code);
    LookupTable t = build_lookup(code, &cycle);
    ASSERT_GT(t.hook_entries(), 0u);
    ASSERT_EQ(t.num_checks(), 24u);
    // Every residual of up to two faults in one cycle is corrected by the table.
    CompiledCircuit cc(cycle);
    const Block &data = cycle.block("data");
    auto st = cc.zero_state();
    uint64_t sets = 0;
    for_each_fault_set(cycle, 2, [&](const std::vector<FaultEvent> &f) {
        std::fill(st.begin(), st.end(), 0);
        cc.apply_faults(st, f);
        PauliOperator e = cc.block_frame(st, data);
        PauliOperator r = multiply(e, t.decode(syndrome(code, e)));
        ASSERT_EQ(logical_class(code, r), LogicalClass{}) << format_fault_trace(cycle, f);
        sets++;
    });
    ASSERT_EQ(sets, count_fault_sets(cycle, 2));
}

TEST(decoders, save_load_round_trip) {
    const auto &code = builtin_code("surface17");
    Circuit cycle = surface_cycle(code);
    LookupTable t = build_lookup(code, &cycle);
    std::string path = tmp_path("s17.lut");
    t.save(path);
    LookupTable u = LookupTable::load(path);
    ASSERT_EQ(t, u);
    ASSERT_EQ(u.code_name(), "surface17");

    FILE *f = std::fopen(path.c_str(), "wb");
    std::fputs("garbage", f);
    std::fclose(f);
    ASSERT_THROW(LookupTable::load(path), std::runtime_error);
    ASSERT_THROW(LookupTable::load(tmp_path("missing.lut")), std::runtime_error);
}

TEST(decoders, oversized_table_is_refused) {
    StabilizerCode big = builtin_code("surface49");
    big.name = "big";
    for (int k = 0; k < 4; k++) {
        big.x_generators.push_back(big.x_generators[0]);
        big.z_generators.push_back(big.z_generators[0]);
    }
    try {
        build_lookup(big);
        FAIL() << "expected TableSizeError";
    } catch (const TableSizeError &e) {
        ASSERT_NE(std::string(e.what()).find("8.8 exabytes"), std::string::npos) << e.what();
    }
}

TEST(decoders, ft_decode_d3) {
    Syndrome a = bits("101"), b = bits("011"), c = bits("110");
    ASSERT_EQ(ft_decode_d3(a, a, c), a);
    ASSERT_EQ(ft_decode_d3(a, b, a), a);
    ASSERT_EQ(ft_decode_d3(a, b, b), b);
    ASSERT_EQ(ft_decode_d3(a, b, c), c);
}

TEST(decoders, protocol_decides_after_repeats) {
    ProtocolState st;
    st.t = 1;
    Syndrome a = bits("10"), b = bits("01");
    ASSERT_EQ(ft_protocol_step(st, a), Decision::MeasureAgain);
    ASSERT_EQ(ft_protocol_step(st, a), Decision::DecodeNow);
    ASSERT_EQ(st.rounds, 2u);

    st = ProtocolState{};
    ASSERT_EQ(ft_protocol_step(st, a), Decision::MeasureAgain);
    ASSERT_EQ(ft_protocol_step(st, b), Decision::MeasureAgain);  // n_diff reaches t
    ASSERT_EQ(ft_protocol_step(st, a), Decision::DecodeNow);
    ASSERT_EQ(*st.last_syndrome, a);
    ASSERT_EQ(st.rounds, 3u);

    // the round that moved the syndrome is not a repeat of itself
    st = ProtocolState{};
    st.t = 2;
    Syndrome zero = bits("00");
    ASSERT_EQ(ft_protocol_step(st, zero), Decision::MeasureAgain);
    ASSERT_EQ(ft_protocol_step(st, zero), Decision::MeasureAgain);
    ASSERT_EQ(ft_protocol_step(st, a), Decision::MeasureAgain);
    ASSERT_EQ(ft_protocol_step(st, a), Decision::MeasureAgain);
    ASSERT_EQ(ft_protocol_step(st, a), Decision::DecodeNow);
}

TEST(decoders, protocol_round_bound) {
    std::mt19937_64 rng(7);
    for (size_t t : {1, 2}) {
        size_t most = 0;
        for (int trial = 0; trial < 100000; trial++) {
            ProtocolState st;
            st.t = t;
            size_t alphabet = 1 + rng() % 4;
            while (ft_protocol_step(st, Syndrome::from_u64(3, rng() % alphabet)) != Decision::DecodeNow) {
                ASSERT_LE(st.rounds, (t + 1) * (t + 1));
            }
            ASSERT_GE(st.rounds, t + 1);
            most = std::max(most, st.rounds);
        }
        ASSERT_EQ(most, t == 1 ? 3u : 6u);
    }
    // The longest stream for t = 2.
    ProtocolState st;
    st.t = 2;
    std::vector<uint64_t> stream{1, 1, 2, 3, 4, 5};
    for (size_t i = 0; i < stream.size(); i++) {
        Decision d = ft_protocol_step(st, Syndrome::from_u64(3, stream[i]));
        ASSERT_EQ(d, i + 1 == stream.size() ? Decision::DecodeNow : Decision::MeasureAgain) << i;
    }
}

TEST(decoders, pseudothreshold_fit) {
    std::vector<ThresholdPoint> quad, cubic;
    for (double p : {1e-4, 2e-4, 5e-4, 1e-3}) {
        quad.push_back({p, 4 * p * p, 0});
        cubic.push_back({p, 9 * p * p * p, 0.1 * 9 * p * p * p});
    }
    ThresholdFit f = fit_pseudothreshold(quad, 2);
    ASSERT_NEAR(f.a, 4, 1e-9);
    ASSERT_NEAR(f.p_th, 0.25, 1e-12);
    ThresholdFit g = fit_pseudothreshold(cubic, 3);
    ASSERT_NEAR(g.a, 9, 1e-9);
    ASSERT_NEAR(g.p_th, 1.0 / 3, 1e-12);
    std::vector<ThresholdPoint> zero{{1e-4, 0, 0}, {2e-4, 0, 0}, {3e-4, 0, 0}};
    ASSERT_THROW(fit_pseudothreshold(zero, 2), std::domain_error);
    ASSERT_THROW(fit_pseudothreshold({{1e-4, 1e-8, 0}}, 2), std::invalid_argument);
}

TEST(decoders, wilson_interval) {
    Interval i = wilson_interval(0, 100);
    ASSERT_NEAR(i.lo, 0, 1e-12);
    ASSERT_NEAR(i.hi, 0.0370, 5e-4);
    Interval j = wilson_interval(50, 100);
    ASSERT_NEAR(j.lo, 0.4038, 5e-4);
    ASSERT_NEAR(j.hi, 0.5962, 5e-4);
    Interval k = wilson_interval(3, 10);
    ASSERT_LT(k.lo, 0.3);
    ASSERT_GT(k.hi, 0.3);
}

TEST(decoders, surface49_hook_entries_follow_hook_class) {
    const auto &code = builtin_code("surface49");
    Circuit cycle = surface_cycle(code);
    LookupTable t = build_lookup(code, &cycle);
    CompiledCircuit cc(cycle);
    const Block &data = cycle.block("data");
    auto st = cc.zero_state();
    size_t heavy = 0;
    for_each_fault_set(cycle, 2, [&](const std::vector<FaultEvent> &f) {
        std::fill(st.begin(), st.end(), 0);
        cc.apply_faults(st, f);
        PauliOperator e = cc.block_frame(st, data);
        if (weight(e) <= code.t) {
            return;
        }
        heavy++;
        Syndrome s = syndrome(code, e);
        ASSERT_EQ(logical_class(code, multiply(e, t.decode(s))), LogicalClass{});
    });
    ASSERT_GT(heavy, 0u);
}
