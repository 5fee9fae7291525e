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

#include <algorithm>
#include <random>

#include "gtest/gtest.h"

using namespace ftdnd;

namespace {

const StabilizerCode &steane() {
    return builtin_code("steane");
}

PauliOperator P(const char *text, size_t n) {
    return PauliOperator::parse(text, n);
}

bool has_violation(const std::vector<Violation> &v, const std::string &kind, const std::string &a,
                   const std::string &b) {
    return std::any_of(v.begin(), v.end(), [&](const Violation &x) {
        return x.kind == kind && x.a == a && x.b == b;
    });
}

// Brute-force oracle: minimum weight over every Pauli (4^n candidates) with the requested syndrome.
size_t brute_min_weight(const StabilizerCode &code, const Syndrome &s) {
    size_t best = code.n + 1;
    size_t total = size_t{1} << (2 * code.n);
    for (size_t m = 0; m < total; m++) {
        PauliOperator p(code.n);
        for (size_t q = 0; q < code.n; q++) {
            p.x.set(q, (m >> q) & 1);
            p.z.set(q, (m >> (code.n + q)) & 1);
        }
        if (syndrome(code, p) == s) {
            best = std::min(best, weight(p));
        }
    }
    return best;
}

}  // namespace

TEST(code_library, builtins_valid) {
    const auto &codes = builtin_codes();
    ASSERT_EQ(codes.size(), 4u);
    for (const auto &c : codes) {
        ASSERT_TRUE(validate(c).empty()) << c.name;
        ASSERT_TRUE(c.is_css());
        ASSERT_EQ(c.num_checks(), c.n - c.k);
    }
    ASSERT_EQ(codes[0].name, "steane");
    ASSERT_EQ(codes[1].n, 9u);
    ASSERT_EQ(codes[2].n, 19u);
    ASSERT_EQ(codes[3].n, 25u);
    ASSERT_EQ(codes[3].t, 2u);
}

TEST(code_library, transcription_examples) {
    ASSERT_EQ(steane().x_generators[0].str(), "X4X5X6X7");
    ASSERT_EQ(steane().pure_errors_z[0].str(), "Z3Z7");
    ASSERT_EQ(steane().logical_x.dense_str(), "XXXXXXX");
    const auto &s17 = builtin_code("surface17");
    ASSERT_EQ(s17.logical_x.str(), "X3X5X7");
    ASSERT_EQ(s17.logical_z.str(), "Z1Z5Z9");
    // Fixing the superscript of the last Z-type pure error of the color code keeps the relations intact.
    ASSERT_EQ(builtin_code("color19").pure_errors_z[8].str(), "Z6Z9Z11Z12");
}

TEST(code_library, data_files_match_embedded) {
    for (const char *name : {"steane", "surface17", "color19", "surface49"}) {
        auto c = load_code_file(std::string(FTDND_DATA_DIR) + "/codes/" + name + ".code");
        ASSERT_EQ(render_code(c), render_code(builtin_code(name)));
    }
}

TEST(code_library, render_parse_round_trip) {
    for (const auto &c : builtin_codes()) {
        ASSERT_EQ(render_code(parse_code(render_code(c))), render_code(c));
    }
}

TEST(code_library, validate_mutations) {
    StabilizerCode bad = steane();
    bad.pure_errors_z[0] = P("Z7", 7);
    auto v = validate(bad);
    ASSERT_FALSE(v.empty());
    // Z7 hits all three X generators; only the pairing with g1 is allowed.
    ASSERT_TRUE(has_violation(v, "pure_error_pairing", "pure_errors_z[1]", "x_generators[2]"));
    ASSERT_TRUE(has_violation(v, "pure_error_pairing", "pure_errors_z[1]", "x_generators[3]"));
    ASSERT_FALSE(has_violation(v, "pure_error_pairing", "pure_errors_z[1]", "x_generators[1]"));

    StabilizerCode bad2 = steane();
    bad2.logical_x = bad2.x_generators[0];
    ASSERT_TRUE(has_violation(validate(bad2), "logicals_anticommute", "logical_x", "logical_z"));

    StabilizerCode bad3 = steane();
    bad3.z_generators[0] = P("Z4", 7);
    auto v3 = validate(bad3);
    ASSERT_TRUE(has_violation(v3, "generators_commute", "z_generators[1]", "x_generators[1]"));

    StabilizerCode bad4 = steane();
    bad4.x_generators.pop_back();
    ASSERT_TRUE(has_violation(validate(bad4), "generator_count", "generators", ""));

    StabilizerCode bad5 = steane();
    bad5.logical_z = P("Z1Z2Z3Z4Z5Z6Z7", 7);
    bad5.logical_z *= bad5.z_generators[0];
    bad5.logical_z *= bad5.z_generators[1];
    ASSERT_EQ(weight(bad5.logical_z), 3u);
    ASSERT_TRUE(validate(bad5).empty());
    bad5.d = 5;
    bad5.t = 2;
    ASSERT_TRUE(has_violation(validate(bad5), "logical_weight", "logical_z", ""));
}

TEST(code_library, syndrome_examples) {
    auto s = syndrome(steane(), P("X4", 7));
    ASSERT_EQ(syndrome_z_block(steane(), s).str(), "100");
    ASSERT_EQ(syndrome_x_block(steane(), s).str(), "000");
    auto y = syndrome(steane(), P("Y7", 7));
    ASSERT_EQ(y.str(), "111111");
    for (const auto &c : builtin_codes()) {
        for (const auto &g : c.generators()) {
            ASSERT_TRUE(syndrome(c, g).none());
        }
    }
    ASSERT_THROW(syndrome(steane(), PauliOperator(6)), DimensionError);
}

TEST(code_library, pure_error_syndromes) {
    for (const auto &c : builtin_codes()) {
        auto t = c.pure_errors();
        for (size_t j = 0; j < t.size(); j++) {
            auto s = syndrome(c, t[j]);
            ASSERT_EQ(s.popcount(), 1u);
            ASSERT_TRUE(s.get(j));
        }
    }
}

TEST(code_library, syndrome_homomorphism_and_class_invariance) {
    std::mt19937_64 rng(7);
    for (const auto &c : builtin_codes()) {
        auto gens = c.generators();
        for (int k = 0; k < 200; k++) {
            PauliOperator a(c.n), b(c.n);
            for (size_t q = 0; q < c.n; q++) {
                a.set(q, "IXYZ"[rng() & 3]);
                b.set(q, "IXYZ"[rng() & 3]);
            }
            ASSERT_EQ(syndrome(c, multiply(a, b)), syndrome(c, a) ^ syndrome(c, b));
            // Push a into N(S) by cancelling its syndrome with pure errors.
            auto t = c.pure_errors();
            auto s = syndrome(c, a);
            for (size_t j : s.ones()) {
                a *= t[j];
            }
            ASSERT_TRUE(syndrome(c, a).none());
            auto cls = logical_class(c, a);
            auto g = gens[rng() % gens.size()];
            ASSERT_EQ(logical_class(c, multiply(a, g)), cls);
        }
    }
}

TEST(code_library, logical_class_examples) {
    ASSERT_EQ(logical_class(steane(), PauliOperator(7)), (LogicalClass{false, false}));
    ASSERT_EQ(logical_class(steane(), steane().logical_x), (LogicalClass{true, false}));
    ASSERT_EQ(logical_class(steane(), multiply(steane().x_generators[0], steane().logical_x)), (LogicalClass{true, false}));
    ASSERT_EQ(logical_class(steane(), multiply(steane().logical_z, steane().logical_x)), (LogicalClass{true, true}));
    ASSERT_THROW(logical_class(steane(), P("X1", 7)), std::invalid_argument);
}

TEST(code_library, min_weight_examples) {
    Syndrome zero(6);
    ASSERT_TRUE(min_weight_representative(steane(), zero).is_identity());
    ASSERT_EQ(min_weight_representative(steane(), BitVector::from_string("100000")).str(), "X4");
    const auto &color = builtin_code("color19");
    auto s = syndrome(color, P("X3X4", 19));
    auto r = min_weight_representative(color, s);
    ASSERT_EQ(weight(r), 2u);
    ASSERT_TRUE(r.z.none());
    ASSERT_EQ(syndrome(color, r), s);
}

TEST(code_library, min_weight_matches_brute_force) {
    // Exhaustive over all 4^7 Paulis; the CSS-split representative is minimum for the Steane code.
    const auto &c = steane();
    for (uint64_t m = 0; m < 64; m++) {
        auto s = BitVector::from_u64(6, m);
        auto r = min_weight_representative(c, s);
        ASSERT_EQ(syndrome(c, r), s);
        ASSERT_EQ(weight(r), brute_min_weight(c, s)) << m;
    }
}

TEST(code_library, min_weight_single_type_is_minimal) {
    // For every code, each half-representative has minimum X-only (resp. Z-only) weight: checked against an
    // independent breadth-first search over single-type errors.
    for (const auto &c : builtin_codes()) {
        size_t mz = c.z_generators.size();
        std::vector<int> dist(size_t{1} << mz, -1);
        std::vector<uint64_t> frontier{0};
        dist[0] = 0;
        auto hz = c.hz();
        for (int w = 0; !frontier.empty(); w++) {
            std::vector<uint64_t> next;
            for (uint64_t s : frontier) {
                for (size_t q = 0; q < c.n; q++) {
                    uint64_t t = s;
                    for (size_t j = 0; j < mz; j++) {
                        if (hz[j].get(q)) {
                            t ^= uint64_t{1} << j;
                        }
                    }
                    if (dist[t] < 0) {
                        dist[t] = w + 1;
                        next.push_back(t);
                    }
                }
            }
            frontier = next;
        }
        const auto &tables = min_weight_tables(c);
        for (uint64_t s = 0; s < dist.size(); s++) {
            ASSERT_EQ((int)tables.x_rep(s).popcount(), dist[s]);
        }
    }
}

TEST(code_library, min_weight_composes_to_trivial_syndrome) {
    std::mt19937_64 rng(9);
    for (const auto &c : builtin_codes()) {
        for (int k = 0; k < 100; k++) {
            PauliOperator e(c.n);
            for (size_t q = 0; q < c.n; q++) {
                e.set(q, "IXYZ"[rng() & 3]);
            }
            auto r = min_weight_representative(c, syndrome(c, e));
            ASSERT_TRUE(syndrome(c, multiply(r, e)).none());
        }
    }
}
