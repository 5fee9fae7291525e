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

#include "ftdnd/dataset.h"

#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include "ftdnd/parallel.h"
#include "ftdnd/sweep.h"
#include "gtest/gtest.h"

using namespace ftdnd;

namespace {

const ProtocolRunner &steane() {
    static ProtocolRunner r(make_protocol("steane-d3"), Baseline::Lookup);
    return r;
}

GenerateOptions small(uint64_t target, uint64_t seed, size_t workers = 1) {
    GenerateOptions o;
    o.target = target;
    o.seed = seed;
    o.workers = workers;
    o.chunk = 1000;
    return o;
}

}  // namespace

TEST(dataset, refuses_zero_noise) {
    ASSERT_THROW(generate_dataset(steane(), 0.0, small(10, 1)), std::invalid_argument);
}

TEST(dataset, steane_exrec_geometry) {
    Dataset d = generate_dataset(steane(), 2e-3, small(200, 1));
    ASSERT_EQ(d.meta().x_bits, 12u);
    ASSERT_EQ(d.meta().z_bits, 12u);
    ASSERT_EQ(d.size(), 200u);
    ASSERT_EQ(d.meta().kept, 200u);
    ASSERT_EQ(d.row_bytes(), 4u);
    ASSERT_LE(d.meta().kept, d.meta().total_shots);
    for (size_t i = 0; i < d.size(); i++) {
        bool any = d.label(i) != 0;
        for (size_t j = 0; j < 12; j++) {
            any |= d.x(i, j) || d.z(i, j);
        }
        ASSERT_TRUE(any) << i;
    }
}

TEST(dataset, surface_geometry_is_padded) {
    ProtocolRunner r(make_protocol("surface-d5"), Baseline::Lookup);
    Dataset d = generate_dataset(r, 1e-3, small(100, 2));
    ASSERT_EQ(d.meta().x_bits, 6 * 12u);
    ASSERT_EQ(d.meta().z_bits, 6 * 12u);
}

TEST(dataset, independent_of_worker_count) {
    Dataset a = generate_dataset(steane(), 1e-3, small(3000, 5, 1));
    Dataset b = generate_dataset(steane(), 1e-3, small(3000, 5, 3));
    ASSERT_TRUE(a == b);
    std::ostringstream sa, sb;
    a.save(sa);
    b.save(sb);
    ASSERT_EQ(sa.str(), sb.str());
    Dataset c = generate_dataset(steane(), 1e-3, small(3000, 6, 1));
    ASSERT_FALSE(a == c);
}

TEST(dataset, target_stops_at_the_exact_shot) {
    Dataset big = generate_dataset(steane(), 1e-3, small(500, 9));
    Dataset part = generate_dataset(steane(), 1e-3, small(100, 9));
    ASSERT_EQ(part.size(), 100u);
    for (size_t i = 0; i < part.size(); i++) {
        ASSERT_TRUE(std::equal(part.row(i), part.row(i) + part.row_bytes(), big.row(i)));
    }
    // the 100th kept row is the last simulated shot
    auto noise = steane().noise(1e-3);
    ShotOutcome last = steane().sample(noise, 9, part.meta().total_shots - 1);
    ASSERT_TRUE(last.labels || last.x_bits.any() || last.z_bits.any());
}

TEST(dataset, save_load_and_csv) {
    Dataset d = generate_dataset(steane(), 2e-3, small(50, 3));
    std::stringstream buf;
    d.save(buf);
    Dataset e = Dataset::load(buf);
    ASSERT_TRUE(d == e);
    ASSERT_EQ(e.meta().p, 2e-3);
    std::ostringstream csv;
    d.write_csv(csv);
    std::string text = csv.str();
    ASSERT_EQ(std::count(text.begin(), text.end(), '\n'), 51);
    ASSERT_EQ(text.substr(0, 6), "x0,x1,");
    std::istringstream bad("FTDND-DATASET 9\n");
    ASSERT_THROW(Dataset::load(bad), FormatError);
    std::string cut = buf.str().substr(0, buf.str().size() - 3);
    std::istringstream trunc(cut);
    ASSERT_THROW(Dataset::load(trunc), FormatError);
}

TEST(dataset, label_soundness) {
    const auto &r = steane();
    PackedCode pc(r.code());
    const auto &ideal = r.ideal_table();
    auto noise = r.noise(3e-3);
    int flagged = 0;
    for (uint64_t s = 0; s < 20000; s++) {
        ShotOutcome o = r.sample(noise, 4, s);
        uint32_t ex = o.residual_x[0] ^ ((o.labels & 1) ? pc.logical_x : 0);
        uint32_t ez = o.residual_z[0] ^ ((o.labels & 2) ? pc.logical_z : 0);
        uint64_t syn = pc.syndrome(ex, ez);
        ASSERT_EQ(pc.logical_bits(ex ^ ideal.x_mask(syn), ez ^ ideal.z_mask(syn)), 0) << s;
        flagged += o.labels != 0;
    }
    ASSERT_GT(flagged, 0);
}

TEST(dataset, kept_fraction_matches_location_census) {
    const auto &r = steane();
    double p = 1e-4;
    // first order in p: sum over locations and payloads of rate * [that single fault leaves a nonzero sample]
    double expected = 0, any_fault = 0;
    auto census = [&](const Circuit &c, const std::function<Scenario(const FaultEvent &)> &place) {
        for (uint32_t st = 0; st < c.depth(); st++) {
            for (uint32_t i = 0; i < c.steps()[st].size(); i++) {
                Op op = c.steps()[st][i].op;
                double rate = op == Op::CNOT || op == Op::Idle ? p : 2 * p / 3;
                size_t alphabet = fault_alphabet_size(op);
                any_fault += rate;
                for (uint8_t f = 1; f <= alphabet; f++) {
                    ShotOutcome o = r.run(place({st, i, f}));
                    if (o.labels || o.x_bits.any() || o.z_bits.any()) {
                        expected += rate / (double)alphabet;
                    }
                }
            }
        }
    };
    census(r.circuit(), [](const FaultEvent &f) {
        Scenario sc;
        sc.circuit_faults = {{f}};
        return sc;
    });
    for (size_t slot = 0; slot < r.num_prep_slots(); slot++) {
        census(r.prep_circuit(slot), [&](const FaultEvent &f) {
            Scenario sc;
            sc.prep_faults.resize(slot + 1);
            sc.prep_faults[slot] = {f};
            return sc;
        });
    }
    ASSERT_LT(expected, any_fault);
    Dataset d = generate_dataset(r, p, small(10000, 8));
    double kept = (double)d.meta().kept / (double)d.meta().total_shots;
    double sigma = std::sqrt(kept / (double)d.meta().total_shots);
    ASSERT_NEAR(kept, expected, 5 * sigma + 0.05 * expected);
}

TEST(dataset, baseline_rate_matches_independent_run) {
    const auto &r = steane();
    Dataset d = generate_dataset(r, 2e-3, small(20000, 12));
    double rate = (double)d.meta().baseline_failures / (double)d.meta().total_shots;
    auto noise = r.noise(2e-3);
    uint64_t n = 100000;
    double other = (double)count_failures(r, noise, 99, 0, n) / (double)n;
    double sigma = std::sqrt(other * (1 - other) * (1.0 / n + 1.0 / (double)d.meta().total_shots));
    ASSERT_NEAR(rate, other, 5 * sigma);
}

TEST(dataset, split_cyclic_examples) {
    Split s = split_cyclic_at(10, 0.9, 8);
    ASSERT_EQ(s.train, (std::vector<uint32_t>{8, 9, 0, 1, 2, 3, 4, 5, 6}));
    ASSERT_EQ(s.test, (std::vector<uint32_t>{7}));
    for (size_t n : {1u, 7u, 30u, 1001u}) {
        Split r = split_cyclic(n, 0.9, 3);
        std::vector<int> seen(n, 0);
        for (auto i : r.train) {
            seen[i]++;
        }
        for (auto i : r.test) {
            seen[i]++;
        }
        ASSERT_EQ(std::count(seen.begin(), seen.end(), 1), (long)n);
        ASSERT_EQ(r.train.size(), (size_t)std::floor(0.9 * n + 1e-9));
    }
    ASSERT_EQ(split_cyclic(1000, 0.9, 5).start, split_cyclic(1000, 0.9, 5).start);
    std::set<size_t> starts;
    for (uint64_t seed = 0; seed < 20; seed++) {
        starts.insert(split_cyclic(1000, 0.9, seed).start);
    }
    ASSERT_GT(starts.size(), 10u);
    ASSERT_THROW(split_cyclic(0, 0.9, 1), std::invalid_argument);
}

TEST(sweep, worker_count_does_not_matter) {
    ProtocolRunner r(make_protocol("surface-d3"), Baseline::Lookup);
    SweepOptions o;
    o.shots = 50000;
    o.chunk = 4096;
    o.seed = 21;
    o.workers = 1;
    SweepResult a = run_sweep(r, {5e-4, 1e-3, 2e-3}, o);
    o.workers = 3;
    SweepResult b = run_sweep(r, {5e-4, 1e-3, 2e-3}, o);
    for (size_t i = 0; i < 3; i++) {
        ASSERT_EQ(a.points[i].failures, b.points[i].failures);
        ASSERT_GT(a.points[i].failures, 0u);
        ASSERT_LE(a.points[i].wilson.lo, a.points[i].p_l);
        ASSERT_GE(a.points[i].wilson.hi, a.points[i].p_l);
    }
    ASSERT_TRUE(a.fit.has_value());
    ASSERT_EQ(a.fit->p_th, b.fit->p_th);
}

TEST(sweep, one_point_has_no_fit) {
    ProtocolRunner r(make_protocol("surface-d3"), Baseline::Lookup);
    SweepOptions o;
    o.shots = 1000;
    SweepResult res = run_sweep(r, {1e-3}, o);
    ASSERT_EQ(res.points.size(), 1u);
    ASSERT_FALSE(res.fit.has_value());
    ASSERT_FALSE(res.warning.empty());
}

TEST(sweep, surface_d3_pseudothreshold_ballpark) {
    ProtocolRunner r(make_protocol("surface-d3"), Baseline::Lookup);
    SweepOptions o;
    o.shots = 200000;
    SweepResult res = run_sweep(r, {4e-4, 6e-4, 8e-4, 1e-3, 1.5e-3, 2e-3}, o);
    ASSERT_TRUE(res.fit.has_value());
    ASSERT_NEAR(res.fit->p_th, 2.57e-4, 0.5 * 2.57e-4);
}

TEST(parallel, derive_seed_spreads) {
    std::set<uint64_t> seen;
    for (uint64_t i = 0; i < 100; i++) {
        seen.insert(derive_seed(1, i));
        seen.insert(derive_seed(2, i));
    }
    ASSERT_EQ(seen.size(), 200u);
}

TEST(parallel, exceptions_propagate) {
    ASSERT_THROW(parallel_for(10, 3, [](size_t i) {
                     if (i == 7) {
                         throw std::runtime_error("x");
                     }
                 }),
                 std::runtime_error);
}
