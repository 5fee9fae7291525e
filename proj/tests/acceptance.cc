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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero when any criterion fails.

#include <CLI11.hpp>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "ftdnd/cli.h"
#include "ftdnd/parallel.h"
#include "ftdnd/perf_model.h"
#include "ftdnd/protocol.h"
#include "ftdnd/quantize.h"
#include "ftdnd/sweep.h"

using namespace ftdnd;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
    void fail(const std::string &why) {
        pass = false;
        if (!detail.empty()) {
            detail += "; ";
        }
        detail += why;
    }
    void note(const std::string &what) {
        if (!detail.empty()) {
            detail += "; ";
        }
        detail += what;
    }
};

std::string sci(double v, int digits = 3) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*e", digits - 1, v);
    return buf;
}

size_t g_workers = 1;
bool g_extended = false;

bool has_violation(const std::vector<Violation> &v, const std::string &kind, const std::string &who) {
    for (const auto &x : v) {
        if (x.kind == kind && (who.empty() || x.a == who || x.b == who)) {
            return true;
        }
    }
    return false;
}

Outcome code_library() {
    Outcome o;
    for (const auto &code : builtin_codes()) {
        auto v = validate(code);
        if (!v.empty()) {
            o.fail(code.name + ": " + v[0].message);
            continue;
        }
        StabilizerCode a = code;
        a.x_generators[0].x.set(a.x_generators[0].x.ones()[0], false);
        StabilizerCode b = code;
        b.logical_x = b.x_generators[0];
        StabilizerCode c = code;
        c.x_generators.pop_back();
        StabilizerCode d = code;
        d.pure_errors_z[0] *= d.pure_errors_z[1];
        if (!has_violation(validate(a), "generators_commute", "x_generators[1]")) {
            o.fail(code.name + ": shortened X generator not flagged");
        }
        if (!has_violation(validate(b), "logicals_anticommute", "logical_x")) {
            o.fail(code.name + ": stabilizer as logical X not flagged");
        }
        if (!has_violation(validate(c), "generator_count", "")) {
            o.fail(code.name + ": missing generator not flagged");
        }
        auto vd = validate(d);
        if (!has_violation(vd, "pure_error_pairing", "pure_errors_z[1]") ||
            !has_violation(vd, "pure_error_pairing", "x_generators[2]")) {
            o.fail(code.name + ": broken pure error not flagged");
        }
    }
    o.note(std::to_string(builtin_codes().size()) + " codes valid, 4 mutations each flagged");
    return o;
}

Outcome timing_table() {
    Outcome o;
    const std::vector<unsigned> adders{24, 26, 24, 26, 24, 27};
    const std::vector<std::string> lenient{"2.5", "2.3", "3.3", "3.1", "7.5", "13.3"};
    auto presets = timing_presets();
    if (presets.size() != 6) {
        o.fail("expected 6 presets");
        return o;
    }
    std::string got;
    for (size_t i = 0; i < 6; i++) {
        unsigned a = num_adders(presets[i].S, {1000, 1000});
        char buf[16];
        std::snprintf(buf, sizeof buf, "%.1f", adder_leniency(presets[i].depth, presets[i].S, {1000, 1000}));
        got += presets[i].protocol + "=" + std::to_string(a) + "/" + buf + "ns ";
        if (a != adders[i] || buf != lenient[i]) {
            o.fail(presets[i].protocol + " gives " + std::to_string(a) + " adders, " + buf + " ns");
        }
    }
    o.note(got);
    return o;
}

Outcome memory_figures() {
    Outcome o;
    const std::vector<std::pair<unsigned, std::string>> want{{24, "2.10 MB"}, {72, "590 EB"}, {144, "2.79e+24 EB"}};
    for (const auto &[bits, text] : want) {
        std::string got = format_bytes(inference_map_bytes(bits));
        o.note(std::to_string(bits) + " bits -> " + got);
        if (got != text) {
            o.fail("expected " + text);
        }
    }
    return o;
}

Outcome naive_soundness() {
    Outcome o;
    std::mt19937_64 rng(2024);
    for (const auto &code : builtin_codes()) {
        size_t m = code.num_checks();
        bool exhaustive = m <= 18;
        uint64_t cases = exhaustive ? uint64_t{1} << m : 1000000;
        std::atomic<uint64_t> bad{0};
        const size_t parts = 64;
        const uint64_t base = rng();
        parallel_for(parts, g_workers, [&](size_t part) {
            std::mt19937_64 local(derive_seed(base, part));
            uint64_t lo = cases * part / parts, hi = cases * (part + 1) / parts;
            uint64_t count = 0;
            for (uint64_t i = lo; i < hi; i++) {
                Syndrome s(m);
                if (exhaustive) {
                    s = Syndrome::from_u64(m, i);
                } else {
                    for (size_t j = 0; j < m; j++) {
                        s.set(j, local() & 1);
                    }
                }
                count += syndrome(code, naive_decode(code, s)) != s;
            }
            bad += count;
        });
        o.note(code.name + ": " + std::to_string(cases) + (exhaustive ? " (all)" : " (sampled)"));
        if (bad) {
            o.fail(code.name + ": " + std::to_string(bad.load()) + " syndromes not reproduced");
        }
    }
    return o;
}

Outcome fault_tolerance() {
    Outcome o;
    auto check = [&](const std::string &label, const FtReport &rep) {
        o.note(label + " " + std::to_string(rep.cases) + " cases, " + std::to_string(rep.condition1_violations) + "/" +
               std::to_string(rep.condition2_violations) + " violations");
        if (!rep.ok()) {
            o.fail(label + ": " + rep.first_violation);
        }
    };
    check("surface-d3", check_fault_tolerance(ProtocolRunner(make_protocol("surface-d3"), Baseline::Lookup)));
    check("steane-d3 EC", check_fault_tolerance(ProtocolRunner::ec_unit(make_protocol("steane-d3"), Baseline::Lookup)));
    check("knill-d3 EC", check_fault_tolerance(ProtocolRunner::ec_unit(make_protocol("knill-d3"), Baseline::Lookup)));
    check("surface-d5 sampled",
          check_fault_tolerance(ProtocolRunner(make_protocol("surface-d5"), Baseline::Lookup), 100000, 11));
    return o;
}

Outcome round_bounds() {
    Outcome o;
    std::mt19937_64 rng(77);
    for (size_t t : {1, 2}) {
        size_t lo = t + 1, hi = (t * t + 3 * t + 2) / 2, most = 0, least = SIZE_MAX;
        for (int trial = 0; trial < 100000; trial++) {
            ProtocolState st;
            st.t = t;
            size_t alphabet = 1 + rng() % 4;
            while (ft_protocol_step(st, Syndrome::from_u64(4, rng() % alphabet)) != Decision::DecodeNow) {
                if (st.rounds > hi) {
                    break;
                }
            }
            most = std::max(most, st.rounds);
            least = std::min(least, st.rounds);
        }
        o.note("t=" + std::to_string(t) + " rounds " + std::to_string(least) + ".." + std::to_string(most));
        if (least < lo || most > hi) {
            o.fail("t=" + std::to_string(t) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        }
    }
    ProtocolState st;
    st.t = 2;
    size_t steps = 0;
    for (uint64_t s : {1, 1, 2, 3, 4, 5}) {
        steps++;
        if (ft_protocol_step(st, Syndrome::from_u64(4, s)) == Decision::DecodeNow) {
            break;
        }
    }
    o.note("stream 1,1,2,3,4,5 takes " + std::to_string(steps) + " rounds");
    if (steps != 6 || st.rounds != 6) {
        o.fail("constructed t=2 stream did not reach 6 rounds");
    }
    return o;
}

Outcome pseudo_thresholds() {
    Outcome o;
    struct Row {
        const char *id;
        double ref;
        double lo, hi;  // accepted ratio band
        std::vector<double> grid;
        uint64_t shots;
    };
    std::vector<double> d3{1e-4, 2e-4, 4e-4, 6e-4, 8e-4, 1e-3};
    std::vector<Row> rows{{"surface-d3", 2.57e-4, 0.7, 1.3, d3, 1000000},
                          {"steane-d3", 2.10e-4, 0.5, 2.0, d3, 1000000},
                          {"knill-d3", 1.76e-4, 0.5, 2.0, d3, 1000000}};
    if (g_extended) {
        rows.push_back({"surface-d5", 5.82e-4, 0.5, 2.0, {2e-4, 3e-4, 4e-4, 6e-4, 8e-4, 1e-3}, 1000000});
        rows.push_back({"steane-d5", 1.43e-3, 0.5, 2.0, {5e-4, 7.5e-4, 1e-3, 1.5e-3, 2e-3, 3e-3}, 1000000});
        rows.push_back({"knill-d5", 1.34e-3, 0.5, 2.0, {5e-4, 7.5e-4, 1e-3, 1.5e-3, 2e-3, 3e-3}, 1000000});
    }
    for (const auto &r : rows) {
        ProtocolRunner runner(make_protocol(r.id), Baseline::Lookup);
        SweepOptions opt;
        opt.shots = r.shots;
        opt.seed = 2;
        opt.workers = g_workers;
        SweepResult res = run_sweep(runner, r.grid, opt);
        if (!res.fit) {
            o.fail(std::string(r.id) + ": no fit (" + res.warning + ")");
            continue;
        }
        double ratio = res.fit->p_th / r.ref;
        o.note(std::string(r.id) + " " + sci(res.fit->p_th) + " (ref " + sci(r.ref) + ")");
        if (ratio < r.lo || ratio > r.hi) {
            o.fail(std::string(r.id) + " ratio " + sci(ratio, 2));
        }
    }
    return o;
}

// Smallest |pre-activation| of any hidden unit over the batch.
double min_hidden_margin(const FeedforwardNet &net, const Batch &b) {
    double m = INFINITY;
    for (int h = 0; h < 2; h++) {
        Matrix a = b.in[h];
        const Head &head = net.heads[h];
        for (size_t l = 0; l + 1 < head.w.size(); l++) {
            Matrix z = head.w[l] * a;
            z.colwise() += head.b[l];
            m = std::min(m, z.cwiseAbs().minCoeff());
            a = z.cwiseMax(0.0);
        }
    }
    return m;
}

Outcome gradients() {
    Outcome o;
    std::mt19937_64 rng(8);
    double worst = 0;
    size_t redrawn = 0;
    for (int trial = 0; trial < 100; trial++) {
        NetShape shape{3 + rng() % 10, 3 + rng() % 10, {}, trial % 3 == 0};
        shape.hidden.push_back(4 + rng() % 12);
        if (trial % 2) {
            shape.hidden.push_back(3 + rng() % 6);
        }
        FeedforwardNet net;
        Batch b;
        for (uint64_t attempt = 0;; attempt++) {
            net = FeedforwardNet::init(shape, 0.5, rng());
            for (auto &h : net.heads) {
                for (auto &bias : h.b) {
                    for (Eigen::Index i = 0; i < bias.size(); i++) {
                        bias[i] = std::normal_distribution<double>(0, 0.3)(rng);
                    }
                }
            }
            b = Batch{};
            for (int h = 0; h < 2; h++) {
                b.in[h] = Matrix((Eigen::Index)shape.head_inputs(h), 8);
                for (Eigen::Index i = 0; i < b.in[h].size(); i++) {
                    b.in[h].data()[i] = (double)(rng() & 1);
                }
                for (int j = 0; j < 8; j++) {
                    b.label[h].push_back(rng() & 1);
                }
            }
            if (min_hidden_margin(net, b) > 1e-2) {
                break;
            }
            redrawn++;
        }
        FeedforwardNet grads;
        backprop(net, b, grads);
        auto p = net.params();
        auto g = grads.params();
        const double h = 1e-4;
        for (size_t i = 0; i < p.size(); i++) {
            double keep = *p[i];
            *p[i] = keep + h;
            double up = loss(net, b);
            *p[i] = keep - h;
            double down = loss(net, b);
            *p[i] = keep;
            double fd = (up - down) / (2 * h);
            double rel = std::abs(fd - *g[i]) / std::max(1.0, std::abs(fd) + std::abs(*g[i]));
            worst = std::max(worst, rel);
        }
    }
    o.note("100 nets, worst relative error " + sci(worst, 2) + ", " + std::to_string(redrawn) +
           " draws replaced for sitting on a ReLU kink");
    if (!(worst < 1e-4)) {
        o.fail("gradient mismatch");
    }
    return o;
}

struct DndRun {
    Dataset data;
    FeedforwardNet net;
    Split split;
    EvalResult eval;
    bool ready = false;
};

DndRun g_dnd;

Outcome dnd_improvement() {
    Outcome o;
    ProtocolRunner runner(make_protocol("steane-d3"), Baseline::Lookup);
    GenerateOptions go;
    go.target = 200000;
    go.seed = 1;
    go.workers = g_workers;
    g_dnd.data = generate_dataset(runner, 2e-3, go);
    const Dataset &d = g_dnd.data;
    o.note(std::to_string(d.size()) + " samples from " + std::to_string(d.meta().total_shots) + " shots");

    SearchSpace space;
    space.hidden_lo = 50;
    space.hidden_hi = 200;
    space.lr_lo = 1e-4;
    space.lr_hi = 1e-2;
    Hyperparams base;
    base.batch_size = 256;
    base.max_epochs = 6;
    base.patience = 2;
    Split tune_split = split_cyclic(d.size(), 0.9, 1);
    HypertuneResult tuned = hypertune(d, tune_split, space, base, 6, 4, 7, g_workers);
    Hyperparams hp = tuned.best;
    hp.max_epochs = 30;
    hp.patience = 4;
    char desc[160];
    std::snprintf(desc, sizeof desc, "tuned lr %.2e hidden %zu std %.1e", hp.opt.learning_rate, hp.hidden[0],
                  hp.initial_std);
    o.note(desc);

    int separated = 0;
    std::vector<double> rates;
    for (uint64_t seed = 0; seed < 10; seed++) {
        Split split = split_cyclic(d.size(), 0.9, 100 + seed);
        TrainResult r = train(d, split, hp, 1000 + seed);
        uint64_t shots = (uint64_t)std::llround(r.test.shots);
        Interval w = wilson_interval(r.test.mispredicted, shots);
        Interval wb = wilson_interval(r.test.baseline_failures, shots);
        separated += w.hi < wb.lo;
        rates.push_back(r.test.rate / r.test.baseline_rate);
        if (seed == 0) {
            g_dnd.net = r.net;
            g_dnd.split = split;
            g_dnd.eval = r.test;
            g_dnd.ready = true;
            o.note("seed 0: " + sci(r.test.rate) + " vs lookup " + sci(r.test.baseline_rate));
        }
    }
    std::sort(rates.begin(), rates.end());
    o.note(std::to_string(separated) + "/10 seeds separated, rate ratio " + sci(rates.front(), 2) + ".." +
           sci(rates.back(), 2));
    if (separated != 10) {
        o.fail("Wilson intervals overlap for " + std::to_string(10 - separated) + " seeds");
    }
    return o;
}

Outcome quantization() {
    Outcome o;
    if (!g_dnd.ready) {
        dnd_improvement();
    }
    const Dataset &d = g_dnd.data;
    const auto &split = g_dnd.split;
    Batch cal = make_batch(d, g_dnd.net.shape, split.train.data(), std::min<size_t>(1000, split.train.size()));
    double f = g_dnd.eval.rate, base = g_dnd.eval.baseline_rate;
    std::map<int, EvalResult> q;
    for (int k : {2, 3, 4, 7, 8}) {
        q[k] = quantized_eval(quantize(g_dnd.net, k, &cal), d, split.test);
    }
    o.note("float " + sci(f) + ", lookup " + sci(base));
    o.note("k=8 " + sci(q[8].rate) + ", k=7 " + sci(q[7].rate) + ", k=4 " + sci(q[4].rate) + ", k=3 " +
           sci(q[3].rate) + ", k=2 " + sci(q[2].rate));
    if (std::abs(q[8].rate - f) > 0.2 * f) {
        o.fail("k=8 off by more than 20%");
    }
    uint64_t shots = (uint64_t)std::llround(q[7].shots);
    if (!(wilson_interval(q[7].mispredicted, shots).hi < wilson_interval(q[7].baseline_failures, shots).lo)) {
        o.fail("k=7 no longer beats the lookup baseline");
    }
    for (int k : {2, 3, 4}) {
        if (!(q[k].rate > 0.5 * (f + base))) {
            o.fail("k=" + std::to_string(k) + " did not degrade toward the baseline");
        }
    }
    return o;
}

struct CliRun {
    int code;
    std::string out;
};

CliRun cli(std::vector<std::string> args) {
    args.insert(args.begin(), "ftdnd");
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str() + err.str()};
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

Outcome determinism() {
    Outcome o;
    fs::path dir = fs::temp_directory_path() / ("ftdnd_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    auto path = [&](const std::string &n) {
        return (dir / n).string();
    };
    // run tag: (workers, repetition)
    const std::vector<std::pair<std::string, std::string>> runs{{"1", "a"}, {"1", "b"}, {"4", "a"}};
    for (const auto &[w, rep] : runs) {
        std::string tag = w + rep;
        CliRun s = cli({"sweep", "--protocol", "knill-d3", "--p", "5e-4,1e-3,2e-3", "--shots", "200000", "--seed", "9",
                        "--workers", w, "--out", path("sweep" + tag + ".csv")});
        CliRun g = cli({"dataset", "gen", "--protocol", "steane-d3", "--p", "2e-3", "--target", "20000", "--seed", "9",
                        "--workers", w, "--out", path("data" + tag + ".bin")});
        std::ofstream(path("gen" + tag + ".json")) << g.out;
        CliRun t = cli({"train", "--data", path("data1a.bin"), "--hidden", "32,32", "--epochs", "3", "--batch", "128",
                        "--seed", "9", "--workers", w, "--model-out", path("net" + tag + ".bin"), "--history",
                        path("hist" + tag + ".csv"), "--out", path("train" + tag + ".json")});
        for (const auto &r : {s, g, t}) {
            if (r.code != kExitOk) {
                o.fail("command failed: " + r.out);
            }
        }
    }
    size_t compared = 0;
    for (const char *stem : {"sweep%.csv", "data%.bin", "gen%.json", "net%.bin", "hist%.csv", "train%.json"}) {
        std::vector<std::string> bodies;
        for (const auto &[w, rep] : runs) {
            std::string name = stem;
            name.replace(name.find('%'), 1, w + rep);
            bodies.push_back(slurp(dir / name));
        }
        compared++;
        if (bodies[0].empty() || bodies[0] != bodies[1] || bodies[0] != bodies[2]) {
            o.fail(std::string(stem) + " differs between runs");
        }
    }
    o.note(std::to_string(compared) + " artifacts byte-identical over repeats and 1 vs 4 workers");
    fs::remove_all(dir);
    return o;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"acceptance criteria"};
    std::vector<int> only;
    app.add_option("--only", only, "run just these criteria")->delimiter(',');
    app.add_option("--workers", g_workers, "worker threads, 0 = all cores");
    app.add_flag("--extended", g_extended, "also check the distance-5 pseudo-thresholds (hours)");
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"code library validation", code_library},
        {"critical-path timing table", timing_table},
        {"inference map memory", memory_figures},
        {"naive decoder soundness", naive_soundness},
        {"fault tolerance", fault_tolerance},
        {"protocol round bounds", round_bounds},
        {"pseudo-thresholds", pseudo_thresholds},
        {"gradient correctness", gradients},
        {"neural decoder improvement", dnd_improvement},
        {"quantization preservation", quantization},
        {"determinism", determinism},
    };
    bool all = true;
    for (size_t i = 0; i < criteria.size(); i++) {
        int id = (int)i + 1;
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) {
            continue;
        }
        auto t0 = std::chrono::steady_clock::now();
        Outcome r;
        try {
            r = criteria[i].second();
        } catch (const std::exception &e) {
            r.fail(std::string("exception: ") + e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s %2d %s (%.1fs): %s\n", r.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(), secs,
                    r.detail.c_str());
        std::fflush(stdout);
        all &= r.pass;
    }
    return all ? 0 : 1;
}
