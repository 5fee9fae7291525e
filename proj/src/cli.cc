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

#include "ftdnd/cli.h"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <map>
#include <optional>
#include <sstream>

#include "ftdnd/perf_model.h"
#include "ftdnd/protocol.h"
#include "ftdnd/quantize.h"
#include "ftdnd/sweep.h"

namespace ftdnd {

namespace {

using json = nlohmann::ordered_json;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Values come from the flag when it was given, else from the --config document, else the flag's default.
// Every value read is recorded so outputs can embed the resolved configuration.
class Settings {
   public:
    void load(const std::string &path) {
        if (path.empty()) {
            return;
        }
        std::ifstream in(path);
        if (!in) {
            throw ConfigError("cannot open config " + path);
        }
        try {
            doc_ = json::parse(in);
        } catch (const json::exception &e) {
            throw ConfigError(path + ": " + e.what());
        }
        if (!doc_.is_object()) {
            throw ConfigError(path + ": config must be a JSON object");
        }
        if (doc_.contains("schema_version") && doc_["schema_version"] != kSchemaVersion) {
            throw ConfigError(path + ": unsupported schema_version " + doc_["schema_version"].dump());
        }
        // hypertune output: its best point fills in training keys
        if (doc_.contains("best") && doc_["best"].is_object()) {
            json best = doc_["best"];
            for (auto &[k, v] : best.items()) {
                if (!doc_.contains(k)) {
                    doc_[k] = v;
                }
            }
        }
    }

    template <class T>
    T get(const char *key, const CLI::Option *opt, const T &flag) {
        T v = flag;
        if (opt->count() == 0 && doc_.contains(key)) {
            try {
                v = doc_[key].get<T>();
            } catch (const json::exception &e) {
                throw ConfigError(std::string("config key '") + key + "': " + e.what());
            }
        }
        resolved_[key] = v;
        return v;
    }

    // Recorded but not part of the result (e.g. output paths, worker count).
    template <class T>
    T get_untracked(const char *key, const CLI::Option *opt, const T &flag) {
        if (opt->count() == 0 && doc_.contains(key)) {
            try {
                return doc_[key].get<T>();
            } catch (const json::exception &e) {
                throw ConfigError(std::string("config key '") + key + "': " + e.what());
            }
        }
        return flag;
    }

    const json &resolved() const {
        return resolved_;
    }

   private:
    json doc_ = json::object();
    json resolved_ = json::object();
};

struct Common {
    std::string config;
    uint64_t seed = 1;
    size_t workers = 1;
    std::string out;
    CLI::Option *seed_opt = nullptr;
    CLI::Option *workers_opt = nullptr;
    CLI::Option *out_opt = nullptr;
};

void add_common(CLI::App *sc, Common &c) {
    sc->add_option("--config", c.config, "JSON config; flags given on the command line win");
    c.seed_opt = sc->add_option("--seed", c.seed, "base seed")->capture_default_str();
    c.workers_opt = sc->add_option("--workers", c.workers, "worker threads, 0 = all cores")->capture_default_str();
    c.out_opt = sc->add_option("--out", c.out, "primary output file (default stdout)");
}

class Output {
   public:
    Output(const std::string &path, std::ostream &fallback) : os_(&fallback) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) {
                throw std::runtime_error("cannot write " + path);
            }
            os_ = &file_;
        }
    }
    std::ostream &operator*() {
        return *os_;
    }

   private:
    std::ofstream file_;
    std::ostream *os_;
};

json envelope(const char *command, const Settings &s) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = command;
    j["config"] = s.resolved();
    return j;
}

void emit_json(const std::string &path, std::ostream &fallback, const json &j) {
    Output o(path, fallback);
    *o << j.dump(2) << "\n";
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void check_p(double p) {
    if (!(p > 0 && p < 0.25)) {
        throw ConfigError("p = " + fmt(p) + " outside (0, 0.25)");
    }
}

json eval_json(const EvalResult &r) {
    json j;
    j["samples"] = r.samples;
    j["mispredicted"] = r.mispredicted;
    j["baseline_failures"] = r.baseline_failures;
    j["shots"] = r.shots;
    j["rate"] = r.rate;
    j["baseline_rate"] = r.baseline_rate;
    j["cross_entropy"] = r.cross_entropy;
    Interval w = wilson_interval(r.mispredicted, (uint64_t)std::llround(r.shots));
    Interval wb = wilson_interval(r.baseline_failures, (uint64_t)std::llround(r.shots));
    j["wilson"] = {w.lo, w.hi};
    j["baseline_wilson"] = {wb.lo, wb.hi};
    return j;
}

json meta_json(const DatasetMeta &m) {
    return json{{"protocol", m.protocol},       {"code", m.code},         {"p", m.p},
                {"baseline", m.baseline},       {"seed", m.seed},         {"total_shots", m.total_shots},
                {"kept", m.kept},               {"baseline_failures", m.baseline_failures},
                {"x_bits", m.x_bits},           {"z_bits", m.z_bits}};
}

json hp_json(const Hyperparams &hp) {
    return json{{"optimizer", optimizer_name(hp.opt.kind)},
                {"lr", hp.opt.learning_rate},
                {"momentum", hp.opt.momentum},
                {"decay", hp.opt.decay},
                {"std", hp.initial_std},
                {"hidden", hp.hidden},
                {"batch", hp.batch_size},
                {"epochs", hp.max_epochs},
                {"patience", hp.patience},
                {"feed_both", hp.feed_both}};
}

// Training flags shared by train and hypertune.
struct TrainFlags {
    std::string optimizer = "rmsprop";
    double lr = 1e-3, momentum = 0, decay = 0.9, std = 0.01;
    std::vector<size_t> hidden{100, 100};
    size_t batch = 1024, epochs = 50, patience = 5;
    bool feed_both = false;
    double train_fraction = 0.9;
    uint64_t split_seed = 1;
    std::map<std::string, CLI::Option *> opts;

    void add(CLI::App *sc, bool search_only = false) {
        opts["optimizer"] = sc->add_option("--optimizer", optimizer, "sgd, momentum, adagrad or rmsprop");
        if (!search_only) {
            opts["lr"] = sc->add_option("--lr", lr, "learning rate");
            opts["momentum"] = sc->add_option("--momentum", momentum);
            opts["decay"] = sc->add_option("--decay", decay, "RMSProp decay");
            opts["std"] = sc->add_option("--std", std, "initial weight std");
            opts["hidden"] = sc->add_option("--hidden", hidden, "hidden widths, e.g. 100,100")->delimiter(',');
        }
        opts["batch"] = sc->add_option("--batch", batch, "mini-batch size");
        opts["epochs"] = sc->add_option("--epochs", epochs, "maximum epochs");
        opts["patience"] = sc->add_option("--patience", patience, "early-stopping patience in epochs");
        opts["feed_both"] = sc->add_flag("--feed-both", feed_both, "both heads read all syndrome bits");
        opts["train_fraction"] = sc->add_option("--train-fraction", train_fraction);
        opts["split_seed"] = sc->add_option("--split-seed", split_seed, "seed of the cyclic split");
    }

    Hyperparams resolve(Settings &s, bool search_only = false) {
        Hyperparams hp;
        hp.opt.kind = parse_optimizer(s.get("optimizer", opts["optimizer"], optimizer));
        if (!search_only) {
            hp.opt.learning_rate = s.get("lr", opts["lr"], lr);
            hp.opt.momentum = s.get("momentum", opts["momentum"], momentum);
            hp.opt.decay = s.get("decay", opts["decay"], decay);
            hp.initial_std = s.get("std", opts["std"], std);
            hp.hidden = s.get("hidden", opts["hidden"], hidden);
        }
        hp.batch_size = s.get("batch", opts["batch"], batch);
        hp.max_epochs = s.get("epochs", opts["epochs"], epochs);
        hp.patience = s.get("patience", opts["patience"], patience);
        hp.feed_both = s.get("feed_both", opts["feed_both"], feed_both);
        train_fraction = s.get("train_fraction", opts["train_fraction"], train_fraction);
        split_seed = s.get("split_seed", opts["split_seed"], split_seed);
        if (!(train_fraction > 0 && train_fraction < 1)) {
            throw ConfigError("train fraction must lie in (0, 1)");
        }
        if (hp.batch_size == 0 || hp.max_epochs == 0) {
            throw ConfigError("batch size and epoch count must be positive");
        }
        return hp;
    }
};

std::vector<std::string> split_list(const std::string &s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

int cmd_codes(Common &c, const std::string &name, CLI::Option *name_opt, const std::string &file, bool render,
              std::ostream &out) {
    Settings s;
    s.load(c.config);
    std::string which = s.get("code", name_opt, name);
    std::vector<StabilizerCode> codes;
    if (!file.empty()) {
        std::ifstream in(file);
        if (!in) {
            throw ConfigError("cannot open code file " + file);
        }
        std::stringstream text;
        text << in.rdbuf();
        codes.push_back(parse_code(text.str()));
    } else if (!which.empty()) {
        codes.push_back(builtin_code(which));
    } else {
        codes = builtin_codes();
    }
    if (render) {
        Output o(s.get_untracked("out", c.out_opt, c.out), out);
        for (const auto &code : codes) {
            *o << render_code(code);
        }
        return kExitOk;
    }
    json j = envelope("codes", s);
    bool all_valid = true;
    for (const auto &code : codes) {
        auto v = validate(code);
        json vj = json::array();
        for (const auto &x : v) {
            vj.push_back({{"kind", x.kind}, {"a", x.a}, {"b", x.b}, {"message", x.message}});
        }
        all_valid &= v.empty();
        j["codes"].push_back({{"name", code.name},
                              {"n", code.n},
                              {"k", code.k},
                              {"d", code.d},
                              {"checks", code.num_checks()},
                              {"valid", v.empty()},
                              {"violations", vj}});
    }
    emit_json(s.get_untracked("out", c.out_opt, c.out), out, j);
    return all_valid ? kExitOk : kExitValidation;
}

struct SimFlags {
    std::string protocol = "surface-d3", baseline = "lookup";
    std::vector<double> p{1e-3};
    uint64_t shots = 100000;
    int order = 0;
    size_t trace = 0;
    std::string trace_out;
    std::string zero_encoder, plus_encoder;
    CLI::Option *protocol_opt, *baseline_opt, *p_opt, *shots_opt, *order_opt, *zero_opt, *plus_opt;

    ProtocolSpec spec(Settings &s) {
        std::string id = s.get("protocol", protocol_opt, protocol);
        std::string z = s.get("zero_encoder", zero_opt, zero_encoder);
        std::string x = s.get("plus_encoder", plus_opt, plus_encoder);
        return make_protocol(id, z, x);
    }

    void add(CLI::App *sc, bool grid) {
        protocol_opt = sc->add_option("--protocol", protocol, "one of " + [] {
                                          std::string ids;
                                          for (const auto &id : protocol_ids()) {
                                              ids += (ids.empty() ? "" : ", ") + id;
                                          }
                                          return ids;
                                      }());
        baseline_opt = sc->add_option("--baseline", baseline, "lookup or naive");
        p_opt = sc->add_option("--p", p, grid ? "physical error rates, comma separated" : "physical error rate")
                    ->delimiter(',');
        shots_opt = sc->add_option("--shots", shots, "shots per point");
        order_opt = sc->add_option("--order", order, "fit exponent, 0 = t + 1");
        zero_opt = sc->add_option("--zero-encoder", zero_encoder, "circuit file replacing the default |0> encoder");
        plus_opt = sc->add_option("--plus-encoder", plus_encoder, "circuit file replacing the default |+> encoder");
    }
};

int cmd_sweep(Common &c, SimFlags &f, bool single, std::ostream &out) {
    Settings s;
    s.load(c.config);
    ProtocolSpec spec = f.spec(s);
    Baseline baseline = parse_baseline(s.get("baseline", f.baseline_opt, f.baseline));
    auto grid = s.get("p", f.p_opt, f.p);
    SweepOptions opt;
    opt.shots = s.get("shots", f.shots_opt, f.shots);
    opt.seed = s.get("seed", c.seed_opt, c.seed);
    opt.order = s.get("order", f.order_opt, f.order);
    opt.workers = s.get_untracked("workers", c.workers_opt, c.workers);
    if (grid.empty()) {
        throw ConfigError("empty p grid");
    }
    if (single && grid.size() != 1) {
        throw ConfigError("sim takes one p; use sweep for a grid");
    }
    for (double p : grid) {
        check_p(p);
    }
    if (opt.shots == 0) {
        throw ConfigError("shots must be positive");
    }
    ProtocolRunner runner(spec, baseline);
    SweepResult r = run_sweep(runner, grid, opt);
    std::string path = s.get_untracked("out", c.out_opt, c.out);

    if (single) {
        const SweepPoint &pt = r.points[0];
        json j = envelope("sim", s);
        j["shots"] = pt.shots;
        j["failures"] = pt.failures;
        j["p_L"] = pt.p_l;
        j["stderr"] = pt.err;
        j["wilson"] = {pt.wilson.lo, pt.wilson.hi};
        emit_json(path, out, j);
        if (f.trace > 0) {
            Output t(f.trace_out, out);
            DepolarizingParams dp{pt.p};
            for (uint64_t shot = 0; shot < f.trace; shot++) {
                *t << "# shot " << shot << "\n"
                   << format_fault_trace(runner.circuit(), sample_faults(runner.circuit(), dp, opt.seed, shot));
            }
        }
        return kExitOk;
    }
    Output o(path, out);
    *o << "# schema_version: " << kSchemaVersion << "\n# config: " << s.resolved().dump() << "\n";
    *o << "p,shots,failures,p_L,stderr,wilson_lo,wilson_hi\n";
    for (const auto &pt : r.points) {
        *o << fmt(pt.p) << "," << pt.shots << "," << pt.failures << "," << fmt(pt.p_l) << "," << fmt(pt.err) << ","
           << fmt(pt.wilson.lo) << "," << fmt(pt.wilson.hi) << "\n";
    }
    if (r.fit) {
        *o << "# p_th: " << fmt(r.fit->p_th) << " a: " << fmt(r.fit->a) << "\n";
    } else {
        *o << "# warning: " << r.warning << "\n";
    }
    return kExitOk;
}

int cmd_lut(Common &c, const std::string &code_name, CLI::Option *code_opt, bool hook, CLI::Option *hook_opt,
            std::ostream &out, const std::string &table_out) {
    Settings s;
    s.load(c.config);
    const StabilizerCode &code = builtin_code(s.get("code", code_opt, code_name));
    bool use_hook = s.get("hook", hook_opt, hook);
    LookupTable t;
    if (use_hook) {
        Circuit cycle = surface_cycle(code);
        t = build_lookup(code, &cycle);
    } else {
        t = build_lookup(code);
    }
    if (!table_out.empty()) {
        t.save(table_out);
    }
    json j = envelope("lut", s);
    j["entries"] = t.size();
    j["hook_entries"] = t.hook_entries();
    j["bytes"] = format_bytes(inference_map_bytes((unsigned)t.num_checks()));
    emit_json(s.get_untracked("out", c.out_opt, c.out), out, j);
    return kExitOk;
}

struct DataFlags {
    std::string data;
    CLI::Option *data_opt = nullptr;
    void add(CLI::App *sc) {
        data_opt = sc->add_option("--data", data, "dataset file");
    }
    Dataset load(Settings &s) {
        std::string path = s.get("data", data_opt, data);
        if (path.empty()) {
            throw ConfigError("--data is required");
        }
        return Dataset::load(path);
    }
};

int cmd_dataset_gen(Common &c, SimFlags &f, uint64_t target, CLI::Option *target_opt, const std::string &csv,
                    std::ostream &out) {
    Settings s;
    s.load(c.config);
    ProtocolSpec spec = f.spec(s);
    Baseline baseline = parse_baseline(s.get("baseline", f.baseline_opt, f.baseline));
    auto grid = s.get("p", f.p_opt, f.p);
    if (grid.size() != 1) {
        throw ConfigError("dataset gen takes one p");
    }
    check_p(grid[0]);
    GenerateOptions go;
    go.target = s.get("target", target_opt, target);
    go.seed = s.get("seed", c.seed_opt, c.seed);
    go.workers = s.get_untracked("workers", c.workers_opt, c.workers);
    ProtocolRunner runner(spec, baseline);
    Dataset d = generate_dataset(runner, grid[0], go);
    std::string path = s.get_untracked("out", c.out_opt, c.out);
    if (path.empty()) {
        throw ConfigError("dataset gen needs --out");
    }
    d.save(path);
    if (!csv.empty()) {
        Output o(csv, out);
        d.write_csv(*o);
    }
    json j = envelope("dataset gen", s);
    j["meta"] = meta_json(d.meta());
    out << j.dump(2) << "\n";
    return kExitOk;
}

int cmd_dataset_info(Common &c, DataFlags &df, const std::string &csv, std::ostream &out) {
    Settings s;
    s.load(c.config);
    Dataset d = df.load(s);
    if (!csv.empty()) {
        Output o(csv, out);
        d.write_csv(*o);
    }
    json j = envelope("dataset info", s);
    j["meta"] = meta_json(d.meta());
    j["rows"] = d.size();
    emit_json(s.get_untracked("out", c.out_opt, c.out), out, j);
    return kExitOk;
}

int cmd_train(Common &c, DataFlags &df, TrainFlags &tf, const std::string &model_out, const std::string &history,
              std::ostream &out) {
    Settings s;
    s.load(c.config);
    Dataset d = df.load(s);
    Hyperparams hp = tf.resolve(s);
    uint64_t seed = s.get("seed", c.seed_opt, c.seed);
    Split split = split_cyclic(d.size(), tf.train_fraction, tf.split_seed);
    TrainResult r = train(d, split, hp, seed);
    if (!model_out.empty()) {
        r.net.save(model_out);
    }
    if (!history.empty()) {
        Output o(history, out);
        write_history_csv(*o, r.history);
    }
    json j = envelope("train", s);
    j["best_epoch"] = r.best_epoch;
    j["epochs_run"] = r.history.size();
    j["test"] = eval_json(r.test);
    emit_json(s.get_untracked("out", c.out_opt, c.out), out, j);
    return kExitOk;
}

int cmd_hypertune(Common &c, DataFlags &df, TrainFlags &tf, size_t initial, CLI::Option *initial_opt, size_t refine,
                  CLI::Option *refine_opt, std::ostream &out) {
    Settings s;
    s.load(c.config);
    Dataset d = df.load(s);
    Hyperparams base = tf.resolve(s, true);
    uint64_t seed = s.get("seed", c.seed_opt, c.seed);
    size_t n0 = s.get("initial", initial_opt, initial);
    size_t n1 = s.get("refine", refine_opt, refine);
    size_t workers = s.get_untracked("workers", c.workers_opt, c.workers);
    size_t dist = 3;
    for (const auto &code : builtin_codes()) {
        if (code.name == d.meta().code) {
            dist = code.d;
        }
    }
    Split split = split_cyclic(d.size(), tf.train_fraction, tf.split_seed);
    HypertuneResult r = hypertune(d, split, SearchSpace::for_distance(dist), base, n0, n1, seed, workers);
    json j = envelope("hypertune", s);
    j["best"] = hp_json(r.best);
    for (const auto &q : r.log) {
        json e = hp_json(q.hp);
        e["objective"] = std::isfinite(q.objective) ? json(q.objective) : json(nullptr);
        e["rate"] = q.rate;
        j["log"].push_back(e);
    }
    emit_json(s.get_untracked("out", c.out_opt, c.out), out, j);
    return kExitOk;
}

int cmd_eval(Common &c, DataFlags &df, TrainFlags &tf, const std::string &model, const std::string &qmodel,
             std::ostream &out) {
    Settings s;
    s.load(c.config);
    Dataset d = df.load(s);
    double frac = s.get("train_fraction", tf.opts["train_fraction"], tf.train_fraction);
    uint64_t split_seed = s.get("split_seed", tf.opts["split_seed"], tf.split_seed);
    Split split = split_cyclic(d.size(), frac, split_seed);
    json j = envelope("eval", s);
    if (!model.empty()) {
        j["float"] = eval_json(evaluate(FeedforwardNet::load(model), d, split.test));
    }
    if (!qmodel.empty()) {
        QuantizedNet q = QuantizedNet::load(qmodel);
        j["quantized"] = eval_json(quantized_eval(q, d, split.test));
        j["quantized"]["k"] = q.k;
    }
    if (model.empty() && qmodel.empty()) {
        throw ConfigError("eval needs --model or --qmodel");
    }
    emit_json(s.get_untracked("out", c.out_opt, c.out), out, j);
    return kExitOk;
}

int cmd_quantize(Common &c, DataFlags &df, TrainFlags &tf, const std::string &model, std::vector<int> ks,
                 CLI::Option *k_opt, size_t calib, const std::string &qmodel_out, std::ostream &out) {
    Settings s;
    s.load(c.config);
    if (model.empty()) {
        throw ConfigError("quantize needs --model");
    }
    ks = s.get("k", k_opt, ks);
    FeedforwardNet net = FeedforwardNet::load(model);
    json j = envelope("quantize", s);
    std::optional<Dataset> d;
    Split split;
    Batch cal;
    if (!df.data.empty() || df.data_opt->count()) {
        d = df.load(s);
        double frac = s.get("train_fraction", tf.opts["train_fraction"], tf.train_fraction);
        uint64_t split_seed = s.get("split_seed", tf.opts["split_seed"], tf.split_seed);
        split = split_cyclic(d->size(), frac, split_seed);
        cal = make_batch(*d, net.shape, split.train.data(), std::min(calib, split.train.size()));
        j["float"] = eval_json(evaluate(net, *d, split.test));
    }
    for (int k : ks) {
        QuantizedNet q = quantize(net, k, d ? &cal : nullptr);
        json e{{"k", k}};
        std::vector<uint32_t> shifts;
        for (const auto &layers : q.heads) {
            for (const auto &L : layers) {
                shifts.push_back(L.shift);
            }
        }
        e["shifts"] = shifts;
        if (d) {
            e["eval"] = eval_json(quantized_eval(q, *d, split.test));
        }
        j["quantized"].push_back(e);
        if (!qmodel_out.empty() && ks.size() == 1) {
            q.save(qmodel_out);
        }
    }
    if (!qmodel_out.empty() && ks.size() != 1) {
        throw ConfigError("--qmodel-out needs exactly one k");
    }
    emit_json(s.get_untracked("out", c.out_opt, c.out), out, j);
    return kExitOk;
}

int cmd_timing(Common &c, std::vector<uint64_t> hidden, CLI::Option *hidden_opt, double gate_delay,
               CLI::Option *gd_opt, std::ostream &out) {
    Settings s;
    s.load(c.config);
    hidden = s.get("hidden", hidden_opt, hidden);
    gate_delay = s.get("gate_delay", gd_opt, gate_delay);
    Output o(s.get_untracked("out", c.out_opt, c.out), out);
    *o << "# schema_version: " << kSchemaVersion << "\n# config: " << s.resolved().dump() << "\n";
    *o << "protocol,depth,S,num_adders,leniency_ns,inference_map\n";
    for (const auto &p : timing_presets()) {
        char len[32];
        std::snprintf(len, sizeof len, "%.1f", adder_leniency(p.depth, p.S, hidden, gate_delay));
        *o << p.protocol << "," << p.depth << "," << p.S << "," << num_adders(p.S, hidden) << "," << len << ","
           << format_bytes(inference_map_bytes((unsigned)(2 * p.S))) << "\n";
    }
    return kExitOk;
}

int cmd_crosstrain(Common &c, TrainFlags &tf, const std::string &model, const std::string &data_list,
                   std::ostream &out) {
    Settings s;
    s.load(c.config);
    double frac = s.get("train_fraction", tf.opts["train_fraction"], tf.train_fraction);
    uint64_t split_seed = s.get("split_seed", tf.opts["split_seed"], tf.split_seed);
    if (model.empty() || data_list.empty()) {
        throw ConfigError("crosstrain needs --model and --data a,b,...");
    }
    FeedforwardNet net = FeedforwardNet::load(model);
    std::vector<Dataset> sets;
    for (const auto &path : split_list(data_list)) {
        sets.push_back(Dataset::load(path));
    }
    std::vector<const Dataset *> ptrs;
    for (const auto &d : sets) {
        ptrs.push_back(&d);
    }
    auto points = cross_train_eval(net, ptrs, frac, split_seed);
    Output o(s.get_untracked("out", c.out_opt, c.out), out);
    *o << "# schema_version: " << kSchemaVersion << "\n# config: " << s.resolved().dump() << "\n";
    *o << "p,samples,mispredicted,rate,baseline_rate\n";
    for (const auto &pt : points) {
        *o << fmt(pt.p) << "," << pt.eval.samples << "," << pt.eval.mispredicted << "," << fmt(pt.eval.rate) << ","
           << fmt(pt.eval.baseline_rate) << "\n";
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Fault-tolerant error correction simulator and neural decoder toolkit", "ftdnd"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    Common common;

    auto *codes = app.add_subcommand("codes", "list and validate stabilizer codes");
    std::string code_name, code_file;
    bool render = false;
    auto *code_name_opt = codes->add_option("--code", code_name, "built-in code name");
    codes->add_option("--file", code_file, "code definition file to validate");
    codes->add_flag("--render", render, "print the code text instead of the report");
    add_common(codes, common);

    SimFlags sim_flags;
    auto *sim = app.add_subcommand("sim", "Monte Carlo logical failure rate at one p");
    sim_flags.add(sim, false);
    sim->add_option("--trace", sim_flags.trace, "dump sampled circuit faults of the first N shots");
    sim->add_option("--trace-out", sim_flags.trace_out, "file for --trace (default stdout)");
    add_common(sim, common);

    SimFlags sweep_flags;
    sweep_flags.p = {1e-4, 2e-4, 4e-4, 6e-4, 8e-4, 1e-3};
    sweep_flags.shots = 1000000;
    auto *sweep = app.add_subcommand("sweep", "pseudo-threshold sweep over a p grid");
    sweep_flags.add(sweep, true);
    add_common(sweep, common);

    auto *lut = app.add_subcommand("lut", "build a lookup table");
    std::string lut_code = "steane", lut_table;
    bool lut_hook = false;
    auto *lut_code_opt = lut->add_option("--code", lut_code, "built-in code name");
    auto *lut_hook_opt = lut->add_flag("--hook", lut_hook, "hook-aware table from the surface measurement cycle");
    lut->add_option("--table", lut_table, "write the binary table here");
    add_common(lut, common);

    auto *dataset = app.add_subcommand("dataset", "generate or inspect training data");
    dataset->require_subcommand(1);
    auto *gen = dataset->add_subcommand("gen", "simulate shots and keep the nonzero ones");
    SimFlags gen_flags;
    gen_flags.protocol = "steane-d3";
    gen_flags.p = {2e-3};
    gen_flags.add(gen, false);
    uint64_t target = 2000000;
    std::string csv;
    auto *target_opt = gen->add_option("--target", target, "nonzero samples to keep");
    gen->add_option("--csv", csv, "also write the rows as CSV");
    add_common(gen, common);
    auto *info = dataset->add_subcommand("info", "print a dataset header");
    DataFlags info_data;
    info_data.add(info);
    info->add_option("--csv", csv, "write the rows as CSV");
    add_common(info, common);

    auto *train_cmd = app.add_subcommand("train", "train a feedforward decoder");
    DataFlags train_data;
    TrainFlags train_flags;
    std::string model_out, history;
    train_data.add(train_cmd);
    train_flags.add(train_cmd);
    train_cmd->add_option("--model-out", model_out, "write the trained net here");
    train_cmd->add_option("--history", history, "per-epoch CSV");
    add_common(train_cmd, common);

    auto *tune = app.add_subcommand("hypertune", "Latin hypercube plus local refinement");
    DataFlags tune_data;
    TrainFlags tune_flags;
    size_t initial = 10, refine = 10;
    tune_data.add(tune);
    tune_flags.add(tune, true);
    auto *initial_opt = tune->add_option("--initial", initial, "Latin hypercube queries");
    auto *refine_opt = tune->add_option("--refine", refine, "refinement queries");
    add_common(tune, common);

    auto *eval_cmd = app.add_subcommand("eval", "logical fault rate of baseline plus network on the test split");
    DataFlags eval_data;
    TrainFlags eval_flags;
    std::string model, qmodel;
    eval_data.add(eval_cmd);
    eval_flags.opts["train_fraction"] = eval_cmd->add_option("--train-fraction", eval_flags.train_fraction);
    eval_flags.opts["split_seed"] = eval_cmd->add_option("--split-seed", eval_flags.split_seed);
    eval_cmd->add_option("--model", model, "float model");
    eval_cmd->add_option("--qmodel", qmodel, "quantized model");
    add_common(eval_cmd, common);

    auto *quant = app.add_subcommand("quantize", "fixed-point conversion and evaluation");
    DataFlags quant_data;
    TrainFlags quant_flags;
    std::vector<int> ks{8};
    size_t calib = 1000;
    std::string qmodel_out;
    quant_data.add(quant);
    quant_flags.opts["train_fraction"] = quant->add_option("--train-fraction", quant_flags.train_fraction);
    quant_flags.opts["split_seed"] = quant->add_option("--split-seed", quant_flags.split_seed);
    quant->add_option("--model", model, "float model");
    auto *k_opt = quant->add_option("--k", ks, "bit widths, comma separated")->delimiter(',');
    quant->add_option("--calibration", calib, "training rows used to calibrate shifts");
    quant->add_option("--qmodel-out", qmodel_out, "write the quantized model here");
    add_common(quant, common);

    auto *timing = app.add_subcommand("timing", "critical-path adder leniency per protocol");
    std::vector<uint64_t> timing_hidden{1000, 1000};
    double gate_delay = 10;
    auto *th_opt = timing->add_option("--hidden", timing_hidden, "hidden widths")->delimiter(',');
    auto *gd_opt = timing->add_option("--gate-delay", gate_delay, "ns per FTEC gate step");
    add_common(timing, common);

    auto *cross = app.add_subcommand("crosstrain", "evaluate one net on datasets at other p");
    TrainFlags cross_flags;
    std::string cross_data;
    cross_flags.opts["train_fraction"] = cross->add_option("--train-fraction", cross_flags.train_fraction);
    cross_flags.opts["split_seed"] = cross->add_option("--split-seed", cross_flags.split_seed);
    cross->add_option("--model", model, "float model");
    cross->add_option("--data", cross_data, "datasets, comma separated");
    add_common(cross, common);

    std::vector<const char *> argv;
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse((int)argv.size(), argv.data());
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*codes) {
            return cmd_codes(common, code_name, code_name_opt, code_file, render, out);
        }
        if (*sim) {
            return cmd_sweep(common, sim_flags, true, out);
        }
        if (*sweep) {
            return cmd_sweep(common, sweep_flags, false, out);
        }
        if (*lut) {
            return cmd_lut(common, lut_code, lut_code_opt, lut_hook, lut_hook_opt, out, lut_table);
        }
        if (*gen) {
            return cmd_dataset_gen(common, gen_flags, target, target_opt, csv, out);
        }
        if (*info) {
            return cmd_dataset_info(common, info_data, csv, out);
        }
        if (*train_cmd) {
            return cmd_train(common, train_data, train_flags, model_out, history, out);
        }
        if (*tune) {
            return cmd_hypertune(common, tune_data, tune_flags, initial, initial_opt, refine, refine_opt, out);
        }
        if (*eval_cmd) {
            return cmd_eval(common, eval_data, eval_flags, model, qmodel, out);
        }
        if (*quant) {
            return cmd_quantize(common, quant_data, quant_flags, model, ks, k_opt, calib, qmodel_out, out);
        }
        if (*timing) {
            return cmd_timing(common, timing_hidden, th_opt, gate_delay, gd_opt, out);
        }
        if (*cross) {
            return cmd_crosstrain(common, cross_flags, model, cross_data, out);
        }
    } catch (const ConfigError &e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DimensionError &e) {
        err << "validation failure: " << e.what() << "\n";
        return kExitValidation;
    } catch (const FormatError &e) {
        err << "validation failure: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument &e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const json::exception &e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DivergenceError &e) {
        err << "diverged: " << e.what() << "\n";
        return kExitDivergence;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitRuntime;
}

}  // namespace ftdnd
