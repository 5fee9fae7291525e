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

#include "ftdnd/neural.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "ftdnd/parallel.h"

namespace ftdnd {

namespace {

constexpr const char *kNetMagic = "FTDND-NET 1";

double gaussian(ShotRng &rng) {
    double u1 = rng.uniform_open0(), u2 = rng.uniform_open0();
    return std::sqrt(-2 * std::log(u1)) * std::cos(2 * std::numbers::pi * u2);
}

// Per-column log-sum-exp of a 2-row logit matrix.
Eigen::RowVectorXd logsumexp(const Matrix &z) {
    Eigen::RowVectorXd m = z.colwise().maxCoeff();
    return m.array() + ((z.row(0) - m).array().exp() + (z.row(1) - m).array().exp()).log();
}

struct HeadTrace {
    std::vector<Matrix> act;  // act[0] = input, act[l+1] = output of layer l
};

Matrix head_forward(const Head &h, const Matrix &in, HeadTrace *trace) {
    Matrix a = in;
    if (trace) {
        trace->act.assign(1, in);
    }
    for (size_t l = 0; l < h.w.size(); l++) {
        Matrix z = h.w[l] * a;
        z.colwise() += h.b[l];
        if (l + 1 < h.w.size()) {
            z = z.cwiseMax(0.0);
        }
        a = std::move(z);
        if (trace) {
            trace->act.push_back(a);
        }
    }
    return a;
}

double head_loss(const Matrix &logits, const std::vector<uint8_t> &label) {
    Eigen::RowVectorXd lse = logsumexp(logits);
    double sum = 0;
    for (Eigen::Index j = 0; j < logits.cols(); j++) {
        sum += lse(j) - logits(label[j], j);
    }
    return sum;
}

void check_inputs(const FeedforwardNet &net, const std::array<Matrix, 2> &in) {
    for (int h = 0; h < 2; h++) {
        if ((size_t)in[h].rows() != net.shape.head_inputs(h)) {
            throw DimensionError("head " + std::to_string(h) + " expects " +
                                 std::to_string(net.shape.head_inputs(h)) + " inputs, got " +
                                 std::to_string(in[h].rows()));
        }
    }
}

void write_u32(std::ostream &out, uint32_t v) {
    unsigned char b[4] = {(unsigned char)v, (unsigned char)(v >> 8), (unsigned char)(v >> 16),
                          (unsigned char)(v >> 24)};
    out.write((const char *)b, 4);
}

uint32_t read_u32(std::istream &in) {
    unsigned char b[4];
    if (!in.read((char *)b, 4)) {
        throw FormatError("model file truncated");
    }
    return (uint32_t)b[0] | (uint32_t)b[1] << 8 | (uint32_t)b[2] << 16 | (uint32_t)b[3] << 24;
}

void write_f64(std::ostream &out, double v) {
    uint64_t u;
    std::memcpy(&u, &v, 8);
    write_u32(out, (uint32_t)u);
    write_u32(out, (uint32_t)(u >> 32));
}

double read_f64(std::istream &in) {
    uint64_t lo = read_u32(in), hi = read_u32(in);
    uint64_t u = lo | hi << 32;
    double v;
    std::memcpy(&v, &u, 8);
    return v;
}

}  // namespace

FeedforwardNet FeedforwardNet::init(const NetShape &shape, double std, uint64_t seed) {
    FeedforwardNet net;
    net.shape = shape;
    ShotRng rng(seed, 0);
    for (int h = 0; h < 2; h++) {
        size_t in = shape.head_inputs(h);
        std::vector<size_t> sizes = shape.hidden;
        sizes.push_back(2);
        for (size_t out : sizes) {
            Matrix w(out, in);
            for (Eigen::Index c = 0; c < w.cols(); c++) {
                for (Eigen::Index r = 0; r < w.rows(); r++) {
                    w(r, c) = std * gaussian(rng);
                }
            }
            net.heads[h].w.push_back(std::move(w));
            net.heads[h].b.push_back(Vector::Zero(out));
            in = out;
        }
    }
    return net;
}

size_t FeedforwardNet::num_params() const {
    size_t n = 0;
    for (const auto &h : heads) {
        for (size_t l = 0; l < h.w.size(); l++) {
            n += h.w[l].size() + h.b[l].size();
        }
    }
    return n;
}

std::vector<double *> FeedforwardNet::params() {
    std::vector<double *> out;
    out.reserve(num_params());
    for (auto &h : heads) {
        for (size_t l = 0; l < h.w.size(); l++) {
            for (Eigen::Index i = 0; i < h.w[l].size(); i++) {
                out.push_back(h.w[l].data() + i);
            }
            for (Eigen::Index i = 0; i < h.b[l].size(); i++) {
                out.push_back(h.b[l].data() + i);
            }
        }
    }
    return out;
}

void FeedforwardNet::save(std::ostream &out) const {
    out << kNetMagic << "\n"
        << "x_in: " << shape.x_in << "\n"
        << "z_in: " << shape.z_in << "\n"
        << "hidden:";
    for (size_t h : shape.hidden) {
        out << " " << h;
    }
    out << "\nfeed_both: " << (shape.feed_both ? 1 : 0) << "\n"
        << "end\n";
    for (const auto &h : heads) {
        for (size_t l = 0; l < h.w.size(); l++) {
            write_u32(out, (uint32_t)h.w[l].rows());
            write_u32(out, (uint32_t)h.w[l].cols());
            for (Eigen::Index i = 0; i < h.w[l].size(); i++) {
                write_f64(out, h.w[l].data()[i]);
            }
            for (Eigen::Index i = 0; i < h.b[l].size(); i++) {
                write_f64(out, h.b[l][i]);
            }
        }
    }
}

void FeedforwardNet::save(const std::string &path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    save(out);
}

FeedforwardNet FeedforwardNet::load(std::istream &in) {
    std::string line;
    if (!std::getline(in, line) || line != kNetMagic) {
        throw FormatError("not a model file (bad magic line)");
    }
    std::map<std::string, std::string> kv;
    while (std::getline(in, line) && line != "end") {
        auto colon = line.find(':');
        if (colon == std::string::npos) {
            throw FormatError("bad header line '" + line + "'");
        }
        kv[line.substr(0, colon)] = line.substr(colon + 1);
    }
    for (const char *key : {"x_in", "z_in", "hidden", "feed_both"}) {
        if (!kv.count(key)) {
            throw FormatError(std::string("model header lacks '") + key + "'");
        }
    }
    NetShape shape;
    shape.x_in = std::stoul(kv["x_in"]);
    shape.z_in = std::stoul(kv["z_in"]);
    shape.feed_both = std::stoi(kv["feed_both"]) != 0;
    std::istringstream hs(kv["hidden"]);
    for (size_t v; hs >> v;) {
        shape.hidden.push_back(v);
    }
    FeedforwardNet net = init(shape, 0, 0);
    for (auto &h : net.heads) {
        for (size_t l = 0; l < h.w.size(); l++) {
            uint32_t r = read_u32(in), c = read_u32(in);
            if (r != h.w[l].rows() || c != h.w[l].cols()) {
                throw FormatError("layer shape in model file does not match its header");
            }
            for (Eigen::Index i = 0; i < h.w[l].size(); i++) {
                h.w[l].data()[i] = read_f64(in);
            }
            for (Eigen::Index i = 0; i < h.b[l].size(); i++) {
                h.b[l][i] = read_f64(in);
            }
        }
    }
    return net;
}

FeedforwardNet FeedforwardNet::load(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    return load(in);
}

Batch make_batch(const Dataset &d, const NetShape &shape, const uint32_t *rows, size_t count) {
    if (d.meta().x_bits != shape.x_in || d.meta().z_bits != shape.z_in) {
        throw DimensionError("dataset has " + std::to_string(d.meta().x_bits) + "+" +
                             std::to_string(d.meta().z_bits) + " syndrome bits, network expects " +
                             std::to_string(shape.x_in) + "+" + std::to_string(shape.z_in));
    }
    Batch b;
    for (int h = 0; h < 2; h++) {
        b.in[h] = Matrix::Zero((Eigen::Index)shape.head_inputs(h), (Eigen::Index)count);
        b.label[h].resize(count);
    }
    size_t nx = shape.x_in, nz = shape.z_in;
    for (size_t j = 0; j < count; j++) {
        size_t r = rows[j];
        for (size_t k = 0; k < nx; k++) {
            if (d.x(r, k)) {
                b.in[0](k, j) = 1;
                if (shape.feed_both) {
                    b.in[1](k, j) = 1;
                }
            }
        }
        for (size_t k = 0; k < nz; k++) {
            if (d.z(r, k)) {
                b.in[1](shape.feed_both ? nx + k : k, j) = 1;
                if (shape.feed_both) {
                    b.in[0](nx + k, j) = 1;
                }
            }
        }
        uint8_t lab = d.label(r);
        b.label[0][j] = lab & 1;
        b.label[1][j] = (lab >> 1) & 1;
    }
    return b;
}

Batch make_batch(const Dataset &d, const NetShape &shape, const std::vector<uint32_t> &rows) {
    return make_batch(d, shape, rows.data(), rows.size());
}

std::array<Matrix, 2> forward(const FeedforwardNet &net, const std::array<Matrix, 2> &in) {
    check_inputs(net, in);
    return {head_forward(net.heads[0], in[0], nullptr), head_forward(net.heads[1], in[1], nullptr)};
}

std::array<Vector, 2> forward(const FeedforwardNet &net, const BitVector &x, const BitVector &z) {
    if (x.size() != net.shape.x_in || z.size() != net.shape.z_in) {
        throw DimensionError("input bits do not match the network shape");
    }
    std::array<Matrix, 2> in;
    for (int h = 0; h < 2; h++) {
        in[h] = Matrix::Zero((Eigen::Index)net.shape.head_inputs(h), 1);
    }
    for (size_t k : x.ones()) {
        in[0](k, 0) = 1;
        if (net.shape.feed_both) {
            in[1](k, 0) = 1;
        }
    }
    for (size_t k : z.ones()) {
        in[1](net.shape.feed_both ? net.shape.x_in + k : k, 0) = 1;
        if (net.shape.feed_both) {
            in[0](net.shape.x_in + k, 0) = 1;
        }
    }
    auto out = forward(net, in);
    return {out[0].col(0), out[1].col(0)};
}

double loss(const FeedforwardNet &net, const Batch &batch) {
    if (batch.size() == 0) {
        throw std::invalid_argument("loss of an empty batch");
    }
    auto logits = forward(net, batch.in);
    return (head_loss(logits[0], batch.label[0]) + head_loss(logits[1], batch.label[1])) / (double)batch.size();
}

double backprop(const FeedforwardNet &net, const Batch &batch, FeedforwardNet &grads) {
    check_inputs(net, batch.in);
    if (batch.size() == 0) {
        throw std::invalid_argument("backprop of an empty batch");
    }
    double n = (double)batch.size();
    double total = 0;
    grads.shape = net.shape;
    for (int h = 0; h < 2; h++) {
        const Head &head = net.heads[h];
        Head &g = grads.heads[h];
        g.w.resize(head.w.size());
        g.b.resize(head.b.size());
        HeadTrace tr;
        Matrix logits = head_forward(head, batch.in[h], &tr);
        total += head_loss(logits, batch.label[h]);
        // d loss / d logits = (softmax - onehot) / n
        Eigen::RowVectorXd lse = logsumexp(logits);
        Matrix delta(2, logits.cols());
        for (Eigen::Index j = 0; j < logits.cols(); j++) {
            for (int c = 0; c < 2; c++) {
                delta(c, j) = (std::exp(logits(c, j) - lse(j)) - (batch.label[h][j] == c ? 1.0 : 0.0)) / n;
            }
        }
        for (size_t l = head.w.size(); l-- > 0;) {
            g.w[l] = delta * tr.act[l].transpose();
            g.b[l] = delta.rowwise().sum();
            if (l > 0) {
                Matrix back = head.w[l].transpose() * delta;
                delta = back.array() * (tr.act[l].array() > 0).cast<double>();
            }
        }
    }
    return total / n;
}

OptimizerKind parse_optimizer(const std::string &name) {
    if (name == "sgd") {
        return OptimizerKind::Sgd;
    }
    if (name == "momentum") {
        return OptimizerKind::Momentum;
    }
    if (name == "adagrad") {
        return OptimizerKind::AdaGrad;
    }
    if (name == "rmsprop") {
        return OptimizerKind::RmsProp;
    }
    throw std::invalid_argument("unknown optimizer '" + name + "' (sgd, momentum, adagrad, rmsprop)");
}

const char *optimizer_name(OptimizerKind k) {
    switch (k) {
        case OptimizerKind::Sgd:
            return "sgd";
        case OptimizerKind::Momentum:
            return "momentum";
        case OptimizerKind::AdaGrad:
            return "adagrad";
        case OptimizerKind::RmsProp:
            return "rmsprop";
    }
    return "?";
}

void optimizer_step(const OptimizerConfig &cfg, OptimizerState &state, const std::vector<double *> &params,
                    const std::vector<double *> &grads) {
    if (params.size() != grads.size()) {
        throw DimensionError("parameter and gradient counts differ");
    }
    size_t n = params.size();
    state.delta.resize(n, 0.0);
    state.sigma.resize(n, 0.0);
    double eta = cfg.learning_rate;
    for (size_t i = 0; i < n; i++) {
        double g = *grads[i];
        double &d = state.delta[i];
        double &s = state.sigma[i];
        switch (cfg.kind) {
            case OptimizerKind::Sgd:
                d = -eta * g;
                break;
            case OptimizerKind::Momentum:
                d = cfg.momentum * d - eta * g;
                break;
            case OptimizerKind::AdaGrad:
                s += g * g;
                d = -eta * g / std::sqrt(s + cfg.epsilon);
                break;
            case OptimizerKind::RmsProp:
                s = cfg.decay * s + (1 - cfg.decay) * g * g;
                d = cfg.momentum * d - eta * g / std::sqrt(s + cfg.epsilon);
                break;
        }
        *params[i] += d;
    }
}

EvalResult evaluate(const std::function<uint8_t(const Dataset &, size_t)> &predict, const Dataset &d,
                    const std::vector<uint32_t> &rows) {
    EvalResult r;
    r.samples = rows.size();
    for (uint32_t i : rows) {
        uint8_t lab = d.label(i);
        r.baseline_failures += lab != 0;
        r.mispredicted += predict(d, i) != lab;
    }
    if (d.meta().kept == 0) {
        throw std::invalid_argument("dataset has no kept samples");
    }
    r.shots = (double)d.meta().total_shots * (double)rows.size() / (double)d.meta().kept;
    r.rate = r.shots > 0 ? (double)r.mispredicted / r.shots : 0;
    r.baseline_rate = r.shots > 0 ? (double)r.baseline_failures / r.shots : 0;
    return r;
}

EvalResult evaluate(const FeedforwardNet &net, const Dataset &d, const std::vector<uint32_t> &rows) {
    EvalResult r;
    if (d.meta().kept == 0) {
        throw std::invalid_argument("dataset has no kept samples");
    }
    r.samples = rows.size();
    constexpr size_t kChunk = 4096;
    double ce = 0;
    for (size_t first = 0; first < rows.size(); first += kChunk) {
        size_t count = std::min(kChunk, rows.size() - first);
        Batch b = make_batch(d, net.shape, rows.data() + first, count);
        auto logits = forward(net, b.in);
        ce += head_loss(logits[0], b.label[0]) + head_loss(logits[1], b.label[1]);
        for (size_t j = 0; j < count; j++) {
            uint8_t pred = 0;
            for (int h = 0; h < 2; h++) {
                pred |= (uint8_t)(logits[h](1, (Eigen::Index)j) > logits[h](0, (Eigen::Index)j)) << h;
            }
            uint8_t lab = (uint8_t)(b.label[0][j] | b.label[1][j] << 1);
            r.baseline_failures += lab != 0;
            r.mispredicted += pred != lab;
        }
    }
    r.cross_entropy = rows.empty() ? 0 : ce / (double)rows.size();
    r.shots = (double)d.meta().total_shots * (double)rows.size() / (double)d.meta().kept;
    r.rate = r.shots > 0 ? (double)r.mispredicted / r.shots : 0;
    r.baseline_rate = r.shots > 0 ? (double)r.baseline_failures / r.shots : 0;
    return r;
}

TrainResult train(const Dataset &d, const Split &split, const Hyperparams &hp, uint64_t seed) {
    if (split.train.empty() || split.test.empty()) {
        throw std::invalid_argument("training needs nonempty train and test views");
    }
    if (hp.batch_size == 0 || hp.max_epochs == 0) {
        throw std::invalid_argument("batch size and epoch budget must be positive");
    }
    NetShape shape{d.meta().x_bits, d.meta().z_bits, hp.hidden, hp.feed_both};
    FeedforwardNet net = FeedforwardNet::init(shape, hp.initial_std, derive_seed(seed, 0));
    FeedforwardNet grads = net;
    auto p = net.params();
    auto g = grads.params();
    OptimizerState state;
    TrainResult res;
    res.net = net;
    double best = INFINITY;
    size_t since_best = 0;
    std::vector<uint32_t> order = split.train;
    Batch all = make_batch(d, shape, order);
    for (size_t epoch = 1; epoch <= hp.max_epochs; epoch++) {
        // Fisher-Yates over positions in the train view
        std::vector<uint32_t> perm(order.size());
        for (uint32_t i = 0; i < perm.size(); i++) {
            perm[i] = i;
        }
        ShotRng rng(derive_seed(seed, 1), epoch);
        for (size_t i = perm.size(); i > 1; i--) {
            std::swap(perm[i - 1], perm[rng.below((uint32_t)i)]);
        }
        double train_sum = 0;
        for (size_t first = 0; first < perm.size(); first += hp.batch_size) {
            size_t count = std::min(hp.batch_size, perm.size() - first);
            Eigen::Map<const Eigen::Matrix<uint32_t, Eigen::Dynamic, 1>> idx(perm.data() + first,
                                                                              (Eigen::Index)count);
            Batch b;
            for (int h = 0; h < 2; h++) {
                b.in[h] = all.in[h](Eigen::all, idx);
                b.label[h].resize(count);
                for (size_t j = 0; j < count; j++) {
                    b.label[h][j] = all.label[h][perm[first + j]];
                }
            }
            double l = backprop(net, b, grads);
            if (!std::isfinite(l)) {
                throw DivergenceError("training diverged at epoch " + std::to_string(epoch) + " (loss " +
                                      std::to_string(l) + "); lower the learning rate");
            }
            train_sum += l * (double)count;
            optimizer_step(hp.opt, state, p, g);
        }
        EvalResult ev = evaluate(net, d, split.test);
        if (!std::isfinite(ev.cross_entropy)) {
            throw DivergenceError("validation loss is not finite at epoch " + std::to_string(epoch));
        }
        res.history.push_back({epoch, train_sum / (double)perm.size(), ev.cross_entropy, ev.rate});
        if (ev.cross_entropy < best) {
            best = ev.cross_entropy;
            since_best = 0;
            res.net = net;
            res.best_epoch = epoch;
            res.test = ev;
        } else if (++since_best >= hp.patience) {
            break;
        }
    }
    return res;
}

void write_history_csv(std::ostream &out, const std::vector<EpochRecord> &history) {
    out << "epoch,train_loss,test_loss,test_rate\n";
    char buf[128];
    for (const auto &h : history) {
        std::snprintf(buf, sizeof buf, "%zu,%.10g,%.10g,%.10g\n", h.epoch, h.train_loss, h.test_loss, h.test_rate);
        out << buf;
    }
}

SearchSpace SearchSpace::for_distance(size_t d) {
    SearchSpace s;
    if (d >= 5) {
        s.lr_lo = 1e-6;
        s.lr_hi = 1e-2;
    }
    return s;
}

Hyperparams SearchSpace::at(const std::array<double, 5> &u, const Hyperparams &base) const {
    auto log_lerp = [](double lo, double hi, double t) {
        return std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)));
    };
    Hyperparams hp = base;
    hp.opt.learning_rate = log_lerp(lr_lo, lr_hi, u[0]);
    hp.initial_std = log_lerp(std_lo, std_hi, u[1]);
    size_t width = hidden_lo + std::min(hidden_hi - hidden_lo, (size_t)(u[2] * (double)(hidden_hi - hidden_lo + 1)));
    hp.hidden.assign(layers, width);
    hp.opt.decay = decay_lo + u[3] * (decay_hi - decay_lo);
    hp.opt.momentum = momentum_lo + u[4] * (momentum_hi - momentum_lo);
    return hp;
}

std::vector<std::vector<double>> latin_hypercube(size_t n, size_t dims, uint64_t seed) {
    std::vector<std::vector<double>> pts(n, std::vector<double>(dims));
    ShotRng rng(seed, 0);
    for (size_t k = 0; k < dims; k++) {
        std::vector<uint32_t> perm(n);
        for (uint32_t i = 0; i < n; i++) {
            perm[i] = i;
        }
        for (size_t i = n; i > 1; i--) {
            std::swap(perm[i - 1], perm[rng.below((uint32_t)i)]);
        }
        for (size_t i = 0; i < n; i++) {
            double jitter = 1 - rng.uniform_open0();  // [0, 1)
            pts[i][k] = ((double)perm[i] + jitter) / (double)n;
        }
    }
    return pts;
}

HypertuneResult hypertune(const Dataset &d, const Split &split, const SearchSpace &space, const Hyperparams &base,
                          size_t initial, size_t refine, uint64_t seed, size_t workers) {
    if (initial == 0) {
        throw std::invalid_argument("hypertune needs at least one initial query");
    }
    HypertuneResult res;
    std::vector<std::array<double, 5>> units;
    for (const auto &pt : latin_hypercube(initial, 5, derive_seed(seed, 0))) {
        units.push_back({pt[0], pt[1], pt[2], pt[3], pt[4]});
    }
    auto query = [&](const std::array<double, 5> &u, size_t q) {
        Hyperparams hp = space.at(u, base);
        try {
            TrainResult tr = train(d, split, hp, derive_seed(seed, 1000 + q));
            return HypertuneQuery{hp, tr.test.cross_entropy, tr.test.rate};
        } catch (const DivergenceError &) {
            return HypertuneQuery{hp, INFINITY, INFINITY};
        }
    };
    std::vector<HypertuneQuery> first(initial);
    parallel_for(initial, workers, [&](size_t q) { first[q] = query(units[q], q); });
    res.log = first;
    size_t best = 0;
    for (size_t q = 1; q < res.log.size(); q++) {
        if (res.log[q].objective < res.log[best].objective) {
            best = q;
        }
    }
    std::array<double, 5> center = units[best];
    double radius = 0.25;
    ShotRng rng(derive_seed(seed, 1), 0);
    for (size_t r = 0; r < refine; r++) {
        std::array<double, 5> u;
        for (size_t k = 0; k < 5; k++) {
            double v = center[k] + radius * (2 * (1 - rng.uniform_open0()) - 1);
            u[k] = std::clamp(v, 0.0, std::nextafter(1.0, 0.0));
        }
        HypertuneQuery hq = query(u, initial + r);
        res.log.push_back(hq);
        if (hq.objective < res.log[best].objective) {
            best = res.log.size() - 1;
            center = u;
        } else {
            radius = std::max(radius / 2, 1.0 / 64);
        }
    }
    res.best = res.log[best].hp;
    return res;
}

std::vector<CrossPoint> cross_train_eval(const FeedforwardNet &net, const std::vector<const Dataset *> &sets,
                                         double train_fraction, uint64_t split_seed) {
    std::vector<CrossPoint> out;
    for (const Dataset *d : sets) {
        if (d->meta().x_bits != net.shape.x_in || d->meta().z_bits != net.shape.z_in) {
            throw DimensionError("dataset at p = " + std::to_string(d->meta().p) +
                                 " does not match the network's input geometry");
        }
        Split s = split_cyclic(d->size(), train_fraction, split_seed);
        out.push_back({d->meta().p, evaluate(net, *d, s.test)});
    }
    return out;
}

}  // namespace ftdnd
