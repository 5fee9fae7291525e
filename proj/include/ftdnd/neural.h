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

#ifndef FTDND_NEURAL_H
#define FTDND_NEURAL_H

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "ftdnd/dataset.h"

namespace ftdnd {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct NetShape {
    size_t x_in = 0;
    size_t z_in = 0;
    std::vector<size_t> hidden;  // per head
    bool feed_both = false;      // both heads read x and z bits
    size_t head_inputs(int head) const {
        return feed_both ? x_in + z_in : head == 0 ? x_in : z_in;
    }
    bool operator==(const NetShape &) const = default;
};

/// One head: affine + ReLU per hidden layer, affine output with 2 logits (class 0, class 1).
struct Head {
    std::vector<Matrix> w;  // layer l: out x in
    std::vector<Vector> b;
    bool operator==(const Head &) const = default;
};

/// X head predicts b1 from the x syndrome bits, Z head b2 from the z bits.
struct FeedforwardNet {
    NetShape shape;
    std::array<Head, 2> heads;

    /// Zero biases, Gaussian(0, std) weights from the given seed.
    static FeedforwardNet init(const NetShape &shape, double std, uint64_t seed);
    size_t num_params() const;
    /// Every parameter in a fixed order (head, layer, weights column-major, then bias).
    std::vector<double *> params();
    void save(std::ostream &out) const;
    void save(const std::string &path) const;
    static FeedforwardNet load(std::istream &in);
    static FeedforwardNet load(const std::string &path);
    bool operator==(const FeedforwardNet &) const = default;
};

/// Inputs for a set of rows: one column per sample.
struct Batch {
    std::array<Matrix, 2> in;
    std::array<std::vector<uint8_t>, 2> label;  // b1 for head 0, b2 for head 1
    size_t size() const {
        return label[0].size();
    }
};
Batch make_batch(const Dataset &d, const NetShape &shape, const std::vector<uint32_t> &rows);
Batch make_batch(const Dataset &d, const NetShape &shape, const uint32_t *rows, size_t count);

/// Logits (2 x batch) of each head.
std::array<Matrix, 2> forward(const FeedforwardNet &net, const std::array<Matrix, 2> &in);
std::array<Vector, 2> forward(const FeedforwardNet &net, const BitVector &x, const BitVector &z);

/// Mean over the batch of the two heads' softmax cross entropies.
double loss(const FeedforwardNet &net, const Batch &batch);

/// Loss and its exact gradient; grads has the shape of net.
double backprop(const FeedforwardNet &net, const Batch &batch, FeedforwardNet &grads);

enum class OptimizerKind : uint8_t { Sgd, Momentum, AdaGrad, RmsProp };
OptimizerKind parse_optimizer(const std::string &name);
const char *optimizer_name(OptimizerKind k);

struct OptimizerConfig {
    OptimizerKind kind = OptimizerKind::RmsProp;
    double learning_rate = 1e-3;
    double momentum = 0;
    double decay = 0.9;
    double epsilon = 1e-8;
};

/// Delta (momentum buffer) and Sigma (squared-gradient accumulator) per parameter.
struct OptimizerState {
    std::vector<double> delta;
    std::vector<double> sigma;
};

/// One update of the flattened parameters.
void optimizer_step(const OptimizerConfig &cfg, OptimizerState &state, const std::vector<double *> &params,
                    const std::vector<double *> &grads);

struct Hyperparams {
    OptimizerConfig opt;
    double initial_std = 0.01;
    std::vector<size_t> hidden{100, 100};
    size_t batch_size = 1024;
    size_t max_epochs = 50;
    size_t patience = 5;
    bool feed_both = false;
};

struct DivergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EvalResult {
    uint64_t samples = 0;
    uint64_t mispredicted = 0;       // baseline + network still wrong
    uint64_t baseline_failures = 0;  // nonzero labels
    double shots = 0;                // simulated shots these samples stand for
    double rate = 0;
    double baseline_rate = 0;
    double cross_entropy = 0;
};

/// Logical fault rate of baseline + network on the given rows. The zero-zero shots that generation
/// dropped count as successes: the denominator is total_shots * rows / kept.
EvalResult evaluate(const FeedforwardNet &net, const Dataset &d, const std::vector<uint32_t> &rows);
EvalResult evaluate(const std::function<uint8_t(const Dataset &, size_t)> &predict, const Dataset &d,
                    const std::vector<uint32_t> &rows);

struct EpochRecord {
    size_t epoch;
    double train_loss;
    double test_loss;
    double test_rate;
};

struct TrainResult {
    FeedforwardNet net;  // best validation-loss snapshot
    std::vector<EpochRecord> history;
    size_t best_epoch = 0;
    EvalResult test;
};

/// Mini-batch training on split.train, validation on split.test; deterministic given seed.
TrainResult train(const Dataset &d, const Split &split, const Hyperparams &hp, uint64_t seed);
void write_history_csv(std::ostream &out, const std::vector<EpochRecord> &history);

/// Search box; learning rate and initial std are sampled on a log scale.
struct SearchSpace {
    double lr_lo = 1e-5, lr_hi = 1e-1;
    double std_lo = 1e-3, std_hi = 1e-1;
    size_t hidden_lo = 100, hidden_hi = 1000;
    double decay_lo = 0, decay_hi = 1 - 1e-6;
    double momentum_lo = 0, momentum_hi = 1 - 1e-6;
    size_t layers = 2;
    /// Distance-5 learning-rate box.
    static SearchSpace for_distance(size_t d);
    Hyperparams at(const std::array<double, 5> &unit, const Hyperparams &base) const;
};

/// n points in [0,1)^dims, one per stratum [k/n, (k+1)/n) in every dimension.
std::vector<std::vector<double>> latin_hypercube(size_t n, size_t dims, uint64_t seed);

struct HypertuneQuery {
    Hyperparams hp;
    double objective;  // validation cross entropy
    double rate;
};

struct HypertuneResult {
    Hyperparams best;
    std::vector<HypertuneQuery> log;
};

/// `initial` Latin-hypercube queries, then `refine` queries drawn around the best point so far in a box
/// that halves every time the best does not move.
HypertuneResult hypertune(const Dataset &d, const Split &split, const SearchSpace &space, const Hyperparams &base,
                          size_t initial, size_t refine, uint64_t seed, size_t workers = 1);

struct CrossPoint {
    double p;
    EvalResult eval;
};
/// Evaluates one net on the test view of every dataset (same split seed for each).
std::vector<CrossPoint> cross_train_eval(const FeedforwardNet &net, const std::vector<const Dataset *> &sets,
                                         double train_fraction, uint64_t split_seed);

}  // namespace ftdnd

#endif
