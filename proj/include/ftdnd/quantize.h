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

#ifndef FTDND_QUANTIZE_H
#define FTDND_QUANTIZE_H

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ftdnd/neural.h"

namespace ftdnd {

struct QuantLayer {
    uint32_t rows = 0, cols = 0;
    std::vector<int32_t> w;  // row-major
    std::vector<int32_t> b;
    uint32_t shift = 0;
    uint32_t bias_shift = 0;  // bias enters the accumulator as b << bias_shift
    double scale = 1;         // accumulator = scale * float pre-activation
    bool operator==(const QuantLayer &) const = default;
};

/// Every parameter lies in [-2^(k-1)+1, 2^(k-1)].
struct QuantizedNet {
    int k = 8;
    NetShape shape;
    std::array<std::vector<QuantLayer>, 2> heads;

    int64_t lo() const {
        return -(int64_t{1} << (k - 1)) + 1;
    }
    int64_t hi() const {
        return int64_t{1} << (k - 1);
    }
    void save(std::ostream &out) const;
    void save(const std::string &path) const;
    static QuantizedNet load(std::istream &in);
    static QuantizedNet load(const std::string &path);
    bool operator==(const QuantizedNet &) const = default;
};

/// ceil(log2(fan_in + 1)) - 1
uint32_t default_shift(size_t fan_in);

/// Weights of a layer share the scale 2^(k-1) / max |w|. The bias, at the accumulator's scale, is rounded
/// to k bits after dropping the fewest low bits that make it fit. With a calibration batch each shift
/// grows until at most 0.1% of that layer's outputs saturate. Needs 2k + ceil(log2(fan_in + 1)) <= 63.
QuantizedNet quantize(const FeedforwardNet &net, int k, const Batch *calibration = nullptr);

/// Integer logits (2 x batch) per head: 64-bit multiply-accumulate, arithmetic right shift, saturation to
/// k bits, ReLU on hidden layers.
std::array<std::vector<int64_t>, 2> quantized_forward(const QuantizedNet &q, const BitVector &x, const BitVector &z);
/// Bit 0: head 0 predicts class 1; bit 1: head 1. Ties go to class 0.
std::vector<uint8_t> quantized_predict(const QuantizedNet &q, const Batch &batch);

EvalResult quantized_eval(const QuantizedNet &q, const Dataset &d, const std::vector<uint32_t> &rows);

/// Fraction of columns where the quantized and float nets predict the same bits.
double argmax_agreement(const QuantizedNet &q, const FeedforwardNet &net, const Batch &batch);

}  // namespace ftdnd

#endif
