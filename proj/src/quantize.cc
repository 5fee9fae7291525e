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

#include "ftdnd/quantize.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace ftdnd {

namespace {

constexpr const char *kQnetMagic = "FTDND-QNET 1";

uint32_t ceil_log2(uint64_t v) {
    uint32_t r = 0;
    while ((uint64_t{1} << r) < v) {
        r++;
    }
    return r;
}

// Integer activations of one layer for every column of `in` (rows x batch, row-major per column).
// Returns the pre-shift accumulators in `acc` when asked.
std::vector<int64_t> layer_apply(const QuantLayer &L, const std::vector<int64_t> &in, size_t batch, bool relu,
                                 int64_t lo, int64_t hi, std::vector<int64_t> *acc, size_t *saturated) {
    std::vector<int64_t> out(L.rows * batch);
    for (size_t j = 0; j < batch; j++) {
        const int64_t *a = in.data() + j * L.cols;
        for (uint32_t r = 0; r < L.rows; r++) {
            int64_t s = (int64_t)L.b[r] << L.bias_shift;
            const int32_t *w = L.w.data() + (size_t)r * L.cols;
            for (uint32_t c = 0; c < L.cols; c++) {
                s += (int64_t)w[c] * a[c];
            }
            if (acc) {
                (*acc)[j * L.rows + r] = s;
            }
            int64_t v = s >> L.shift;
            if (v < lo || v > hi) {
                if (saturated) {
                    ++*saturated;
                }
                v = std::clamp(v, lo, hi);
            }
            out[j * L.rows + r] = relu ? std::max<int64_t>(v, 0) : v;
        }
    }
    return out;
}

std::vector<int64_t> batch_inputs(const Batch &b, int h) {
    const Matrix &m = b.in[h];
    std::vector<int64_t> out((size_t)m.size());
    for (Eigen::Index j = 0; j < m.cols(); j++) {
        for (Eigen::Index i = 0; i < m.rows(); i++) {
            out[(size_t)(j * m.rows() + i)] = m(i, j) != 0 ? 1 : 0;
        }
    }
    return out;
}

std::array<std::vector<int64_t>, 2> run_heads(const QuantizedNet &q, const Batch &b) {
    std::array<std::vector<int64_t>, 2> out;
    for (int h = 0; h < 2; h++) {
        std::vector<int64_t> a = batch_inputs(b, h);
        const auto &layers = q.heads[h];
        for (size_t l = 0; l < layers.size(); l++) {
            a = layer_apply(layers[l], a, b.size(), l + 1 < layers.size(), q.lo(), q.hi(), nullptr, nullptr);
        }
        out[h] = std::move(a);
    }
    return out;
}

void put_u32(std::ostream &out, uint32_t v) {
    unsigned char b[4] = {(unsigned char)v, (unsigned char)(v >> 8), (unsigned char)(v >> 16),
                          (unsigned char)(v >> 24)};
    out.write((const char *)b, 4);
}

uint32_t get_u32(std::istream &in) {
    unsigned char b[4];
    if (!in.read((char *)b, 4)) {
        throw FormatError("quantized model truncated");
    }
    return (uint32_t)b[0] | (uint32_t)b[1] << 8 | (uint32_t)b[2] << 16 | (uint32_t)b[3] << 24;
}

}  // namespace

uint32_t default_shift(size_t fan_in) {
    uint32_t c = ceil_log2(fan_in + 1);
    return c > 0 ? c - 1 : 0;
}

QuantizedNet quantize(const FeedforwardNet &net, int k, const Batch *calibration) {
    if (k < 2) {
        throw std::invalid_argument("quantization needs k >= 2");
    }
    QuantizedNet q;
    q.k = k;
    q.shape = net.shape;
    const double top = std::ldexp(1.0, k - 1);
    for (int h = 0; h < 2; h++) {
        const Head &head = net.heads[h];
        double in_scale = 1;  // integer inputs = in_scale * float activations
        std::vector<int64_t> acts;
        if (calibration) {
            acts = batch_inputs(*calibration, h);
        }
        for (size_t l = 0; l < head.w.size(); l++) {
            const Matrix &W = head.w[l];
            const Vector &B = head.b[l];
            if ((uint32_t)(2 * k) + ceil_log2((uint64_t)W.cols() + 1) > 63) {
                throw std::invalid_argument("k = " + std::to_string(k) + " overflows 64-bit accumulators at fan-in " +
                                            std::to_string(W.cols()));
            }
            double wmax = W.size() ? W.cwiseAbs().maxCoeff() : 0.0;
            double scale = wmax > 0 ? top / wmax : 1.0;
            QuantLayer L;
            L.rows = (uint32_t)W.rows();
            L.cols = (uint32_t)W.cols();
            L.scale = scale * in_scale;
            double bmax = B.size() ? L.scale * B.cwiseAbs().maxCoeff() : 0.0;
            while (bmax > top && L.bias_shift < (uint32_t)(62 - k)) {
                bmax /= 2;
                L.bias_shift++;
            }
            const double bias_scale = L.scale / std::ldexp(1.0, (int)L.bias_shift);
            auto qz = [&](double v) {
                double r = std::nearbyint(v);
                return (int32_t)std::clamp<double>(r, (double)q.lo(), (double)q.hi());
            };
            for (Eigen::Index r = 0; r < W.rows(); r++) {
                for (Eigen::Index c = 0; c < W.cols(); c++) {
                    L.w.push_back(qz(scale * W(r, c)));
                }
                L.b.push_back(qz(bias_scale * B[r]));
            }
            L.shift = default_shift(W.cols());
            bool hidden = l + 1 < head.w.size();
            if (calibration) {
                size_t n = calibration->size();
                std::vector<int64_t> acc(L.rows * n);
                layer_apply(L, acts, n, hidden, q.lo(), q.hi(), &acc, nullptr);
                // smallest shift >= default with at most 0.1% saturated outputs
                for (;; L.shift++) {
                    size_t sat = 0;
                    for (int64_t s : acc) {
                        int64_t v = s >> L.shift;
                        sat += v < q.lo() || v > q.hi();
                    }
                    if (sat * 1000 <= acc.size() || L.shift >= 62) {
                        break;
                    }
                }
                acts = layer_apply(L, acts, n, hidden, q.lo(), q.hi(), nullptr, nullptr);
            }
            in_scale = L.scale / std::ldexp(1.0, (int)L.shift);
            q.heads[h].push_back(std::move(L));
        }
    }
    return q;
}

std::array<std::vector<int64_t>, 2> quantized_forward(const QuantizedNet &q, const BitVector &x, const BitVector &z) {
    if (x.size() != q.shape.x_in || z.size() != q.shape.z_in) {
        throw DimensionError("input bits do not match the quantized network shape");
    }
    DatasetMeta m;
    m.x_bits = (uint32_t)x.size();
    m.z_bits = (uint32_t)z.size();
    m.kept = 1;
    Dataset d(m);
    d.append(x, z, 0, PrepBasis::Zero);
    uint32_t row = 0;
    return run_heads(q, make_batch(d, q.shape, &row, 1));
}

std::vector<uint8_t> quantized_predict(const QuantizedNet &q, const Batch &batch) {
    auto logits = run_heads(q, batch);
    std::vector<uint8_t> out(batch.size(), 0);
    for (int h = 0; h < 2; h++) {
        for (size_t j = 0; j < batch.size(); j++) {
            out[j] |= (uint8_t)(logits[h][2 * j + 1] > logits[h][2 * j]) << h;
        }
    }
    return out;
}

EvalResult quantized_eval(const QuantizedNet &q, const Dataset &d, const std::vector<uint32_t> &rows) {
    std::vector<uint8_t> pred(d.size(), 0);
    constexpr size_t kChunk = 4096;
    for (size_t first = 0; first < rows.size(); first += kChunk) {
        size_t count = std::min(kChunk, rows.size() - first);
        Batch b = make_batch(d, q.shape, rows.data() + first, count);
        auto p = quantized_predict(q, b);
        for (size_t j = 0; j < count; j++) {
            pred[rows[first + j]] = p[j];
        }
    }
    return evaluate([&](const Dataset &, size_t i) { return pred[i]; }, d, rows);
}

double argmax_agreement(const QuantizedNet &q, const FeedforwardNet &net, const Batch &batch) {
    auto qp = quantized_predict(q, batch);
    auto logits = forward(net, batch.in);
    size_t same = 0;
    for (size_t j = 0; j < batch.size(); j++) {
        uint8_t fp = 0;
        for (int h = 0; h < 2; h++) {
            fp |= (uint8_t)(logits[h](1, (Eigen::Index)j) > logits[h](0, (Eigen::Index)j)) << h;
        }
        same += fp == qp[j];
    }
    return batch.size() ? (double)same / (double)batch.size() : 1.0;
}

void QuantizedNet::save(std::ostream &out) const {
    out << kQnetMagic << "\n"
        << "k: " << k << "\n"
        << "x_in: " << shape.x_in << "\n"
        << "z_in: " << shape.z_in << "\n"
        << "hidden:";
    for (size_t h : shape.hidden) {
        out << " " << h;
    }
    out << "\nfeed_both: " << (shape.feed_both ? 1 : 0) << "\n";
    for (int h = 0; h < 2; h++) {
        out << "shifts" << h << ":";
        for (const auto &L : heads[h]) {
            out << " " << L.shift << "/" << L.bias_shift;
        }
        out << "\n";
    }
    out << "end\n";
    for (const auto &layers : heads) {
        for (const auto &L : layers) {
            put_u32(out, L.rows);
            put_u32(out, L.cols);
            uint64_t bits;
            std::memcpy(&bits, &L.scale, 8);
            put_u32(out, (uint32_t)bits);
            put_u32(out, (uint32_t)(bits >> 32));
            for (int32_t v : L.w) {
                put_u32(out, (uint32_t)v);
            }
            for (int32_t v : L.b) {
                put_u32(out, (uint32_t)v);
            }
        }
    }
}

void QuantizedNet::save(const std::string &path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    save(out);
}

QuantizedNet QuantizedNet::load(std::istream &in) {
    std::string line;
    if (!std::getline(in, line) || line != kQnetMagic) {
        throw FormatError("not a quantized model file (bad magic line)");
    }
    std::map<std::string, std::string> kv;
    while (std::getline(in, line) && line != "end") {
        auto colon = line.find(':');
        if (colon == std::string::npos) {
            throw FormatError("bad header line '" + line + "'");
        }
        kv[line.substr(0, colon)] = line.substr(colon + 1);
    }
    for (const char *key : {"k", "x_in", "z_in", "hidden", "feed_both", "shifts0", "shifts1"}) {
        if (!kv.count(key)) {
            throw FormatError(std::string("quantized model header lacks '") + key + "'");
        }
    }
    QuantizedNet q;
    q.k = std::stoi(kv["k"]);
    q.shape.x_in = std::stoul(kv["x_in"]);
    q.shape.z_in = std::stoul(kv["z_in"]);
    q.shape.feed_both = std::stoi(kv["feed_both"]) != 0;
    std::istringstream hs(kv["hidden"]);
    for (size_t v; hs >> v;) {
        q.shape.hidden.push_back(v);
    }
    for (int h = 0; h < 2; h++) {
        std::istringstream ss(kv["shifts" + std::to_string(h)]);
        size_t in_size = q.shape.head_inputs(h);
        std::vector<size_t> sizes = q.shape.hidden;
        sizes.push_back(2);
        for (size_t out : sizes) {
            QuantLayer L;
            char slash = 0;
            if (!(ss >> L.shift >> slash >> L.bias_shift) || slash != '/') {
                throw FormatError("quantized model lists too few shifts");
            }
            L.rows = get_u32(in);
            L.cols = get_u32(in);
            if (L.rows != out || L.cols != in_size) {
                throw FormatError("layer shape in quantized model does not match its header");
            }
            uint64_t lo = get_u32(in), hi = get_u32(in);
            uint64_t bits = lo | hi << 32;
            std::memcpy(&L.scale, &bits, 8);
            for (size_t i = 0; i < (size_t)L.rows * L.cols; i++) {
                L.w.push_back((int32_t)get_u32(in));
            }
            for (size_t i = 0; i < L.rows; i++) {
                L.b.push_back((int32_t)get_u32(in));
            }
            q.heads[h].push_back(std::move(L));
            in_size = out;
        }
    }
    return q;
}

QuantizedNet QuantizedNet::load(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    return load(in);
}

}  // namespace ftdnd
