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
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "ftdnd/parallel.h"

namespace ftdnd {

namespace {

constexpr const char *kMagic = "FTDND-DATASET 1";

size_t bytes_for(const DatasetMeta &m) {
    return (m.x_bits + m.z_bits + 3 + 7) / 8;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

Dataset::Dataset(DatasetMeta meta) : meta_(std::move(meta)), row_bytes_(bytes_for(meta_)) {
}

void Dataset::append(const BitVector &x, const BitVector &z, uint8_t label, PrepBasis basis) {
    if (x.size() != meta_.x_bits || z.size() != meta_.z_bits) {
        throw DimensionError("row has " + std::to_string(x.size()) + "+" + std::to_string(z.size()) +
                             " syndrome bits, dataset has " + std::to_string(meta_.x_bits) + "+" +
                             std::to_string(meta_.z_bits));
    }
    size_t base = rows_.size();
    rows_.resize(base + row_bytes_, 0);
    auto put = [&](size_t k, bool v) { rows_[base + k / 8] |= (uint8_t)v << (k % 8); };
    for (size_t j : x.ones()) {
        put(j, true);
    }
    for (size_t j : z.ones()) {
        put(meta_.x_bits + j, true);
    }
    size_t k = meta_.x_bits + meta_.z_bits;
    put(k, label & 1);
    put(k + 1, label & 2);
    put(k + 2, basis == PrepBasis::Plus);
}

void Dataset::append_row(const uint8_t *row) {
    rows_.insert(rows_.end(), row, row + row_bytes_);
}

void Dataset::save(std::ostream &out) const {
    out << kMagic << "\n"
        << "protocol: " << meta_.protocol << "\n"
        << "code: " << meta_.code << "\n"
        << "p: " << format_double(meta_.p) << "\n"
        << "baseline: " << meta_.baseline << "\n"
        << "seed: " << meta_.seed << "\n"
        << "total_shots: " << meta_.total_shots << "\n"
        << "kept: " << meta_.kept << "\n"
        << "baseline_failures: " << meta_.baseline_failures << "\n"
        << "x_bits: " << meta_.x_bits << "\n"
        << "z_bits: " << meta_.z_bits << "\n"
        << "row_bytes: " << row_bytes_ << "\n"
        << "rows: " << size() << "\n"
        << "end\n";
    out.write((const char *)rows_.data(), (std::streamsize)rows_.size());
}

void Dataset::save(const std::string &path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    save(out);
    if (!out) {
        throw std::runtime_error("write failed: " + path);
    }
}

Dataset Dataset::load(std::istream &in) {
    std::string line;
    if (!std::getline(in, line) || line != kMagic) {
        throw FormatError("not a dataset file (bad magic line)");
    }
    std::map<std::string, std::string> kv;
    while (std::getline(in, line) && line != "end") {
        auto colon = line.find(": ");
        if (colon == std::string::npos) {
            throw FormatError("bad header line '" + line + "'");
        }
        kv[line.substr(0, colon)] = line.substr(colon + 2);
    }
    if (line != "end") {
        throw FormatError("truncated dataset header");
    }
    auto need = [&](const std::string &key) -> const std::string & {
        auto it = kv.find(key);
        if (it == kv.end()) {
            throw FormatError("dataset header lacks '" + key + "'");
        }
        return it->second;
    };
    auto num = [&](const std::string &key) { return (uint64_t)std::stoull(need(key)); };
    DatasetMeta m;
    m.protocol = need("protocol");
    m.code = need("code");
    m.p = std::stod(need("p"));
    m.baseline = need("baseline");
    m.seed = num("seed");
    m.total_shots = num("total_shots");
    m.kept = num("kept");
    m.baseline_failures = num("baseline_failures");
    m.x_bits = (uint32_t)num("x_bits");
    m.z_bits = (uint32_t)num("z_bits");
    Dataset d(m);
    if (num("row_bytes") != d.row_bytes_) {
        throw FormatError("row_bytes does not match the bit counts");
    }
    uint64_t rows = num("rows");
    d.rows_.resize(rows * d.row_bytes_);
    in.read((char *)d.rows_.data(), (std::streamsize)d.rows_.size());
    if ((uint64_t)in.gcount() != d.rows_.size()) {
        throw FormatError("dataset truncated: expected " + std::to_string(rows) + " rows");
    }
    return d;
}

Dataset Dataset::load(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    return load(in);
}

void Dataset::write_csv(std::ostream &out) const {
    for (uint32_t j = 0; j < meta_.x_bits; j++) {
        out << "x" << j << ",";
    }
    for (uint32_t j = 0; j < meta_.z_bits; j++) {
        out << "z" << j << ",";
    }
    out << "b1,b2,basis\n";
    std::string line;
    for (size_t i = 0; i < size(); i++) {
        line.clear();
        for (size_t k = 0; k < meta_.x_bits + meta_.z_bits + 3; k++) {
            line += bit(i, k) ? '1' : '0';
            line += k + 1 < meta_.x_bits + meta_.z_bits + 3 ? ',' : '\n';
        }
        out << line;
    }
}

Dataset generate_dataset(const ProtocolRunner &runner, double p, const GenerateOptions &opt) {
    if (!(p > 0)) {
        throw std::invalid_argument("dataset generation needs p > 0: at p = 0 every shot is all-zero");
    }
    if (opt.target == 0 || opt.chunk == 0) {
        throw std::invalid_argument("dataset target and chunk size must be positive");
    }
    DatasetMeta meta;
    meta.protocol = runner.spec().id;
    meta.code = runner.code().name;
    meta.p = p;
    meta.baseline = baseline_name(runner.baseline());
    meta.seed = opt.seed;
    meta.x_bits = (uint32_t)runner.x_bits();
    meta.z_bits = (uint32_t)runner.z_bits();
    Dataset out(meta);
    auto noise = runner.noise(p);

    struct Chunk {
        Dataset rows;
        std::vector<uint64_t> shot;  // shot index of each kept row
    };
    size_t batch = 2 * resolve_workers(opt.workers);
    uint64_t next_shot = 0;
    while (out.size() < opt.target) {
        if (next_shot >= opt.max_shots) {
            throw std::runtime_error("kept " + std::to_string(out.size()) + " of " + std::to_string(opt.target) +
                                     " samples within " + std::to_string(opt.max_shots) + " shots");
        }
        std::vector<Chunk> chunks(batch, Chunk{Dataset(meta), {}});
        parallel_for(batch, opt.workers, [&](size_t c) {
            uint64_t first = next_shot + c * opt.chunk;
            for (uint64_t s = first; s < first + opt.chunk; s++) {
                ShotOutcome o = runner.sample(noise, opt.seed, s);
                if (o.labels || o.x_bits.any() || o.z_bits.any()) {
                    chunks[c].rows.append(o.x_bits, o.z_bits, o.labels, o.basis);
                    chunks[c].shot.push_back(s);
                }
            }
        });
        for (auto &c : chunks) {
            for (size_t i = 0; i < c.rows.size() && out.size() < opt.target; i++) {
                out.append_row(c.rows.row(i));
                out.meta().baseline_failures += c.rows.label(i) != 0;
                out.meta().total_shots = c.shot[i] + 1;
            }
        }
        next_shot += batch * opt.chunk;
    }
    out.meta().kept = out.size();
    return out;
}

Split split_cyclic_at(size_t n, double train_fraction, size_t start) {
    if (n == 0) {
        throw std::invalid_argument("cannot split an empty dataset");
    }
    if (!(train_fraction >= 0 && train_fraction <= 1)) {
        throw std::invalid_argument("train fraction must lie in [0, 1]");
    }
    Split s;
    s.start = start % n;
    size_t n_train = (size_t)std::floor(train_fraction * (double)n + 1e-9);
    for (size_t i = 0; i < n; i++) {
        uint32_t idx = (uint32_t)((s.start + i) % n);
        (i < n_train ? s.train : s.test).push_back(idx);
    }
    return s;
}

Split split_cyclic(size_t n, double train_fraction, uint64_t seed) {
    if (n == 0) {
        throw std::invalid_argument("cannot split an empty dataset");
    }
    ShotRng rng(seed, 0);
    return split_cyclic_at(n, train_fraction, rng.below((uint32_t)n));
}

}  // namespace ftdnd
