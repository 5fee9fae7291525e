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

#ifndef FTDND_DATASET_H
#define FTDND_DATASET_H

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ftdnd/protocol.h"

namespace ftdnd {

struct DatasetMeta {
    std::string protocol;
    std::string code;
    double p = 0;
    std::string baseline;
    uint64_t seed = 0;
    uint64_t total_shots = 0;
    uint64_t kept = 0;
    uint64_t baseline_failures = 0;  // kept rows with a nonzero label
    uint32_t x_bits = 0;
    uint32_t z_bits = 0;
    bool operator==(const DatasetMeta &) const = default;
};

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Rows of (x syndrome bits, z syndrome bits, b1, b2, basis). Row bit k sits in byte k/8 at bit k%8:
/// x bits first, then z bits, then b1, b2 and the preparation basis (1 = |+>); the rest of the last
/// byte is zero.
class Dataset {
   public:
    Dataset() = default;
    Dataset(DatasetMeta meta);

    const DatasetMeta &meta() const {
        return meta_;
    }
    DatasetMeta &meta() {
        return meta_;
    }
    size_t size() const {
        return row_bytes_ ? rows_.size() / row_bytes_ : 0;
    }
    size_t row_bytes() const {
        return row_bytes_;
    }
    bool bit(size_t row, size_t k) const {
        return (rows_[row * row_bytes_ + k / 8] >> (k % 8)) & 1;
    }
    bool x(size_t row, size_t j) const {
        return bit(row, j);
    }
    bool z(size_t row, size_t j) const {
        return bit(row, meta_.x_bits + j);
    }
    /// Bit 0: b1 (logical X needed), bit 1: b2.
    uint8_t label(size_t row) const {
        size_t k = meta_.x_bits + meta_.z_bits;
        return (uint8_t)(bit(row, k) | bit(row, k + 1) << 1);
    }
    PrepBasis basis(size_t row) const {
        return bit(row, meta_.x_bits + meta_.z_bits + 2) ? PrepBasis::Plus : PrepBasis::Zero;
    }

    void append(const BitVector &x, const BitVector &z, uint8_t label, PrepBasis basis);
    void append_row(const uint8_t *row);
    const uint8_t *row(size_t i) const {
        return rows_.data() + i * row_bytes_;
    }

    void save(std::ostream &out) const;
    void save(const std::string &path) const;
    static Dataset load(std::istream &in);
    static Dataset load(const std::string &path);
    /// Header line, then one line per row: x0..,z0..,b1,b2,basis.
    void write_csv(std::ostream &out) const;

    bool operator==(const Dataset &) const = default;

   private:
    DatasetMeta meta_;
    size_t row_bytes_ = 0;
    std::vector<uint8_t> rows_;
};

struct GenerateOptions {
    uint64_t target = 2000000;
    uint64_t seed = 1;
    size_t workers = 1;
    uint64_t chunk = 1 << 14;
    uint64_t max_shots = uint64_t{1} << 40;
};

/// Simulates shots 0, 1, 2, ... of `seed` and keeps those whose syndrome or label is nonzero, until
/// `target` rows are kept. The output does not depend on the worker count.
Dataset generate_dataset(const ProtocolRunner &runner, double p, const GenerateOptions &opt);

struct Split {
    size_t start = 0;
    std::vector<uint32_t> train;
    std::vector<uint32_t> test;
};

/// train = floor(fraction * n) rows starting at a random index, wrapping around; test = the rest.
Split split_cyclic(size_t n, double train_fraction, uint64_t seed);
Split split_cyclic_at(size_t n, double train_fraction, size_t start);

}  // namespace ftdnd

#endif
