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

#ifndef FTDND_DECODERS_H
#define FTDND_DECODERS_H

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ftdnd/circuit.h"
#include "ftdnd/code.h"

namespace ftdnd {

/// A CSS code with n <= 32 in 32-bit masks: parity checks, logicals and pure errors.
struct PackedCode {
    explicit PackedCode(const StabilizerCode &code);
    size_t n;
    std::vector<uint32_t> hz;  // rows of H_Z (detect X)
    std::vector<uint32_t> hx;
    uint32_t logical_x;        // X support of X_L
    uint32_t logical_z;        // Z support of Z_L
    std::vector<uint32_t> pure_x;  // X support of the pure error of each Z-block bit
    std::vector<uint32_t> pure_z;  // Z support of the pure error of each X-block bit

    /// Syndrome as an integer, Z block in the low bits.
    uint64_t syndrome(uint32_t ex, uint32_t ez) const {
        uint64_t s = 0;
        for (size_t j = 0; j < hz.size(); j++) {
            s |= (uint64_t)(__builtin_popcount(hz[j] & ex) & 1) << j;
        }
        for (size_t j = 0; j < hx.size(); j++) {
            s |= (uint64_t)(__builtin_popcount(hx[j] & ez) & 1) << (hz.size() + j);
        }
        return s;
    }
    /// Class bits of a residual: 1 when it contains X_L, 2 when it contains Z_L.
    uint8_t logical_bits(uint32_t ex, uint32_t ez) const {
        return (uint8_t)((__builtin_popcount(ex & logical_z) & 1) | ((__builtin_popcount(ez & logical_x) & 1) << 1));
    }
    /// Naive decoder on packed syndromes.
    void naive(uint64_t s, uint32_t &rx, uint32_t &rz) const;
};

/// Thrown when a dense table would not fit in memory.
struct TableSizeError : std::length_error {
    using std::length_error::length_error;
};

/// Thrown when hook overwrites collide with a protected entry or with each other.
struct HookConflictError : std::logic_error {
    using std::logic_error::logic_error;
};

/// Dense syndrome-indexed recovery table; entries store the recovery packed as two 32-bit masks.
class LookupTable {
   public:
    static constexpr size_t kMaxCheckBits = 30;
    static constexpr size_t kMaxQubits = 32;

    LookupTable() = default;

    const std::string &code_name() const {
        return code_name_;
    }
    size_t n() const {
        return n_;
    }
    size_t num_checks() const {
        return num_checks_;
    }
    uint64_t size() const {
        return x_.size();
    }
    PauliOperator recovery(uint64_t index) const;
    PauliOperator decode(const Syndrome &s) const {
        return recovery(s.to_u64());
    }
    uint32_t x_mask(uint64_t index) const {
        return x_[index];
    }
    uint32_t z_mask(uint64_t index) const {
        return z_[index];
    }
    /// Logical class of entry * min-weight representative of the same syndrome.
    LogicalClass entry_class(uint64_t index) const {
        return {(cls_[index] & 1) != 0, (cls_[index] & 2) != 0};
    }
    size_t hook_entries() const {
        return hook_entries_;
    }

    void save(const std::string &path) const;
    static LookupTable load(const std::string &path);
    bool operator==(const LookupTable &) const = default;

   private:
    friend LookupTable build_lookup(const StabilizerCode &, const Circuit *, size_t);
    std::string code_name_;
    size_t n_ = 0;
    size_t num_checks_ = 0;
    std::vector<uint32_t> x_;
    std::vector<uint32_t> z_;
    std::vector<uint8_t> cls_;
    size_t hook_entries_ = 0;
};

/// Minimum-weight fill, then (when a syndrome-measurement cycle is given) every residual data error of
/// weight > t produced by at most `max_faults` faults in one cycle overwrites the entry of its syndrome.
/// max_faults defaults to the code's t.
LookupTable build_lookup(const StabilizerCode &code, const Circuit *measurement_cycle = nullptr,
                         size_t max_faults = SIZE_MAX);

/// Product of the pure errors of the set syndrome bits.
PauliOperator naive_decode(const StabilizerCode &code, const Syndrome &s);

/// Majority of three syndromes, else the third.
Syndrome ft_decode_d3(const Syndrome &s1, const Syndrome &s2, const Syndrome &s3);

struct ProtocolState {
    size_t t = 1;
    size_t n_diff = 0;
    std::optional<Syndrome> last_syndrome;
    size_t repeat_count = 0;
    bool increased_last_round = false;
    bool pending_final = false;  // n_diff reached t: the next syndrome is used
    size_t rounds = 0;
};

enum class Decision { MeasureAgain, DecodeNow };

/// Feeds one syndrome into the repeated-measurement protocol. On DecodeNow, decode with `s`.
Decision ft_protocol_step(ProtocolState &state, const Syndrome &s);

struct ThresholdPoint {
    double p;
    double p_l;
    double err;  // standard error of p_l
};

struct ThresholdFit {
    double a;
    double p_th;
};

/// Least squares fit of p_L = a * p^order (weighted by 1/err^2 when every err is positive);
/// the pseudo-threshold solves a * p^order = p.
ThresholdFit fit_pseudothreshold(const std::vector<ThresholdPoint> &points, int order);

struct Interval {
    double lo;
    double hi;
};
/// Wilson score interval for k successes out of n.
Interval wilson_interval(uint64_t k, uint64_t n, double z = 1.959963984540054);

}  // namespace ftdnd

#endif
