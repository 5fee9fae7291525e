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

#ifndef FTDND_PAULI_H
#define FTDND_PAULI_H

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ftdnd {

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ParseError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Packed bit-vector. Bit i lives in word i/64 at position i%64; padding bits are kept zero.
class BitVector {
   public:
    BitVector() = default;
    explicit BitVector(size_t n);
    static BitVector from_u64(size_t n, uint64_t value);
    static BitVector from_string(std::string_view bits);

    size_t size() const {
        return n_;
    }
    size_t num_words() const {
        return w_.size();
    }
    uint64_t *words() {
        return w_.data();
    }
    const uint64_t *words() const {
        return w_.data();
    }

    bool get(size_t i) const {
        return (w_[i >> 6] >> (i & 63)) & 1;
    }
    void set(size_t i, bool v) {
        uint64_t m = uint64_t{1} << (i & 63);
        if (v) {
            w_[i >> 6] |= m;
        } else {
            w_[i >> 6] &= ~m;
        }
    }
    void flip(size_t i) {
        w_[i >> 6] ^= uint64_t{1} << (i & 63);
    }
    void clear();

    size_t popcount() const;
    bool any() const;
    bool none() const {
        return !any();
    }
    /// Value of the first min(64, n) bits as an integer (bit 0 is the least significant).
    uint64_t to_u64() const;
    /// '0'/'1' characters, bit 0 first.
    std::string str() const;
    /// Indices of set bits in increasing order.
    std::vector<size_t> ones() const;

    BitVector &operator^=(const BitVector &other);
    BitVector &operator&=(const BitVector &other);
    BitVector &operator|=(const BitVector &other);
    bool operator==(const BitVector &other) const = default;
    /// Lexicographic order of str(): bit 0 is the most significant character.
    bool lex_less(const BitVector &other) const;

   private:
    size_t n_ = 0;
    std::vector<uint64_t> w_;
};

BitVector operator^(BitVector a, const BitVector &b);
BitVector operator&(BitVector a, const BitVector &b);
/// Parity of the AND of two vectors.
bool dot(const BitVector &a, const BitVector &b);
/// Concatenation a‖b.
BitVector concat(const BitVector &a, const BitVector &b);

/// Phaseless n-qubit Pauli in binary symplectic form.
struct PauliOperator {
    BitVector x;
    BitVector z;

    PauliOperator() = default;
    explicit PauliOperator(size_t n) : x(n), z(n) {
    }
    PauliOperator(BitVector x_bits, BitVector z_bits);

    size_t n() const {
        return x.size();
    }
    bool is_identity() const {
        return x.none() && z.none();
    }

    /// 'I', 'X', 'Y' or 'Z' on qubit q (0-based).
    char at(size_t q) const;
    void set(size_t q, char pauli);

    /// Accepts dense text ("IXYIZ", length n) or sparse 1-based text ("X4X5Y7").
    static PauliOperator parse(std::string_view text, size_t n);
    static PauliOperator single(size_t n, size_t q, char pauli);
    /// Sparse 1-based form, "I" for the identity.
    std::string str() const;
    std::string dense_str() const;

    PauliOperator &operator*=(const PauliOperator &other);
    bool operator==(const PauliOperator &other) const = default;
};

PauliOperator multiply(const PauliOperator &a, const PauliOperator &b);
bool commutes(const PauliOperator &a, const PauliOperator &b);
size_t weight(const PauliOperator &a);

std::ostream &operator<<(std::ostream &out, const PauliOperator &p);
std::ostream &operator<<(std::ostream &out, const BitVector &b);

}  // namespace ftdnd

#endif
