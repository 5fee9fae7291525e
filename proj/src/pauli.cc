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

#include "ftdnd/pauli.h"

#include <bit>
#include <cctype>
#include <ostream>

namespace ftdnd {

namespace {

void require_same_size(size_t a, size_t b, const char *what) {
    if (a != b) {
        throw DimensionError(std::string(what) + ": size mismatch " + std::to_string(a) + " vs " + std::to_string(b));
    }
}

}  // namespace

BitVector::BitVector(size_t n) : n_(n), w_((n + 63) / 64, 0) {
}

BitVector BitVector::from_u64(size_t n, uint64_t value) {
    BitVector r(n);
    if (n == 0) {
        return r;
    }
    if (n < 64) {
        value &= (uint64_t{1} << n) - 1;
    }
    r.w_[0] = value;
    return r;
}

BitVector BitVector::from_string(std::string_view bits) {
    BitVector r(bits.size());
    for (size_t i = 0; i < bits.size(); i++) {
        if (bits[i] == '1') {
            r.set(i, true);
        } else if (bits[i] != '0') {
            throw ParseError("bit string contains '" + std::string(1, bits[i]) + "'");
        }
    }
    return r;
}

void BitVector::clear() {
    for (auto &w : w_) {
        w = 0;
    }
}

size_t BitVector::popcount() const {
    size_t c = 0;
    for (auto w : w_) {
        c += std::popcount(w);
    }
    return c;
}

bool BitVector::any() const {
    for (auto w : w_) {
        if (w) {
            return true;
        }
    }
    return false;
}

uint64_t BitVector::to_u64() const {
    return w_.empty() ? 0 : w_[0];
}

std::string BitVector::str() const {
    std::string s(n_, '0');
    for (size_t i = 0; i < n_; i++) {
        if (get(i)) {
            s[i] = '1';
        }
    }
    return s;
}

std::vector<size_t> BitVector::ones() const {
    std::vector<size_t> r;
    for (size_t k = 0; k < w_.size(); k++) {
        uint64_t w = w_[k];
        while (w) {
            r.push_back(k * 64 + std::countr_zero(w));
            w &= w - 1;
        }
    }
    return r;
}

BitVector &BitVector::operator^=(const BitVector &other) {
    require_same_size(n_, other.n_, "xor");
    for (size_t k = 0; k < w_.size(); k++) {
        w_[k] ^= other.w_[k];
    }
    return *this;
}

BitVector &BitVector::operator&=(const BitVector &other) {
    require_same_size(n_, other.n_, "and");
    for (size_t k = 0; k < w_.size(); k++) {
        w_[k] &= other.w_[k];
    }
    return *this;
}

BitVector &BitVector::operator|=(const BitVector &other) {
    require_same_size(n_, other.n_, "or");
    for (size_t k = 0; k < w_.size(); k++) {
        w_[k] |= other.w_[k];
    }
    return *this;
}

bool BitVector::lex_less(const BitVector &other) const {
    require_same_size(n_, other.n_, "compare");
    for (size_t k = 0; k < w_.size(); k++) {
        uint64_t d = w_[k] ^ other.w_[k];
        if (d) {
            // The lowest differing index decides; a 0 there is the smaller string.
            size_t i = std::countr_zero(d);
            return !((w_[k] >> i) & 1);
        }
    }
    return false;
}

BitVector operator^(BitVector a, const BitVector &b) {
    a ^= b;
    return a;
}

BitVector operator&(BitVector a, const BitVector &b) {
    a &= b;
    return a;
}

bool dot(const BitVector &a, const BitVector &b) {
    require_same_size(a.size(), b.size(), "dot");
    uint64_t acc = 0;
    for (size_t k = 0; k < a.num_words(); k++) {
        acc ^= a.words()[k] & b.words()[k];
    }
    return std::popcount(acc) & 1;
}

BitVector concat(const BitVector &a, const BitVector &b) {
    BitVector r(a.size() + b.size());
    for (size_t i : a.ones()) {
        r.set(i, true);
    }
    for (size_t i : b.ones()) {
        r.set(a.size() + i, true);
    }
    return r;
}

PauliOperator::PauliOperator(BitVector x_bits, BitVector z_bits) : x(std::move(x_bits)), z(std::move(z_bits)) {
    require_same_size(x.size(), z.size(), "pauli");
}

char PauliOperator::at(size_t q) const {
    return "IXZY"[x.get(q) | (z.get(q) << 1)];
}

void PauliOperator::set(size_t q, char pauli) {
    switch (pauli) {
        case 'I':
        case '_':
            x.set(q, false);
            z.set(q, false);
            break;
        case 'X':
            x.set(q, true);
            z.set(q, false);
            break;
        case 'Y':
            x.set(q, true);
            z.set(q, true);
            break;
        case 'Z':
            x.set(q, false);
            z.set(q, true);
            break;
        default:
            throw ParseError("invalid Pauli symbol '" + std::string(1, pauli) + "'");
    }
}

PauliOperator PauliOperator::single(size_t n, size_t q, char pauli) {
    PauliOperator p(n);
    p.set(q, pauli);
    return p;
}

PauliOperator PauliOperator::parse(std::string_view text, size_t n) {
    PauliOperator p(n);
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) {
            s.push_back(c);
        }
    }
    bool sparse = false;
    for (char c : s) {
        if (std::isdigit(static_cast<unsigned char>(c))) {
            sparse = true;
        }
    }
    if (!sparse) {
        if (s.size() == 1 && (s[0] == 'I' || s[0] == '_')) {
            return p;
        }
        if (s.size() != n) {
            throw ParseError("dense Pauli '" + s + "' has length " + std::to_string(s.size()) + ", expected " +
                             std::to_string(n));
        }
        for (size_t q = 0; q < n; q++) {
            p.set(q, s[q]);
        }
        return p;
    }
    size_t i = 0;
    while (i < s.size()) {
        char sym = s[i++];
        if (sym != 'I' && sym != 'X' && sym != 'Y' && sym != 'Z') {
            throw ParseError("invalid Pauli symbol '" + std::string(1, sym) + "' in '" + s + "'");
        }
        size_t j = i;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
            j++;
        }
        if (j == i) {
            throw ParseError("missing qubit index after '" + std::string(1, sym) + "' in '" + s + "'");
        }
        size_t idx = std::stoul(s.substr(i, j - i));
        if (idx < 1 || idx > n) {
            throw ParseError("qubit index " + std::to_string(idx) + " out of range 1.." + std::to_string(n));
        }
        i = j;
        PauliOperator term = single(n, idx - 1, sym);
        p *= term;
    }
    return p;
}

std::string PauliOperator::str() const {
    std::string out;
    for (size_t q = 0; q < n(); q++) {
        char c = at(q);
        if (c != 'I') {
            out.push_back(c);
            out += std::to_string(q + 1);
        }
    }
    return out.empty() ? "I" : out;
}

std::string PauliOperator::dense_str() const {
    std::string out(n(), 'I');
    for (size_t q = 0; q < n(); q++) {
        out[q] = at(q);
    }
    return out;
}

PauliOperator &PauliOperator::operator*=(const PauliOperator &other) {
    x ^= other.x;
    z ^= other.z;
    return *this;
}

PauliOperator multiply(const PauliOperator &a, const PauliOperator &b) {
    PauliOperator r = a;
    r *= b;
    return r;
}

bool commutes(const PauliOperator &a, const PauliOperator &b) {
    require_same_size(a.n(), b.n(), "commutes");
    return dot(a.x, b.z) == dot(a.z, b.x);
}

size_t weight(const PauliOperator &a) {
    size_t c = 0;
    for (size_t k = 0; k < a.x.num_words(); k++) {
        c += std::popcount(a.x.words()[k] | a.z.words()[k]);
    }
    return c;
}

std::ostream &operator<<(std::ostream &out, const PauliOperator &p) {
    return out << p.str();
}

std::ostream &operator<<(std::ostream &out, const BitVector &b) {
    return out << b.str();
}

}  // namespace ftdnd
