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

#ifndef FTDND_PERF_MODEL_H
#define FTDND_PERF_MODEL_H

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

namespace ftdnd {

/// Gate delays in ns.
struct DelayParams {
    double t_and = 0;
    double t_not = 0;
    double t_mult = 0;
    double t_add = 0;
    double t_max = 0;
    double gate_delay = 10;
};

/// ceil(log2(v + 1)): depth of a binary adder tree summing v + 1 terms.
unsigned adder_tree_depth(uint64_t v);

/// Critical-path delay of fixed-point inference with S input bits and the given hidden layer widths.
double t_tot(uint64_t S, const std::vector<uint64_t> &hidden, const DelayParams &d);

unsigned num_adders(uint64_t S, const std::vector<uint64_t> &hidden);
/// Time budget per adder: FTEC depth times gate delay over the number of serial adder stages.
double adder_leniency(uint64_t ftec_depth, uint64_t S, const std::vector<uint64_t> &hidden, double gate_delay = 10);

/// 2^syndrome_bits * bits_per_entry / 8.
boost::multiprecision::cpp_int inference_map_bytes(unsigned syndrome_bits, unsigned bits_per_entry = 1);
/// Three significant figures with an SI prefix up to E; larger values use exponent notation in EB
/// ("2.10 MB", "590 EB", "2.79e+24 EB").
std::string format_bytes(const boost::multiprecision::cpp_int &bytes);

struct NaiveCost {
    unsigned stages;      // ceil(log2(n - k)) tree levels to combine pure-error rows
    uint64_t xor_words;   // (n - k) rows of 2n bits in 64-bit words
};
NaiveCost naive_decode_cost(uint64_t n, uint64_t k);

struct TimingPreset {
    std::string protocol;
    uint64_t depth;  // FTEC circuit depth in gate steps
    uint64_t S;      // syndrome bits per error type fed to one head
};
/// Presets derived from the circuit builders: exRec depth, or rounds x cycle depth for the surface code.
std::vector<TimingPreset> timing_presets();

}  // namespace ftdnd

#endif
