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

#ifndef FTDND_NOISE_H
#define FTDND_NOISE_H

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ftdnd/circuit.h"

namespace ftdnd {

struct DepolarizingParams {
    double p = 0;
    /// Throws std::invalid_argument unless 0 <= p <= 1.
    void validate() const;
    /// Fault probability of a location of this kind.
    double rate(Op op) const;
};

/// Pauli codes used in payloads: bit 0 is X, bit 1 is Z (so 3 is Y).
/// CNOT payload 1..15: control Pauli in bits 0-1, target Pauli in bits 2-3.
/// Idle payload 1..3. Prep and measurement payload is always 1 (basis or outcome flip).
struct FaultEvent {
    uint32_t step;
    uint32_t index;  // position of the location within its step
    uint8_t payload;
    bool operator==(const FaultEvent &) const = default;
    bool operator<(const FaultEvent &o) const {
        return step != o.step ? step < o.step : index < o.index;
    }
};

/// Philox4x32-10 (Salmon et al., Random123).
std::array<uint32_t, 4> philox4x32_10(std::array<uint32_t, 4> counter, std::array<uint32_t, 2> key);

/// Random stream for one shot: key = seed, counter = (shot index, draw index). Draws are consumed
/// sequentially, so the stream only depends on (seed, shot).
class ShotRng {
   public:
    ShotRng(uint64_t seed, uint64_t shot);
    uint64_t next_u64();
    /// Uniform on (0, 1].
    double uniform_open0();
    /// Uniform integer in [0, n).
    uint32_t below(uint32_t n);

   private:
    std::array<uint32_t, 2> key_;
    uint64_t shot_;
    uint64_t block_ = 0;
    std::array<uint32_t, 4> buf_{};
    int used_ = 4;
};

/// Fault sampler for one circuit: locations are grouped by fault rate and faulty locations are found by
/// geometric skipping, so the cost per shot scales with the number of faults.
class FaultSampler {
   public:
    FaultSampler(const Circuit &circuit, const DepolarizingParams &params);
    /// Appends the faults of one shot to `out`, sorted by (step, index).
    void sample(ShotRng &rng, std::vector<FaultEvent> &out) const;

   private:
    struct RateClass {
        double rate;
        double log1m;  // log(1 - rate)
        std::vector<FaultEvent> locations;  // payload holds the alphabet size
    };
    std::vector<RateClass> classes_;
};

std::vector<FaultEvent> sample_faults(const Circuit &circuit, const DepolarizingParams &params, uint64_t seed,
                                      uint64_t shot = 0);

/// Number of fault sets with at most `max_faults` faulty locations (distinct locations, every payload).
uint64_t count_fault_sets(const Circuit &circuit, size_t max_faults);
/// Calls `fn` once per fault set of size <= max_faults, smallest sets first.
void for_each_fault_set(const Circuit &circuit, size_t max_faults,
                        const std::function<void(const std::vector<FaultEvent> &)> &fn);

/// One line per event: "<step> <op> <qubits> <payload>", e.g. "3 CNOT 4 11 XZ".
std::string format_fault_trace(const Circuit &circuit, const std::vector<FaultEvent> &faults);

}  // namespace ftdnd

#endif
