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

#ifndef FTDND_SWEEP_H
#define FTDND_SWEEP_H

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ftdnd/decoders.h"
#include "ftdnd/protocol.h"

namespace ftdnd {

struct SweepPoint {
    double p = 0;
    uint64_t shots = 0;
    uint64_t failures = 0;
    double p_l = 0;
    double err = 0;  // binomial standard error
    Interval wilson{0, 0};
};

struct SweepResult {
    std::vector<SweepPoint> points;
    std::optional<ThresholdFit> fit;
    std::string warning;  // why the fit was skipped
};

struct SweepOptions {
    uint64_t shots = 1000000;
    uint64_t seed = 1;
    size_t workers = 1;
    int order = 0;  // fit order; 0 means t + 1
    uint64_t chunk = 1 << 14;
};

/// Monte Carlo logical failure rate at every p, then the monomial fit. Point i uses shots
/// [0, shots) of the sub-stream derive_seed(seed, i), so results do not depend on the worker count.
SweepResult run_sweep(const ProtocolRunner &runner, const std::vector<double> &grid, const SweepOptions &opt);

/// Failures over shots [first, first + count) of one seed.
uint64_t count_failures(const ProtocolRunner &runner, const ProtocolRunner::Noise &noise, uint64_t seed,
                        uint64_t first, uint64_t count);

}  // namespace ftdnd

#endif
