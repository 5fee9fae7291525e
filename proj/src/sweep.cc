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

#include "ftdnd/sweep.h"

#include <cmath>
#include <stdexcept>

#include "ftdnd/parallel.h"

namespace ftdnd {

uint64_t count_failures(const ProtocolRunner &runner, const ProtocolRunner::Noise &noise, uint64_t seed,
                        uint64_t first, uint64_t count) {
    uint64_t failures = 0;
    for (uint64_t s = first; s < first + count; s++) {
        failures += runner.sample(noise, seed, s).failure();
    }
    return failures;
}

SweepResult run_sweep(const ProtocolRunner &runner, const std::vector<double> &grid, const SweepOptions &opt) {
    if (grid.empty()) {
        throw std::invalid_argument("empty p grid");
    }
    if (opt.shots == 0 || opt.chunk == 0) {
        throw std::invalid_argument("sweep needs a positive shot count and chunk size");
    }
    int order = opt.order ? opt.order : (int)runner.code().t + 1;
    SweepResult res;
    for (size_t i = 0; i < grid.size(); i++) {
        auto noise = runner.noise(grid[i]);
        uint64_t seed = derive_seed(opt.seed, i);
        size_t chunks = (opt.shots + opt.chunk - 1) / opt.chunk;
        std::vector<uint64_t> fails(chunks);
        parallel_for(chunks, opt.workers, [&](size_t c) {
            uint64_t first = c * opt.chunk;
            fails[c] = count_failures(runner, noise, seed, first, std::min(opt.chunk, opt.shots - first));
        });
        SweepPoint pt;
        pt.p = grid[i];
        pt.shots = opt.shots;
        for (uint64_t f : fails) {
            pt.failures += f;
        }
        pt.p_l = (double)pt.failures / (double)pt.shots;
        pt.err = std::sqrt(pt.p_l * (1 - pt.p_l) / (double)pt.shots);
        pt.wilson = wilson_interval(pt.failures, pt.shots);
        res.points.push_back(pt);
    }
    std::vector<ThresholdPoint> fit_points;
    for (const auto &pt : res.points) {
        if (pt.failures > 0) {
            fit_points.push_back({pt.p, pt.p_l, pt.err});
        }
    }
    if (fit_points.size() < 3) {
        res.warning = "only " + std::to_string(fit_points.size()) + " grid points with failures; fit skipped";
        return res;
    }
    try {
        res.fit = fit_pseudothreshold(fit_points, order);
    } catch (const std::exception &e) {
        res.warning = e.what();
    }
    return res;
}

}  // namespace ftdnd
