// Copyright 2026 The cpmgoc Authors.
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

#include "cpmgoc/ladder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cpmgoc/objective.hpp"
#include "cpmgoc/random.hpp"

namespace cpmgoc {

std::string to_string(LadderStop s) {
    return s == LadderStop::fidelity_below_stop ? "fidelity_below_stop" : "rung_budget";
}

LadderResult run_ladder(const PulseWaveform &p0, double delta, const LadderOptions &options) {
    if (!(delta > 0.0)) {
        throw std::invalid_argument("offset spacing must be > 0");
    }
    if (options.max_rungs < 1) {
        throw std::invalid_argument("max_rungs must be >= 1");
    }
    options.grape.validate();

    const Su2Operator target = pi_y_target();
    LadderResult result;
    PulseWaveform current = p0;
    for (int m = 0; m < options.max_rungs; ++m) {
        LadderRung rung;
        rung.index = m;
        rung.half_bandwidth = m * delta;
        rung.distribution = uniform_ladder_distribution(rung.half_bandwidth, delta, options.rf_scales,
                                                        options.jitter_fraction,
                                                        mix_seed(options.seed, static_cast<std::uint64_t>(m)));
        GrapeReport report = grape_ascend(current, rung.distribution, target, options.grape);
        rung.initial_fidelity = report.fidelity_history.front();
        rung.avg_fidelity = report.final_fidelity();
        rung.iterations = report.iterations;
        rung.termination = report.termination;
        rung.waveform = std::move(report.final_waveform);
        current = rung.waveform;
        result.rungs.push_back(std::move(rung));
        if (options.on_rung) {
            options.on_rung(result.rungs.back());
        }
        if (result.rungs.back().avg_fidelity < options.stop_fidelity) {
            result.stop_reason = LadderStop::fidelity_below_stop;
            return result;
        }
    }
    result.stop_reason = LadderStop::rung_budget;
    return result;
}

LadderResult run_ladder(const PulseWaveform &p0, double delta, double stop_fidelity, const GrapeConfig &cfg,
                        std::uint64_t seed) {
    LadderOptions options;
    options.stop_fidelity = stop_fidelity;
    options.grape = cfg;
    options.seed = seed;
    return run_ladder(p0, delta, options);
}

RfiResult add_rfi_and_reoptimize(const LadderRung &rung, const std::vector<double> &rf_scales,
                                 const GrapeConfig &cfg) {
    if (rf_scales.empty() || std::find(rf_scales.begin(), rf_scales.end(), 1.0) == rf_scales.end()) {
        throw std::invalid_argument("rf scales must be nonempty and contain 1.0");
    }
    std::vector<double> offsets = rung.distribution.offsets();
    RfiResult out;
    out.distribution = EnsembleDistribution::grid(offsets, rf_scales);
    out.report = grape_ascend(rung.waveform, out.distribution, pi_y_target(), cfg);
    out.waveform = out.report.final_waveform;
    out.avg_fidelity = out.report.final_fidelity();
    return out;
}

std::size_t select_best_rung(const LadderResult &l, double fidelity_floor) {
    if (l.rungs.empty()) {
        throw std::invalid_argument("ladder has no rungs");
    }
    for (std::size_t i = l.rungs.size(); i-- > 0;) {
        if (l.rungs[i].avg_fidelity >= fidelity_floor) {
            return i;
        }
    }
    throw std::runtime_error("no rung reaches the fidelity floor");
}

std::size_t rung_for_half_bandwidth(const LadderResult &l, double half_bandwidth) {
    if (l.rungs.empty()) {
        throw std::invalid_argument("ladder has no rungs");
    }
    auto it = std::min_element(l.rungs.begin(), l.rungs.end(), [&](const auto &a, const auto &b) {
        return std::abs(a.half_bandwidth - half_bandwidth) < std::abs(b.half_bandwidth - half_bandwidth);
    });
    return static_cast<std::size_t>(it - l.rungs.begin());
}

}  // namespace cpmgoc
