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

#ifndef CPMGOC_LADDER_HPP
#define CPMGOC_LADDER_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cpmgoc/grape.hpp"

namespace cpmgoc {

struct LadderRung {
    int index = 0;
    double half_bandwidth = 0.0;  // rad/s
    EnsembleDistribution distribution;
    PulseWaveform waveform;
    double initial_fidelity = 0.0;  // warm start evaluated on this rung's distribution
    double avg_fidelity = 0.0;
    int iterations = 0;
    Termination termination = Termination::max_iterations;
};

enum class LadderStop { fidelity_below_stop, rung_budget };
std::string to_string(LadderStop s);

struct LadderResult {
    std::vector<LadderRung> rungs;
    LadderStop stop_reason = LadderStop::rung_budget;
};

struct LadderOptions {
    double stop_fidelity = 0.9;
    GrapeConfig grape = default_rung_config();
    double jitter_fraction = 0.05;
    int max_rungs = 100;
    std::uint64_t seed = 0;
    std::vector<double> rf_scales{1.0};
    /// Called after each completed rung.
    std::function<void(const LadderRung &)> on_rung;

    static GrapeConfig default_rung_config() {
        GrapeConfig cfg;
        cfg.max_iterations = 300;
        return cfg;
    }
};

/// Rung 0 is the single on-resonance point; rung m covers +-m*delta with
/// offsets jittered from mix_seed(seed, m) and starts from rung m-1's
/// waveform. The rung that drops below stop_fidelity is kept as the last
/// entry.
LadderResult run_ladder(const PulseWaveform &p0, double delta, const LadderOptions &options);
LadderResult run_ladder(const PulseWaveform &p0, double delta, double stop_fidelity, const GrapeConfig &cfg,
                        std::uint64_t seed);

struct RfiResult {
    EnsembleDistribution distribution;
    PulseWaveform waveform;
    double avg_fidelity = 0.0;
    GrapeReport report;
};

/// Crosses the rung's offsets with rf_scales (uniform weights) and
/// re-optimizes from the rung waveform. rf_scales must contain 1.0.
RfiResult add_rfi_and_reoptimize(const LadderRung &rung, const std::vector<double> &rf_scales,
                                 const GrapeConfig &cfg);

/// Index of the last rung with avg_fidelity >= fidelity_floor.
std::size_t select_best_rung(const LadderResult &l, double fidelity_floor = 0.99);

/// Rung nearest a requested half bandwidth.
std::size_t rung_for_half_bandwidth(const LadderResult &l, double half_bandwidth);

}  // namespace cpmgoc

#endif  // CPMGOC_LADDER_HPP
