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

#ifndef CPMGOC_GRAPE_HPP
#define CPMGOC_GRAPE_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cpmgoc/propagation.hpp"

namespace cpmgoc {

struct LineSearchConfig {
    double growth = 1.5;
    double shrink = 0.5;
    int max_probes = 20;
};

/// Gradient-ascent settings. step_size_init is the update step for controls
/// measured in units of a_max, so it is dimensionless.
struct GrapeConfig {
    double step_size_init = 0.05;
    LineSearchConfig line_search;
    double improvement_threshold = 1e-7;
    /// Consecutive sub-threshold iterations before declaring a stall.
    int stall_patience = 3;
    int max_iterations = 2000;
    /// 1.0 means no target: runs end by stall or iteration budget.
    double target_fidelity = 1.0;

    /// Throws std::invalid_argument when the invariants do not hold.
    void validate() const;
};

enum class Termination { target_reached, stalled, max_iterations };
std::string to_string(Termination t);

struct TraceRecord {
    int iter = 0;
    double fidelity = 0.0;
    double step_size = 0.0;
};

struct GrapeReport {
    PulseWaveform final_waveform;
    std::vector<double> fidelity_history;  // entry 0 is the starting fidelity
    std::vector<TraceRecord> trace;
    int iterations = 0;
    Termination termination = Termination::max_iterations;

    double final_fidelity() const { return fidelity_history.back(); }
};

/// Raised when gradients stop being finite.
class NumericalFailure : public std::runtime_error {
  public:
    explicit NumericalFailure(int iteration);
    int iteration() const { return iteration_; }

  private:
    int iteration_;
};

/// Fidelity and first-order-in-dt gradients with respect to the Cartesian
/// controls (u1(j), u2(j)) in s/rad.
struct FidelityGradient {
    double fidelity = 0.0;
    std::vector<std::array<double, 2>> grads;
};

/// Single isochromat. Guard delays are folded into the boundary products.
FidelityGradient fidelity_and_gradients(const PulseWaveform &p, const IsochromatPoint &point,
                                        const Su2Operator &target);

/// Weighted average of fidelity_and_gradients over a distribution.
FidelityGradient average_fidelity_and_gradients(const PulseWaveform &p, const EnsembleDistribution &d,
                                                const Su2Operator &target);

/// Weighted average fidelity of a waveform over a distribution.
double average_fidelity(const PulseWaveform &p, const EnsembleDistribution &d, const Su2Operator &target);

/// Gradient ascent with a growing/shrinking line search and amplitude
/// clipping after every update. Throws std::invalid_argument when p0 exceeds
/// its amplitude cap and NumericalFailure on non-finite gradients.
GrapeReport grape_ascend(const PulseWaveform &p0, const EnsembleDistribution &d, const Su2Operator &target,
                         const GrapeConfig &cfg);

/// Sorted final fidelities of n_starts independent runs from seeded random
/// initial guesses.
std::vector<double> multistart_histogram(const WaveformShape &shape, const EnsembleDistribution &d,
                                         const Su2Operator &target, const GrapeConfig &cfg, int n_starts,
                                         std::uint64_t seed);

}  // namespace cpmgoc

#endif  // CPMGOC_GRAPE_HPP
