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

#ifndef CPMGOC_ECHO_TRAIN_HPP
#define CPMGOC_ECHO_TRAIN_HPP

#include <span>
#include <string>
#include <vector>

#include "cpmgoc/propagation.hpp"

namespace cpmgoc {

enum class InputAxis { x, y, z };
std::string to_string(InputAxis a);
InputAxis parse_input_axis(const std::string &s);
Vec3 unit_vector(InputAxis a);

/// How the initial magnetization is prepared from +z.
struct Excitation {
    enum class Kind { perfect, hard };
    Kind kind = Kind::perfect;
    double amplitude = angular(31250.0);  // rad/s, hard mode only
};

struct EchoTrainResult {
    int echoes = 0;
    InputAxis input_axis = InputAxis::y;
    std::vector<IsochromatPoint> points;
    /// [echo - 1][point], sign-corrected so ideal refocusing gives 1.
    std::vector<std::vector<double>> per_isochromat;
    std::vector<double> ensemble_average;
    /// Raw Bloch vectors at each echo center, [echo - 1][point].
    std::vector<std::vector<Vec3>> magnetization;
};

/// Echo k is read at the center of the k-th 2 tau interval, i.e. after k
/// half cycles F(tau) U F(tau). Each isochromat is evolved on its own and the
/// ensemble average is taken last.
EchoTrainResult simulate_train(const RefocusingPulse &p, double tau, const EnsembleDistribution &d,
                               InputAxis input_axis, int n_echoes, const Excitation &excitation = {});

/// Retained magnetization of a single (offset, scale) isochromat for a y input.
struct VisibilityRow {
    double delta_omega = 0.0;
    double omega1_scale = 1.0;
    std::vector<double> values;  // one per requested echo
};

std::vector<VisibilityRow> echo_visibility_sweep(const RefocusingPulse &p, double tau,
                                                 std::span<const double> offsets,
                                                 std::span<const double> rf_scales,
                                                 std::span<const int> echo_indices);

/// Largest deviation of the ensemble average from its tail mean, skipping
/// the first `skip` echoes.
double transient_amplitude(const std::vector<double> &ensemble_average, int skip = 0,
                           double tail_fraction = 0.25);

}  // namespace cpmgoc

#endif  // CPMGOC_ECHO_TRAIN_HPP
