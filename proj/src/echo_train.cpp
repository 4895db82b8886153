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

#include "cpmgoc/echo_train.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cpmgoc/parallel.hpp"

namespace cpmgoc {

namespace {

int axis_index(InputAxis a) { return a == InputAxis::x ? 0 : (a == InputAxis::y ? 1 : 2); }

// Ideal y refocusing flips x and z at every echo and keeps y.
double echo_sign(InputAxis a, int echo) {
    if (a == InputAxis::y) {
        return 1.0;
    }
    return echo % 2 == 0 ? 1.0 : -1.0;
}

Vec3 prepare(InputAxis axis, const Excitation &ex, double delta_omega, double omega1_scale) {
    if (ex.kind == Excitation::Kind::perfect || axis == InputAxis::z) {
        return unit_vector(axis);
    }
    // Rotation by -pi/2 about x sends +z to +y; by +pi/2 about y sends +z to +x.
    double phase = axis == InputAxis::y ? std::numbers::pi : std::numbers::pi / 2;
    PulseWaveform p = hard_pulse(std::numbers::pi / 2, phase, ex.amplitude);
    return rotate_bloch(pulse_propagator(p, delta_omega, omega1_scale), kZAxis);
}

}  // namespace

std::string to_string(InputAxis a) { return a == InputAxis::x ? "x" : (a == InputAxis::y ? "y" : "z"); }

InputAxis parse_input_axis(const std::string &s) {
    if (s == "x") return InputAxis::x;
    if (s == "y") return InputAxis::y;
    if (s == "z") return InputAxis::z;
    throw std::invalid_argument("input axis must be x, y or z");
}

Vec3 unit_vector(InputAxis a) { return a == InputAxis::x ? kXAxis : (a == InputAxis::y ? kYAxis : kZAxis); }

EchoTrainResult simulate_train(const RefocusingPulse &p, double tau, const EnsembleDistribution &d,
                               InputAxis input_axis, int n_echoes, const Excitation &excitation) {
    if (n_echoes < 1) {
        throw std::invalid_argument("n_echoes must be >= 1");
    }
    if (!(tau >= 0.0)) {
        throw std::invalid_argument("tau must be >= 0");
    }
    const auto n = static_cast<std::size_t>(n_echoes);
    const int k_axis = axis_index(input_axis);

    EchoTrainResult out;
    out.echoes = n_echoes;
    out.input_axis = input_axis;
    out.points.assign(d.points().begin(), d.points().end());
    out.per_isochromat.assign(n, std::vector<double>(d.size()));
    out.magnetization.assign(n, std::vector<Vec3>(d.size()));

    parallel_for(d.size(), [&](std::size_t i) {
        const auto &pt = d[i];
        Rotation3 half = so3_matrix(half_cycle_propagator(p, tau, pt.delta_omega, pt.omega1_scale));
        Vec3 m = prepare(input_axis, excitation, pt.delta_omega, pt.omega1_scale);
        for (std::size_t k = 0; k < n; ++k) {
            m = rotate(half, m);
            out.magnetization[k][i] = m;
            double v = echo_sign(input_axis, static_cast<int>(k + 1)) * m[k_axis];
            out.per_isochromat[k][i] = std::clamp(v, -1.0, 1.0);
        }
    });

    out.ensemble_average.assign(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        double sum = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i) {
            sum += d[i].weight * out.per_isochromat[k][i];
        }
        out.ensemble_average[k] = sum;
    }
    return out;
}

std::vector<VisibilityRow> echo_visibility_sweep(const RefocusingPulse &p, double tau,
                                                 std::span<const double> offsets,
                                                 std::span<const double> rf_scales,
                                                 std::span<const int> echo_indices) {
    int last = 0;
    for (int e : echo_indices) {
        if (e < 1) {
            throw std::invalid_argument("echo indices must be >= 1");
        }
        last = std::max(last, e);
    }
    std::vector<VisibilityRow> rows(offsets.size() * rf_scales.size());
    parallel_for(rows.size(), [&](std::size_t r) {
        double dw = offsets[r / rf_scales.size()];
        double w1 = rf_scales[r % rf_scales.size()];
        Rotation3 half = so3_matrix(half_cycle_propagator(p, tau, dw, w1));
        std::vector<double> y(static_cast<std::size_t>(last) + 1);
        Vec3 m = kYAxis;
        for (int k = 1; k <= last; ++k) {
            m = rotate(half, m);
            y[static_cast<std::size_t>(k)] = m.y;
        }
        VisibilityRow row{dw, w1, {}};
        for (int e : echo_indices) {
            row.values.push_back(y[static_cast<std::size_t>(e)]);
        }
        rows[r] = std::move(row);
    });
    return rows;
}

double transient_amplitude(const std::vector<double> &ensemble_average, int skip, double tail_fraction) {
    if (ensemble_average.empty() || !(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
        throw std::invalid_argument("need a nonempty train and tail fraction in (0, 1]");
    }
    const std::size_t n = ensemble_average.size();
    const auto tail = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(tail_fraction * n)));
    double mean = 0.0;
    for (std::size_t k = n - tail; k < n; ++k) {
        mean += ensemble_average[k];
    }
    mean /= static_cast<double>(tail);
    double amp = 0.0;
    for (std::size_t k = static_cast<std::size_t>(std::max(skip, 0)); k < n; ++k) {
        amp = std::max(amp, std::abs(ensemble_average[k] - mean));
    }
    return amp;
}

}  // namespace cpmgoc
