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

#include "cpmgoc/propagation.hpp"

#include <cmath>
#include <stdexcept>

#include "cpmgoc/parallel.hpp"

namespace cpmgoc {

Vec3 step_field(double amplitude, double phase, double delta_omega, double omega1_scale) {
    double a = omega1_scale * amplitude;
    return {a * std::cos(phase), a * std::sin(phase), delta_omega};
}

Mat2 step_hamiltonian(double amplitude, double phase, double delta_omega, double omega1_scale) {
    return cplx{0.5, 0.0} * pauli_dot(step_field(amplitude, phase, delta_omega, omega1_scale));
}

Su2Operator free_precession(double delta_omega, double t) { return precession({0.0, 0.0, delta_omega}, t); }

Su2Operator step_propagator(const PulseStep &step, double dt, double delta_omega, double omega1_scale) {
    return precession(step_field(step.amplitude, step.phase, delta_omega, omega1_scale), dt);
}

Su2Operator pulse_propagator(const PulseWaveform &p, double delta_omega, double omega1_scale) {
    Su2Operator u = free_precession(delta_omega, p.pre_delay());
    for (const auto &s : p.steps()) {
        u = step_propagator(s, p.dt(), delta_omega, omega1_scale) * u;
    }
    return free_precession(delta_omega, p.post_delay()) * u;
}

RefocusingPulse RefocusingPulse::ideal(double phase) {
    RefocusingPulse p;
    p.ideal_phase_ = phase;
    return p;
}

double RefocusingPulse::duration() const { return waveform_ ? waveform_->total_duration() : 0.0; }

Su2Operator RefocusingPulse::propagator(double delta_omega, double omega1_scale) const {
    if (waveform_) {
        return pulse_propagator(*waveform_, delta_omega, omega1_scale);
    }
    return expm_su2({std::cos(ideal_phase_), std::sin(ideal_phase_), 0.0}, std::numbers::pi);
}

Su2Operator half_cycle_propagator(const RefocusingPulse &p, double tau, double delta_omega, double omega1_scale) {
    Su2Operator f = free_precession(delta_omega, tau);
    return f * p.propagator(delta_omega, omega1_scale) * f;
}

Su2Operator cycle_propagator(const RefocusingPulse &p, double tau, double delta_omega, double omega1_scale) {
    Su2Operator f = free_precession(delta_omega, tau);
    Su2Operator u = p.propagator(delta_omega, omega1_scale);
    return f * u * (f * f) * u * f;
}

double cycle_time(const RefocusingPulse &p, double tau) { return 4.0 * tau + 2.0 * p.duration(); }

std::vector<TrajectorySample> bloch_trajectory(const PulseWaveform &p, double delta_omega, double omega1_scale,
                                               const Vec3 &rho_in) {
    if (std::abs(rho_in.norm() - 1.0) > 1e-9) {
        throw std::invalid_argument("initial Bloch vector must have unit length");
    }
    std::vector<TrajectorySample> out;
    out.reserve(p.size() + 3);
    double t = 0.0;
    Vec3 m = rho_in;
    out.push_back({t, m});
    t += p.pre_delay();
    m = rotate_bloch(free_precession(delta_omega, p.pre_delay()), m);
    out.push_back({t, m});
    for (const auto &s : p.steps()) {
        t += p.dt();
        m = rotate_bloch(step_propagator(s, p.dt(), delta_omega, omega1_scale), m);
        out.push_back({t, m});
    }
    t += p.post_delay();
    m = rotate_bloch(free_precession(delta_omega, p.post_delay()), m);
    out.push_back({t, m});
    return out;
}

double transverse_fraction(const std::vector<TrajectorySample> &trajectory, const PulseWaveform &p) {
    // Samples 2 .. N+1 are the ends of the RF steps.
    if (p.empty() || trajectory.size() != p.size() + 3) {
        throw std::invalid_argument("trajectory does not match waveform");
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        const Vec3 &m = trajectory[j + 2].m;
        sum += m.x * m.x + m.y * m.y;
    }
    return sum / static_cast<double>(p.size());
}

IsochromatPropagators ensemble_propagators(const RefocusingPulse &p, const EnsembleDistribution &d) {
    IsochromatPropagators out(d.size());
    parallel_for(d.size(), [&](std::size_t i) {
        const auto &pt = d[i];
        out[i] = {pt.delta_omega, pt.omega1_scale, pt.weight, p.propagator(pt.delta_omega, pt.omega1_scale)};
    });
    return out;
}

}  // namespace cpmgoc
