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

#ifndef CPMGOC_PROPAGATION_HPP
#define CPMGOC_PROPAGATION_HPP

#include <optional>
#include <vector>

#include "cpmgoc/pulse.hpp"
#include "cpmgoc/su2.hpp"

namespace cpmgoc {

// Rotating-frame convention: H = (dw/2) sz + (w1 A/2)(cos(phi) sx + sin(phi) sy),
// so a constant amplitude A on resonance nutates at rate A (A/2pi = 5 kHz
// gives a 100 us pi pulse).

/// Effective field b with H = (b . sigma) / 2.
Vec3 step_field(double amplitude, double phase, double delta_omega, double omega1_scale);

/// The 2x2 Hermitian step Hamiltonian in rad/s.
Mat2 step_hamiltonian(double amplitude, double phase, double delta_omega, double omega1_scale);

/// exp(-i (dw t / 2) sz).
Su2Operator free_precession(double delta_omega, double t);

/// Exact propagator of one piecewise-constant step.
Su2Operator step_propagator(const PulseStep &step, double dt, double delta_omega, double omega1_scale);

/// F(post) U_N ... U_1 F(pre), guard delays as free precession.
Su2Operator pulse_propagator(const PulseWaveform &p, double delta_omega, double omega1_scale);

/// A refocusing element: either a sampled waveform or an instantaneous ideal
/// pi rotation about an axis in the xy-plane.
class RefocusingPulse {
  public:
    RefocusingPulse(PulseWaveform waveform) : waveform_(std::move(waveform)) {}  // NOLINT: implicit by intent

    /// Perfect instantaneous pi pulse about (cos phase, sin phase, 0).
    static RefocusingPulse ideal(double phase = std::numbers::pi / 2);

    bool is_ideal() const { return !waveform_.has_value(); }
    const PulseWaveform &waveform() const { return *waveform_; }
    double ideal_phase() const { return ideal_phase_; }

    /// Total length including guard delays; zero for an ideal pulse.
    double duration() const;
    Su2Operator propagator(double delta_omega, double omega1_scale) const;

  private:
    RefocusingPulse() = default;
    std::optional<PulseWaveform> waveform_;
    double ideal_phase_ = std::numbers::pi / 2;
};

/// F(tau) U_pulse F(tau): one echo period.
Su2Operator half_cycle_propagator(const RefocusingPulse &p, double tau, double delta_omega, double omega1_scale);

/// F(tau) U_pulse F(2 tau) U_pulse F(tau). tau is the edge-to-edge delay
/// between the pulse block (guards included) and the echo centre.
Su2Operator cycle_propagator(const RefocusingPulse &p, double tau, double delta_omega, double omega1_scale);

/// Echo-to-echo (two echo periods) duration.
double cycle_time(const RefocusingPulse &p, double tau);

struct TrajectorySample {
    double t = 0.0;  // seconds from the start of the pre-delay
    Vec3 m;
};

/// Bloch vector at t = 0, after the pre-delay, after every step and after the
/// post-delay. Throws std::invalid_argument if |rho_in| != 1 within 1e-9.
std::vector<TrajectorySample> bloch_trajectory(const PulseWaveform &p, double delta_omega, double omega1_scale,
                                               const Vec3 &rho_in);

/// Time-averaged x^2 + y^2 over the RF steps of a trajectory.
double transverse_fraction(const std::vector<TrajectorySample> &trajectory, const PulseWaveform &p);

struct IsochromatPropagator {
    double delta_omega = 0.0;
    double omega1_scale = 1.0;
    double weight = 1.0;
    Su2Operator propagator;
};

using IsochromatPropagators = std::vector<IsochromatPropagator>;

/// Per-point pulse propagators in distribution order.
IsochromatPropagators ensemble_propagators(const RefocusingPulse &p, const EnsembleDistribution &d);

}  // namespace cpmgoc

#endif  // CPMGOC_PROPAGATION_HPP
