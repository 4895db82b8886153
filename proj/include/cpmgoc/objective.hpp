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

#ifndef CPMGOC_OBJECTIVE_HPP
#define CPMGOC_OBJECTIVE_HPP

#include <span>
#include <vector>

#include "cpmgoc/propagation.hpp"

namespace cpmgoc {

/// -i sy, the pi rotation about y every refocusing pulse aims for.
Su2Operator pi_y_target();

/// |Tr(U target^dagger)|^2 / 4.
double unitary_fidelity(const Su2Operator &u, const Su2Operator &target);

/// Weighted sum of unitary fidelities.
double average_fidelity(const IsochromatPropagators &props, const Su2Operator &target);

/// Rotation characteristics of a refocusing pulse relative to pi about y.
/// The axis is oriented into the +y half-space, so angle_from_y_axis lies in
/// [0, pi/2] and nutation_angle in [0, 2 pi).
struct CpmgCriteria {
    double angle_from_xy_plane = 0.0;  // asin(r_z), positive toward +z
    double angle_from_y_axis = 0.0;
    double nutation_angle = 0.0;
    double fidelity = 0.0;  // to -i sy
    bool degenerate = false;  // nutation ~ 0, axis undefined
};

CpmgCriteria cpmg_criteria(const Su2Operator &u);

/// (-1)^k cos(k delta)(1 - r_y^2) + r_y^2. Throws for |r_y| > 1.
double retained_signal_model(int k, double delta, double r_y);

/// Coefficients of sz and sy in the zeroth-order average Hamiltonian of
/// tau - pi - tau with a pi pulse tilted by zeta out of the xy-plane.
struct TiltedAverageHamiltonian {
    double z_coeff = 0.0;
    double y_coeff = 0.0;
};
TiltedAverageHamiltonian tilted_pulse_avg_hamiltonian(double zeta, double delta_omega);

/// Overlaps Tr(s U s U^dagger)/2 for s = sx (CP) and s = sy (CPMG) after one
/// cycle with instantaneous (pi - epsilon) y pulses, evaluated exactly.
struct CycleOverlaps {
    double o_x = 1.0;
    double o_y = 1.0;
};
CycleOverlaps cp_overlap_orders(double epsilon, double delta_omega_tau);

/// 1 - O computed as |[s, U]|_F^2 / 4, free of cancellation for tiny defects.
CycleOverlaps cp_overlap_defects(double epsilon, double delta_omega_tau);

/// One row of a fidelity / criteria sweep.
struct CriteriaRow {
    double delta_omega = 0.0;
    double omega1_scale = 1.0;
    CpmgCriteria criteria;
};

std::vector<CriteriaRow> criteria_sweep(const RefocusingPulse &p, std::span<const double> offsets,
                                        std::span<const double> rf_scales);

}  // namespace cpmgoc

#endif  // CPMGOC_OBJECTIVE_HPP
