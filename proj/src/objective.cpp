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

#include "cpmgoc/objective.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cpmgoc/parallel.hpp"

namespace cpmgoc {

namespace {

double commutator_defect(const Mat2 &s, const Mat2 &u) {
    Mat2 c = s * u - u * s;
    double sum = 0.0;
    for (int r = 0; r < 2; ++r) {
        for (int k = 0; k < 2; ++k) {
            sum += std::norm(c(r, k));
        }
    }
    return sum / 4.0;
}

Su2Operator imperfect_cp_cycle(double epsilon, double delta_omega_tau) {
    // tau = 1 so the free evolution phases are delta_omega_tau and twice it.
    Su2Operator f = free_precession(delta_omega_tau, 1.0);
    Su2Operator pulse = expm_su2(kYAxis, std::numbers::pi - epsilon);
    return f * pulse * (f * f) * pulse * f;
}

}  // namespace

Su2Operator pi_y_target() { return expm_su2(kYAxis, std::numbers::pi); }

double unitary_fidelity(const Su2Operator &u, const Su2Operator &target) { return trace_overlap(u, target); }

double average_fidelity(const IsochromatPropagators &props, const Su2Operator &target) {
    double sum = 0.0;
    for (const auto &p : props) {
        sum += p.weight * unitary_fidelity(p.propagator, target);
    }
    return sum;
}

CpmgCriteria cpmg_criteria(const Su2Operator &u) {
    RotationDecomposition d = oriented_toward(axis_angle(u), kYAxis);
    CpmgCriteria c;
    c.nutation_angle = d.theta;
    c.degenerate = std::sin(0.5 * d.theta) < 1e-9;
    c.angle_from_xy_plane = std::asin(std::clamp(d.axis.z, -1.0, 1.0));
    c.angle_from_y_axis = std::acos(std::clamp(d.axis.y, -1.0, 1.0));
    c.fidelity = unitary_fidelity(u, pi_y_target());
    return c;
}

double retained_signal_model(int k, double delta, double r_y) {
    if (std::abs(r_y) > 1.0) {
        throw std::invalid_argument("|r_y| must be <= 1");
    }
    double sign = (k % 2 == 0) ? 1.0 : -1.0;
    double ry2 = r_y * r_y;
    return sign * std::cos(k * delta) * (1.0 - ry2) + ry2;
}

TiltedAverageHamiltonian tilted_pulse_avg_hamiltonian(double zeta, double delta_omega) {
    return {delta_omega * (1.0 - std::cos(2.0 * zeta)), delta_omega * std::sin(2.0 * zeta)};
}

CycleOverlaps cp_overlap_orders(double epsilon, double delta_omega_tau) {
    Su2Operator u = imperfect_cp_cycle(epsilon, delta_omega_tau);
    auto overlap = [&](const Mat2 &s) { return 0.5 * (s * u * s * u.adjoint()).trace().real(); };
    return {overlap(pauli_x()), overlap(pauli_y())};
}

CycleOverlaps cp_overlap_defects(double epsilon, double delta_omega_tau) {
    Su2Operator u = imperfect_cp_cycle(epsilon, delta_omega_tau);
    return {commutator_defect(pauli_x(), u), commutator_defect(pauli_y(), u)};
}

std::vector<CriteriaRow> criteria_sweep(const RefocusingPulse &p, std::span<const double> offsets,
                                        std::span<const double> rf_scales) {
    std::vector<CriteriaRow> rows(offsets.size() * rf_scales.size());
    parallel_for(rows.size(), [&](std::size_t i) {
        double dw = offsets[i / rf_scales.size()];
        double w1 = rf_scales[i % rf_scales.size()];
        rows[i] = {dw, w1, cpmg_criteria(p.propagator(dw, w1))};
    });
    return rows;
}

}  // namespace cpmgoc
