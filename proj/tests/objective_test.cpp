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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cpmgoc/random.hpp"

namespace cpmgoc {
namespace {

using std::numbers::pi;

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double> &x, const std::vector<double> &y) {
    double n = static_cast<double>(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

TEST(UnitaryFidelity, Examples) {
    Su2Operator t = pi_y_target();
    EXPECT_NEAR(unitary_fidelity(t, t), 1.0, 1e-15);
    EXPECT_NEAR(unitary_fidelity(Mat2::identity(), t), 0.0, 1e-15);
}

TEST(UnitaryFidelity, ClosedFormInAxisAngle) {
    Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        Vec3 r = Vec3{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)}.normalized();
        double theta = rng.uniform(0, 2 * pi);
        double want = std::pow(std::sin(theta / 2), 2) * r.y * r.y;
        EXPECT_NEAR(unitary_fidelity(expm_su2(r, theta), pi_y_target()), want, 1e-13);
    }
}

TEST(AverageFidelity, WeightedSum) {
    IsochromatPropagators props{{0, 1, 0.25, pi_y_target()}, {1, 1, 0.75, expm_su2(kYAxis, pi - 0.2)}};
    double want = 0.25 + 0.75 * std::pow(std::sin((pi - 0.2) / 2), 2);
    EXPECT_NEAR(average_fidelity(props, pi_y_target()), want, 1e-14);
    IsochromatPropagators perfect{{0, 1, 0.5, pi_y_target()}, {1, 1, 0.5, pi_y_target()}};
    EXPECT_NEAR(average_fidelity(perfect, pi_y_target()), 1.0, 1e-15);
}

TEST(AverageFidelity, MonotoneUnderWeightShiftTowardBetterPoint) {
    Su2Operator good = expm_su2(kYAxis, pi - 0.05), bad = expm_su2(kXAxis, pi);
    double prev = -1.0;
    for (double w = 0.05; w < 1.0; w += 0.05) {
        IsochromatPropagators props{{0, 1, w, good}, {1, 1, 1 - w, bad}};
        double f = average_fidelity(props, pi_y_target());
        EXPECT_GT(f, prev);
        prev = f;
    }
}

TEST(CpmgCriteria, PerfectPulse) {
    CpmgCriteria c = cpmg_criteria(pi_y_target());
    EXPECT_NEAR(c.angle_from_xy_plane, 0.0, 1e-15);
    EXPECT_NEAR(c.angle_from_y_axis, 0.0, 1e-7);
    EXPECT_NEAR(c.nutation_angle, pi, 1e-15);
    EXPECT_NEAR(c.fidelity, 1.0, 1e-15);
    EXPECT_FALSE(c.degenerate);
}

TEST(CpmgCriteria, DiagonalAxis) {
    CpmgCriteria c = cpmg_criteria(expm_su2({1, 1, 0}, pi));
    EXPECT_NEAR(c.angle_from_y_axis, pi / 4, 1e-12);
    EXPECT_NEAR(c.fidelity, 0.5, 1e-14);
}

TEST(CpmgCriteria, TiltSignPositiveTowardZ) {
    CpmgCriteria c = cpmg_criteria(expm_su2({0, std::cos(0.2), std::sin(0.2)}, pi - 0.1));
    EXPECT_NEAR(c.angle_from_xy_plane, 0.2, 1e-12);
    EXPECT_NEAR(c.nutation_angle, pi - 0.1, 1e-12);
}

TEST(CpmgCriteria, DegenerateNearIdentity) { EXPECT_TRUE(cpmg_criteria(Mat2::identity()).degenerate); }

TEST(CpmgCriteria, ConsistentWithFidelityFormula) {
    Rng rng(32);
    for (int trial = 0; trial < 300; ++trial) {
        Vec3 r = Vec3{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)}.normalized();
        Su2Operator u = std::exp(cplx(0, rng.uniform(-pi, pi))) * expm_su2(r, rng.uniform(0, 2 * pi));
        CpmgCriteria c = cpmg_criteria(u);
        double model = std::pow(std::sin(c.nutation_angle / 2), 2) * std::pow(std::cos(c.angle_from_y_axis), 2);
        EXPECT_NEAR(c.fidelity, model, 1e-10);
        EXPECT_EQ(c.fidelity, unitary_fidelity(u, pi_y_target()));
        EXPECT_LE(c.angle_from_y_axis, pi / 2 + 1e-12);
    }
}

TEST(RetainedSignalModel, Examples) {
    for (int k = 0; k < 5; ++k) {
        EXPECT_NEAR(retained_signal_model(k, 0.0, 1.0), 1.0, 1e-15);
    }
    EXPECT_NEAR(retained_signal_model(1, pi / 2, 0.0), 0.0, 1e-15);
    EXPECT_NEAR(retained_signal_model(3, 0.0, 0.0), -1.0, 1e-15);
    EXPECT_THROW(retained_signal_model(1, 0.0, 1.01), std::invalid_argument);
}

TEST(RetainedSignalModel, EnvelopeFloor) {
    // Averaging over the echo phase leaves r_y^2.
    double sum = 0.0;
    const int n = 1000;
    for (int i = 0; i < n; ++i) {
        sum += retained_signal_model(7, 2 * pi * (i + 0.5) / n, 0.995);
    }
    EXPECT_NEAR(sum / n, 0.995 * 0.995, 1e-12);
    EXPECT_NEAR(0.995 * 0.995, 0.990, 1e-4);
}

TEST(TiltedAverageHamiltonian, Examples) {
    auto h0 = tilted_pulse_avg_hamiltonian(0.0, 3.0);
    EXPECT_EQ(h0.z_coeff, 0.0);
    EXPECT_EQ(h0.y_coeff, 0.0);
    auto h1 = tilted_pulse_avg_hamiltonian(pi / 4, 3.0);
    EXPECT_NEAR(h1.z_coeff, 3.0, 1e-14);
    EXPECT_NEAR(h1.y_coeff, 3.0, 1e-14);
    auto h2 = tilted_pulse_avg_hamiltonian(pi / 2, 3.0);
    EXPECT_NEAR(h2.z_coeff, 6.0, 1e-14);
    EXPECT_NEAR(h2.y_coeff, 0.0, 1e-14);
}

TEST(CpOverlap, PerfectPulses) {
    CycleOverlaps o = cp_overlap_orders(0.0, 0.7);
    EXPECT_NEAR(o.o_x, 1.0, 1e-14);
    EXPECT_NEAR(o.o_y, 1.0, 1e-14);
}

TEST(CpOverlap, SecondOrderOnResonance) {
    EXPECT_NEAR(cp_overlap_orders(0.1, 0.0).o_x, 1 - 2 * 0.01, 1e-4);
}

TEST(CpOverlap, DefectsAgreeWithOverlaps) {
    Rng rng(33);
    for (int trial = 0; trial < 50; ++trial) {
        double e = rng.uniform(0, 0.5), p = rng.uniform(0, pi);
        CycleOverlaps o = cp_overlap_orders(e, p), d = cp_overlap_defects(e, p);
        EXPECT_NEAR(1 - o.o_x, d.o_x, 1e-13);
        EXPECT_NEAR(1 - o.o_y, d.o_y, 1e-13);
    }
}

TEST(CpOverlap, PerturbativeOrders) {
    for (double phase : {0.3, 0.9, 1.4}) {
        std::vector<double> eps, dx, dy;
        for (int i = 0; i <= 20; ++i) {
            double e = 1e-3 * std::pow(10.0, i / 20.0);
            CycleOverlaps d = cp_overlap_defects(e, phase);
            eps.push_back(e);
            dx.push_back(d.o_x);
            dy.push_back(d.o_y);
        }
        EXPECT_NEAR(loglog_slope(eps, dx), 2.0, 0.05) << phase;
        EXPECT_NEAR(loglog_slope(eps, dy), 4.0, 0.10) << phase;
    }
}

TEST(CpOverlap, CpmgBeatsCpOnGrid) {
    for (double e = 0.05; e <= 0.5; e += 0.05) {
        for (double p = 0.05; p < pi / 2; p += 0.1) {
            CycleOverlaps o = cp_overlap_orders(e, p);
            EXPECT_GE(o.o_y, o.o_x - 1e-14) << e << " " << p;
        }
    }
}

TEST(CriteriaSweep, RowMajorOverOffsetsThenScales) {
    std::vector<double> offsets{-1000.0, 0.0, 1000.0}, scales{0.9, 1.1};
    auto rows = criteria_sweep(hard_pulse(pi, pi / 2, angular(5000)), offsets, scales);
    ASSERT_EQ(rows.size(), 6u);
    EXPECT_EQ(rows[3].delta_omega, 0.0);
    EXPECT_EQ(rows[3].omega1_scale, 1.1);
    EXPECT_NEAR(rows[2].criteria.fidelity, std::pow(std::sin(0.45 * pi), 2), 1e-14);
}

}  // namespace
}  // namespace cpmgoc
