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

#include "cpmgoc/grape.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "cpmgoc/objective.hpp"
#include "cpmgoc/random.hpp"
#include "oracles.hpp"

namespace cpmgoc {
namespace {

using std::numbers::pi;

constexpr double kAmax = angular(5000.0);

// Central difference of the exact fidelity in the Cartesian control (j, k).
double finite_difference(const PulseWaveform &p, const IsochromatPoint &pt, std::size_t j, int k, double h) {
    auto eval = [&](double shift) {
        std::vector<PulseStep> steps(p.steps().begin(), p.steps().end());
        Cartesian c = to_cartesian(steps[j]);
        (k == 0 ? c.u1 : c.u2) += shift;
        steps[j] = to_polar(c);
        auto u = testing::oracle_pulse_propagator(p.with_steps(steps), pt.delta_omega, pt.omega1_scale);
        return testing::oracle_fidelity(u, testing::to_eigen(pi_y_target()));
    };
    return (eval(h) - eval(-h)) / (2 * h);
}

double gradient_residual(const PulseWaveform &p, const IsochromatPoint &pt) {
    FidelityGradient fg = fidelity_and_gradients(p, pt, pi_y_target());
    double num = 0, den = 0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        for (int k = 0; k < 2; ++k) {
            double fd = finite_difference(p, pt, j, k, 1e-6 * p.a_max());
            num += std::pow(fg.grads[j][static_cast<std::size_t>(k)] - fd, 2);
            den += fd * fd;
        }
    }
    return std::sqrt(num / den);
}

PulseWaveform onres_hard_pi(std::size_t steps) {
    double dt = pi / kAmax / static_cast<double>(steps);
    return PulseWaveform(dt, std::vector<PulseStep>(steps, PulseStep{kAmax, pi / 2}), kAmax);
}

EnsembleDistribution on_resonance() { return EnsembleDistribution({{0.0, 1.0, 1.0}}); }

TEST(Gradients, FidelityMatchesPropagator) {
    PulseWaveform p = random_waveform({}, 41);
    IsochromatPoint pt{angular(1300), 0.95, 1.0};
    EXPECT_NEAR(fidelity_and_gradients(p, pt, pi_y_target()).fidelity,
                unitary_fidelity(pulse_propagator(p, pt.delta_omega, pt.omega1_scale), pi_y_target()), 1e-13);
}

TEST(Gradients, MatchFiniteDifferencesForShortSteps) {
    Rng rng(42);
    for (int trial = 0; trial < 10; ++trial) {
        PulseWaveform p = random_waveform({.dt = 50e-9, .steps = 20, .pre_delay = 50e-9, .post_delay = 50e-9},
                                          mix_seed(42, static_cast<std::uint64_t>(trial)));
        IsochromatPoint pt{rng.uniform(-kAmax, kAmax), rng.uniform(0.9, 1.1), 1.0};
        EXPECT_LE(gradient_residual(p, pt), 1e-3);
    }
}

TEST(Gradients, ResidualIsFirstOrderInStep) {
    WaveformShape shape{.dt = 2e-6, .steps = 20, .pre_delay = 0, .post_delay = 0};
    PulseWaveform p = random_waveform(shape, 43);
    IsochromatPoint pt{0.4 * kAmax, 1.0, 1.0};
    double r1 = gradient_residual(p, pt);
    shape.dt /= 2;
    double r2 = gradient_residual(random_waveform(shape, 43), pt);
    EXPECT_NEAR(r1 / r2, 2.0, 0.3);
}

TEST(Gradients, VanishAtExactOptimum) {
    FidelityGradient fg = fidelity_and_gradients(onres_hard_pi(50), {0.0, 1.0, 1.0}, pi_y_target());
    EXPECT_NEAR(fg.fidelity, 1.0, 1e-14);
    for (const auto &g : fg.grads) {
        EXPECT_LE(std::abs(g[0]), 1e-8 / kAmax);
        EXPECT_LE(std::abs(g[1]), 1e-8 / kAmax);
    }
}

TEST(Gradients, SinglePulsePushesTowardPi) {
    double dt = 100e-6;
    for (double frac : {0.5, 0.8}) {
        PulseWaveform p(dt, {{frac * pi / dt, pi / 2}}, 2 * pi / dt);
        EXPECT_GT(fidelity_and_gradients(p, {0.0, 1.0, 1.0}, pi_y_target()).grads[0][1], 0.0);
    }
    PulseWaveform over(dt, {{1.3 * pi / dt, pi / 2}}, 2 * pi / dt);
    EXPECT_LT(fidelity_and_gradients(over, {0.0, 1.0, 1.0}, pi_y_target()).grads[0][1], 0.0);
}

TEST(Gradients, EnsembleAverageIsWeighted) {
    PulseWaveform p = random_waveform({.steps = 10}, 44);
    EnsembleDistribution d({{0.0, 1.0, 0.25}, {angular(2000), 0.9, 0.75}});
    FidelityGradient avg = average_fidelity_and_gradients(p, d, pi_y_target());
    FidelityGradient a = fidelity_and_gradients(p, d[0], pi_y_target());
    FidelityGradient b = fidelity_and_gradients(p, d[1], pi_y_target());
    EXPECT_NEAR(avg.fidelity, 0.25 * a.fidelity + 0.75 * b.fidelity, 1e-15);
    for (std::size_t j = 0; j < p.size(); ++j) {
        EXPECT_NEAR(avg.grads[j][0], 0.25 * a.grads[j][0] + 0.75 * b.grads[j][0], 1e-18);
    }
    EXPECT_NEAR(average_fidelity(p, d, pi_y_target()), avg.fidelity, 1e-15);
}

TEST(GrapeAscend, OnResonanceReachesUnitFidelity) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        GrapeReport r = grape_ascend(random_waveform({}, seed), on_resonance(), pi_y_target(), {});
        EXPECT_GE(r.final_fidelity(), 0.9999) << seed;
    }
}

TEST(GrapeAscend, OptimalStartStallsUnchanged) {
    PulseWaveform p0 = onres_hard_pi(100);
    GrapeReport r = grape_ascend(p0, on_resonance(), pi_y_target(), {});
    EXPECT_EQ(r.termination, Termination::stalled);
    EXPECT_LE(r.iterations, 2);
    for (std::size_t j = 0; j < p0.size(); ++j) {
        EXPECT_NEAR(r.final_waveform.step(j).amplitude, p0.step(j).amplitude, 1e-9);
        EXPECT_NEAR(r.final_waveform.step(j).phase, p0.step(j).phase, 1e-9);
    }
}

TEST(GrapeAscend, MonotoneHistoryAndClipping) {
    std::vector<double> one{1.0};
    EnsembleDistribution d = uniform_ladder_distribution(angular(2000), angular(250), one, 0.05, 1);
    GrapeConfig cfg;
    cfg.max_iterations = 40;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        GrapeReport r = grape_ascend(random_waveform({.steps = 30}, seed), d, pi_y_target(), cfg);
        ASSERT_EQ(r.fidelity_history.size(), r.trace.size());
        for (std::size_t i = 1; i < r.fidelity_history.size(); ++i) {
            EXPECT_GE(r.fidelity_history[i], r.fidelity_history[i - 1]);
        }
        EXPECT_LE(r.final_waveform.max_amplitude(), r.final_waveform.a_max());
        EXPECT_GT(r.final_fidelity(), r.fidelity_history.front());
    }
}

TEST(GrapeAscend, TargetStopsEarly) {
    GrapeConfig cfg;
    cfg.target_fidelity = 0.9;
    GrapeReport r = grape_ascend(random_waveform({}, 5), on_resonance(), pi_y_target(), cfg);
    EXPECT_EQ(r.termination, Termination::target_reached);
    EXPECT_GE(r.final_fidelity(), 0.9);
    EXPECT_LT(r.final_fidelity(), 0.9999);
}

TEST(GrapeAscend, IterationBudget) {
    GrapeConfig cfg;
    cfg.max_iterations = 3;
    GrapeReport r = grape_ascend(random_waveform({}, 6), on_resonance(), pi_y_target(), cfg);
    EXPECT_EQ(r.termination, Termination::max_iterations);
    EXPECT_EQ(r.iterations, 3);
    EXPECT_EQ(r.trace.size(), 4u);
}

TEST(GrapeAscend, Deterministic) {
    std::vector<double> scales{0.9, 1.1};
    EnsembleDistribution d = uniform_ladder_distribution(angular(3000), angular(250), scales, 0.05, 9);
    GrapeConfig cfg;
    cfg.max_iterations = 15;
    GrapeReport a = grape_ascend(random_waveform({}, 7), d, pi_y_target(), cfg);
    GrapeReport b = grape_ascend(random_waveform({}, 7), d, pi_y_target(), cfg);
    EXPECT_EQ(a.fidelity_history, b.fidelity_history);
    EXPECT_EQ(a.final_waveform, b.final_waveform);
}

TEST(GrapeAscend, RejectsCapViolation) {
    PulseWaveform p(1e-5, {{2 * kAmax, 0.0}}, kAmax);
    EXPECT_THROW(grape_ascend(p, on_resonance(), pi_y_target(), {}), std::invalid_argument);
}

TEST(GrapeAscend, ReportsNumericalFailure) {
    EnsembleDistribution d({{0.0, 1e305, 1.0}});
    try {
        grape_ascend(random_waveform({}, 1), d, pi_y_target(), {});
        FAIL();
    } catch (const NumericalFailure &e) {
        EXPECT_EQ(e.iteration(), 0);
        EXPECT_NE(std::string(e.what()).find("numerical failure"), std::string::npos);
    }
}

TEST(GrapeConfig, Validation) {
    GrapeConfig cfg;
    cfg.improvement_threshold = 0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.target_fidelity = 1.5;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg.target_fidelity = 0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Multistart, SingleStartIsGrapeAscend) {
    WaveformShape shape{.steps = 40};
    auto finals = multistart_histogram(shape, on_resonance(), pi_y_target(), {}, 1, 77);
    GrapeReport r = grape_ascend(random_waveform(shape, mix_seed(77, 0)), on_resonance(), pi_y_target(), {});
    ASSERT_EQ(finals.size(), 1u);
    EXPECT_EQ(finals[0], r.final_fidelity());
}

TEST(Multistart, SortedReproducibleAndClustered) {
    std::vector<double> one{1.0};
    EnsembleDistribution d = uniform_ladder_distribution(angular(6000), angular(500), one, 0.05, 3);
    GrapeConfig cfg;
    cfg.max_iterations = 60;
    WaveformShape shape{.dt = 20e-6, .steps = 25};
    auto a = multistart_histogram(shape, d, pi_y_target(), cfg, 8, 5);
    auto b = multistart_histogram(shape, d, pi_y_target(), cfg, 8, 5);
    EXPECT_EQ(a, b);
    EXPECT_TRUE(std::is_sorted(a.begin(), a.end()));
    double mean = std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(a.size());
    double median = 0.5 * (a[3] + a[4]);
    EXPECT_GE(median, mean - 0.05);
    EXPECT_THROW(multistart_histogram(shape, d, pi_y_target(), cfg, 0, 5), std::invalid_argument);
}

}  // namespace
}  // namespace cpmgoc
