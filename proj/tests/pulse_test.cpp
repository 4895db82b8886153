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

#include "cpmgoc/pulse.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cpmgoc/propagation.hpp"
#include "cpmgoc/random.hpp"

namespace cpmgoc {
namespace {

using std::numbers::pi;

constexpr double kAmax = angular(5000.0);

TEST(HardPulse, HundredMicrosecondPi) {
    PulseWaveform p = hard_pulse(pi, pi / 2, kAmax);
    ASSERT_EQ(p.size(), 1u);
    EXPECT_NEAR(p.dt(), 100e-6, 1e-18);
    EXPECT_EQ(p.step(0).amplitude, kAmax);
    EXPECT_NEAR(p.step(0).phase, pi / 2, 1e-15);
    EXPECT_EQ(p.pre_delay(), 0.0);
    EXPECT_EQ(p.post_delay(), 0.0);
}

TEST(HardPulse, HalfNutationHalfDuration) { EXPECT_NEAR(hard_pulse(pi / 2, 0, kAmax).dt(), 50e-6, 1e-18); }

TEST(HardPulse, StrongPulseIsSixteenMicroseconds) {
    EXPECT_NEAR(hard_pulse(pi, 0, angular(31250.0)).dt(), 16e-6, 1e-18);
}

TEST(HardPulse, RejectsNonPositiveCap) {
    EXPECT_THROW(hard_pulse(pi, 0, 0.0), std::invalid_argument);
    EXPECT_THROW(hard_pulse(pi, 0, -1.0), std::invalid_argument);
}

TEST(Waveform, PhasesStoredInRange) {
    PulseWaveform p(1e-6, {{1.0, -0.5}, {1.0, 7.0}, {1.0, 2.0 * pi}}, 2.0);
    for (const auto &s : p.steps()) {
        EXPECT_GE(s.phase, 0.0);
        EXPECT_LT(s.phase, 2.0 * pi);
    }
    EXPECT_NEAR(p.step(0).phase, 2.0 * pi - 0.5, 1e-15);
}

TEST(Waveform, RejectsInvalidParameters) {
    EXPECT_THROW(PulseWaveform(-1.0, {}, 1.0), std::invalid_argument);
    EXPECT_THROW(PulseWaveform(1.0, {}, 0.0), std::invalid_argument);
    EXPECT_THROW(PulseWaveform(1.0, {}, 1.0, -1e-6), std::invalid_argument);
    EXPECT_THROW(PulseWaveform(1.0, {{NAN, 0.0}}, 1.0), std::invalid_argument);
}

TEST(Waveform, DurationBookkeeping) {
    PulseWaveform p = random_waveform({}, 3);
    EXPECT_EQ(p.size(), 100u);
    EXPECT_NEAR(p.duration(), 1e-3, 1e-15);
    EXPECT_NEAR(p.total_duration(), 1.012e-3, 1e-15);
}

TEST(SymmetrizeExcitation, HardNinetyBecomesHardOneEighty) {
    PulseWaveform sym = symmetrize_excitation(hard_pulse(pi / 2, 0, kAmax));
    ASSERT_EQ(sym.size(), 2u);
    EXPECT_EQ(sym.step(0), sym.step(1));
    EXPECT_NEAR(sym.duration(), 100e-6, 1e-18);
    EXPECT_GE(trace_overlap(pulse_propagator(sym, 0, 1), pulse_propagator(hard_pulse(pi, 0, kAmax), 0, 1)),
              1.0 - 1e-12);
}

TEST(SymmetrizeExcitation, ThousandTwentyMicrosecondResult) {
    std::vector<PulseStep> steps(510, PulseStep{kAmax / 2, 0.3});
    PulseWaveform sym = symmetrize_excitation(PulseWaveform(1e-6, steps, kAmax));
    EXPECT_EQ(sym.size(), 1020u);
    EXPECT_NEAR(sym.duration(), 1.02e-3, 1e-15);
}

TEST(SymmetrizeExcitation, PhaseReversalThenTimeReversal) {
    PulseWaveform p = random_waveform({.dt = 1e-6, .steps = 7}, 4);
    PulseWaveform sym = symmetrize_excitation(p);
    ASSERT_EQ(sym.size(), 14u);
    for (std::size_t j = 0; j < 7; ++j) {
        EXPECT_EQ(sym.step(j).amplitude, p.step(j).amplitude);
        EXPECT_NEAR(sym.step(j).phase, wrap_phase(-p.step(j).phase), 1e-15);
        EXPECT_EQ(sym.step(7 + j), p.step(6 - j));
    }
}

TEST(SymmetrizeExcitation, EmptyThrows) {
    EXPECT_THROW(symmetrize_excitation(PulseWaveform(1e-6, {}, 1.0)), std::invalid_argument);
}

TEST(ClipAmplitudes, ResetsToCap) {
    PulseWaveform p(1e-6, {{1.2 * kAmax, 0.4}, {0.5 * kAmax, 1.0}}, kAmax);
    PulseWaveform c = clip_amplitudes(p);
    EXPECT_EQ(c.step(0).amplitude, kAmax);
    EXPECT_EQ(c.step(0).phase, p.step(0).phase);
    EXPECT_EQ(c.step(1), p.step(1));
    EXPECT_TRUE(c.within_cap());
}

TEST(ClipAmplitudes, NoOpBelowCap) {
    PulseWaveform p = random_waveform({}, 5);
    EXPECT_EQ(clip_amplitudes(p), p);
}

TEST(ClipAmplitudes, NegativeAmplitudeFoldsIntoPhase) {
    Rng rng(6);
    for (int trial = 0; trial < 100; ++trial) {
        double u1 = rng.uniform(-1.0, 1.0);
        double u2 = rng.uniform(-1.0, 1.0);
        double amp = -std::hypot(u1, u2);
        double phase = std::atan2(-u2, -u1);  // amp * (cos, sin) == (u1, u2)
        PulseStep s = to_polar(amp, phase);
        EXPECT_GE(s.amplitude, 0.0);
        Cartesian c = to_cartesian(s);
        EXPECT_NEAR(c.u1, u1, 1e-14);
        EXPECT_NEAR(c.u2, u2, 1e-14);
    }
}

TEST(LadderDistribution, SixtyFiveOffsets) {
    std::vector<double> one{1.0};
    EnsembleDistribution d = uniform_ladder_distribution(angular(8000), angular(250), one, 0.0, 1);
    ASSERT_EQ(d.size(), 65u);
    for (const auto &p : d.points()) {
        EXPECT_DOUBLE_EQ(p.weight, 1.0 / 65.0);
    }
    EXPECT_NEAR(d[0].delta_omega, -angular(8000), 1e-9);
    EXPECT_NEAR(d[64].delta_omega, angular(8000), 1e-9);
}

TEST(LadderDistribution, ZeroBandwidthIsSinglePoint) {
    std::vector<double> one{1.0};
    EnsembleDistribution d = uniform_ladder_distribution(0.0, angular(250), one, 0.05, 1);
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d[0].delta_omega, 0.0);
    EXPECT_EQ(d[0].weight, 1.0);
}

TEST(LadderDistribution, CrossesRfScales) {
    std::vector<double> scales{0.9, 0.95, 1.0, 1.05, 1.1};
    EnsembleDistribution d = uniform_ladder_distribution(angular(5000), angular(250), scales, 0.0, 1);
    EXPECT_EQ(d.size(), 5u * 41u);
}

TEST(LadderDistribution, JitterReproducibleAndBounded) {
    std::vector<double> one{1.0};
    double delta = angular(250);
    EnsembleDistribution a = uniform_ladder_distribution(angular(2000), delta, one, 0.05, 99);
    EnsembleDistribution b = uniform_ladder_distribution(angular(2000), delta, one, 0.05, 99);
    EnsembleDistribution c = uniform_ladder_distribution(angular(2000), delta, one, 0.05, 100);
    EXPECT_EQ(a, b);
    EXPECT_NE(a, c);
    for (std::size_t i = 0; i < a.size(); ++i) {
        double nominal = (static_cast<double>(i) - 8.0) * delta;
        EXPECT_LE(std::abs(a[i].delta_omega - nominal), 0.05 * delta + 1e-9);
    }
}

TEST(LadderDistribution, RejectsBadArguments) {
    std::vector<double> one{1.0};
    std::vector<double> none;
    EXPECT_THROW(uniform_ladder_distribution(100.0, 200.0, one, 0.0, 1), std::invalid_argument);
    EXPECT_THROW(uniform_ladder_distribution(400.0, 0.0, one, 0.0, 1), std::invalid_argument);
    EXPECT_THROW(uniform_ladder_distribution(400.0, 200.0, one, 0.5, 1), std::invalid_argument);
    EXPECT_THROW(uniform_ladder_distribution(400.0, 200.0, none, 0.0, 1), std::invalid_argument);
}

TEST(Distribution, Invariants) {
    EXPECT_THROW(EnsembleDistribution({{0.0, 1.0, 0.5}, {1.0, 1.0, 0.4}}), std::invalid_argument);
    EXPECT_THROW(EnsembleDistribution({{0.0, 1.0, 0.5}, {0.0, 1.0, 0.5}}), std::invalid_argument);
    EXPECT_THROW(EnsembleDistribution({{0.0, 1.0, 1.5}, {1.0, 1.0, -0.5}}), std::invalid_argument);
    EXPECT_NO_THROW(EnsembleDistribution({{0.0, 1.0, 0.5}, {1.0, 1.0, 0.5}}));
}

TEST(OffsetSpacing, QuarterInverseDurationInHertz) { EXPECT_NEAR(default_offset_spacing(1e-3), angular(250), 1e-9); }

}  // namespace
}  // namespace cpmgoc
