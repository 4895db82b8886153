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

#ifndef CPMGOC_PULSE_HPP
#define CPMGOC_PULSE_HPP

#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

namespace cpmgoc {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Hz -> rad/s.
constexpr double angular(double hz) { return kTwoPi * hz; }
/// rad/s -> Hz.
constexpr double hertz(double rad_s) { return rad_s / kTwoPi; }

/// Wraps an angle into [0, 2 pi).
double wrap_phase(double phase);

struct PulseStep {
    double amplitude = 0.0;  // rad/s
    double phase = 0.0;      // rad

    friend bool operator==(const PulseStep &, const PulseStep &) = default;
};

/// Cartesian controls u1 = A cos(phi), u2 = A sin(phi).
struct Cartesian {
    double u1 = 0.0;
    double u2 = 0.0;
};

Cartesian to_cartesian(const PulseStep &s);
/// Polar form with amplitude >= 0 and phase in [0, 2 pi). A negative amplitude
/// is folded into a phase shift of pi.
PulseStep to_polar(double amplitude, double phase);
PulseStep to_polar(const Cartesian &c);

/// Piecewise-constant RF waveform with RF-off guard delays on either side.
///
/// Construction normalizes every step to polar form (nonnegative amplitude,
/// phase in [0, 2 pi)). The amplitude cap is not enforced here so that
/// clip_amplitudes() has something to act on; within_cap() reports it, and the
/// optimizer and file loaders reject waveforms that exceed it.
class PulseWaveform {
  public:
    PulseWaveform() = default;
    /// Throws std::invalid_argument for dt < 0, negative delays or a_max <= 0.
    PulseWaveform(double dt, std::vector<PulseStep> steps, double a_max, double pre_delay = 0.0,
                  double post_delay = 0.0);

    double dt() const { return dt_; }
    double a_max() const { return a_max_; }
    double pre_delay() const { return pre_delay_; }
    double post_delay() const { return post_delay_; }
    std::span<const PulseStep> steps() const { return steps_; }
    const PulseStep &step(std::size_t j) const { return steps_[j]; }
    std::size_t size() const { return steps_.size(); }
    bool empty() const { return steps_.empty(); }

    /// N * dt, the RF part only.
    double duration() const { return dt_ * static_cast<double>(steps_.size()); }
    /// Guard delays included.
    double total_duration() const { return pre_delay_ + duration() + post_delay_; }

    double max_amplitude() const;
    bool within_cap() const { return max_amplitude() <= a_max_; }

    PulseWaveform with_steps(std::vector<PulseStep> steps) const;
    PulseWaveform with_delays(double pre_delay, double post_delay) const;
    /// Adds `shift` to every phase.
    PulseWaveform phase_shifted(double shift) const;
    /// p1 followed by p2 (same dt and cap; delays from the outer ends).
    friend PulseWaveform concatenate(const PulseWaveform &first, const PulseWaveform &second);

    friend bool operator==(const PulseWaveform &, const PulseWaveform &) = default;

  private:
    double dt_ = 0.0;
    std::vector<PulseStep> steps_;
    double a_max_ = 1.0;
    double pre_delay_ = 0.0;
    double post_delay_ = 0.0;
};

/// Rectangular pulse at full amplitude: one step of length nutation / a_max.
PulseWaveform hard_pulse(double nutation, double phase, double a_max);

/// [phase-reversed p][time-reversed p]: turns an excitation pulse into a
/// universal-rotation pulse of twice the length.
PulseWaveform symmetrize_excitation(const PulseWaveform &p);

/// Polar normalization followed by min(A_j, a_max); phases untouched.
PulseWaveform clip_amplitudes(const PulseWaveform &p);

/// Step layout used when generating random initial guesses.
struct WaveformShape {
    double dt = 10e-6;
    std::size_t steps = 100;
    double a_max = angular(5000.0);
    double pre_delay = 6e-6;
    double post_delay = 6e-6;
};

/// Amplitudes uniform in [0.3, 0.8] a_max, phases uniform in [0, 2 pi).
PulseWaveform random_waveform(const WaveformShape &shape, std::uint64_t seed);

struct IsochromatPoint {
    double delta_omega = 0.0;   // rad/s
    double omega1_scale = 1.0;  // dimensionless
    double weight = 1.0;

    friend bool operator==(const IsochromatPoint &, const IsochromatPoint &) = default;
};

/// Weighted set of (offset, RF scale) isochromats.
class EnsembleDistribution {
  public:
    EnsembleDistribution() = default;
    /// Throws std::invalid_argument unless weights are positive, sum to 1
    /// within 1e-12, and (offset, scale) pairs are unique.
    explicit EnsembleDistribution(std::vector<IsochromatPoint> points);

    /// Equal weights over the given points (input weights ignored).
    static EnsembleDistribution uniform(std::vector<IsochromatPoint> points);
    /// Cartesian product offsets x scales with equal weights.
    static EnsembleDistribution grid(std::span<const double> offsets, std::span<const double> scales);

    std::span<const IsochromatPoint> points() const { return points_; }
    const IsochromatPoint &operator[](std::size_t i) const { return points_[i]; }
    std::size_t size() const { return points_.size(); }

    /// Distinct offsets in first-appearance order.
    std::vector<double> offsets() const;

    friend bool operator==(const EnsembleDistribution &, const EnsembleDistribution &) = default;

  private:
    std::vector<IsochromatPoint> points_;
};

/// Offsets m * delta for m = -M..M (M = floor(half_bandwidth / delta)), each
/// nonzero offset displaced by a uniform draw in +-jitter_fraction * delta,
/// crossed with rf_scales, uniform weights. half_bandwidth == 0 yields the
/// single on-resonance offset.
EnsembleDistribution uniform_ladder_distribution(double half_bandwidth, double delta,
                                                 std::span<const double> rf_scales, double jitter_fraction,
                                                 std::uint64_t seed);

/// Evenly spaced values lo..hi inclusive.
std::vector<double> linspace(double lo, double hi, std::size_t count);

/// Offset spacing 1/(4T) in Hz, returned in rad/s.
double default_offset_spacing(double pulse_duration);

}  // namespace cpmgoc

#endif  // CPMGOC_PULSE_HPP
