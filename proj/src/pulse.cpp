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

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <utility>

#include "cpmgoc/random.hpp"

namespace cpmgoc {

double wrap_phase(double phase) {
    double w = std::fmod(phase, kTwoPi);
    if (w < 0.0) {
        w += kTwoPi;
    }
    // fmod of a tiny negative number can round up to exactly 2 pi.
    return w >= kTwoPi ? 0.0 : w;
}

Cartesian to_cartesian(const PulseStep &s) {
    return {s.amplitude * std::cos(s.phase), s.amplitude * std::sin(s.phase)};
}

PulseStep to_polar(double amplitude, double phase) {
    if (amplitude < 0.0) {
        return {-amplitude, wrap_phase(phase + std::numbers::pi)};
    }
    return {amplitude, wrap_phase(phase)};
}

PulseStep to_polar(const Cartesian &c) {
    double a = std::hypot(c.u1, c.u2);
    return {a, a > 0.0 ? wrap_phase(std::atan2(c.u2, c.u1)) : 0.0};
}

PulseWaveform::PulseWaveform(double dt, std::vector<PulseStep> steps, double a_max, double pre_delay,
                             double post_delay)
    : dt_(dt), steps_(std::move(steps)), a_max_(a_max), pre_delay_(pre_delay), post_delay_(post_delay) {
    if (!(dt >= 0.0) || !std::isfinite(dt)) {
        throw std::invalid_argument("waveform dt must be finite and >= 0");
    }
    if (!(a_max > 0.0) || !std::isfinite(a_max)) {
        throw std::invalid_argument("waveform a_max must be finite and > 0");
    }
    if (!(pre_delay >= 0.0) || !(post_delay >= 0.0)) {
        throw std::invalid_argument("guard delays must be >= 0");
    }
    for (auto &s : steps_) {
        if (!std::isfinite(s.amplitude) || !std::isfinite(s.phase)) {
            throw std::invalid_argument("waveform step is not finite");
        }
        s = to_polar(s.amplitude, s.phase);
    }
}

double PulseWaveform::max_amplitude() const {
    double m = 0.0;
    for (const auto &s : steps_) {
        m = std::max(m, s.amplitude);
    }
    return m;
}

PulseWaveform PulseWaveform::with_steps(std::vector<PulseStep> steps) const {
    return PulseWaveform(dt_, std::move(steps), a_max_, pre_delay_, post_delay_);
}

PulseWaveform PulseWaveform::with_delays(double pre_delay, double post_delay) const {
    return PulseWaveform(dt_, steps_, a_max_, pre_delay, post_delay);
}

PulseWaveform PulseWaveform::phase_shifted(double shift) const {
    std::vector<PulseStep> out = steps_;
    for (auto &s : out) {
        s.phase += shift;
    }
    return with_steps(std::move(out));
}

PulseWaveform concatenate(const PulseWaveform &first, const PulseWaveform &second) {
    if (first.dt_ != second.dt_ || first.a_max_ != second.a_max_) {
        throw std::invalid_argument("concatenated waveforms must share dt and a_max");
    }
    std::vector<PulseStep> steps = first.steps_;
    steps.insert(steps.end(), second.steps_.begin(), second.steps_.end());
    return PulseWaveform(first.dt_, std::move(steps), first.a_max_, first.pre_delay_, second.post_delay_);
}

PulseWaveform hard_pulse(double nutation, double phase, double a_max) {
    if (!(a_max > 0.0)) {
        throw std::invalid_argument("hard pulse amplitude must be > 0");
    }
    if (!(nutation >= 0.0)) {
        throw std::invalid_argument("hard pulse nutation must be >= 0");
    }
    return PulseWaveform(nutation / a_max, {{a_max, phase}}, a_max);
}

PulseWaveform symmetrize_excitation(const PulseWaveform &p) {
    if (p.empty()) {
        throw std::invalid_argument("cannot symmetrize an empty waveform");
    }
    std::vector<PulseStep> steps;
    steps.reserve(2 * p.size());
    for (const auto &s : p.steps()) {
        steps.push_back({s.amplitude, -s.phase});
    }
    for (auto it = p.steps().rbegin(); it != p.steps().rend(); ++it) {
        steps.push_back(*it);
    }
    return p.with_steps(std::move(steps));
}

PulseWaveform clip_amplitudes(const PulseWaveform &p) {
    std::vector<PulseStep> steps(p.steps().begin(), p.steps().end());
    for (auto &s : steps) {
        s = to_polar(s.amplitude, s.phase);
        s.amplitude = std::min(s.amplitude, p.a_max());
    }
    return p.with_steps(std::move(steps));
}

PulseWaveform random_waveform(const WaveformShape &shape, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<PulseStep> steps(shape.steps);
    for (auto &s : steps) {
        s.amplitude = rng.uniform(0.3, 0.8) * shape.a_max;
        s.phase = rng.uniform(0.0, kTwoPi);
    }
    return PulseWaveform(shape.dt, std::move(steps), shape.a_max, shape.pre_delay, shape.post_delay);
}

EnsembleDistribution::EnsembleDistribution(std::vector<IsochromatPoint> points) : points_(std::move(points)) {
    if (points_.empty()) {
        throw std::invalid_argument("distribution must contain at least one point");
    }
    double total = 0.0;
    std::set<std::pair<double, double>> seen;
    for (const auto &p : points_) {
        if (!(p.weight > 0.0) || !std::isfinite(p.delta_omega) || !std::isfinite(p.omega1_scale)) {
            throw std::invalid_argument("distribution weights must be positive and points finite");
        }
        if (!seen.emplace(p.delta_omega, p.omega1_scale).second) {
            throw std::invalid_argument("duplicate (offset, rf scale) point in distribution");
        }
        total += p.weight;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw std::invalid_argument("distribution weights must sum to 1");
    }
}

EnsembleDistribution EnsembleDistribution::uniform(std::vector<IsochromatPoint> points) {
    double w = points.empty() ? 0.0 : 1.0 / static_cast<double>(points.size());
    for (auto &p : points) {
        p.weight = w;
    }
    return EnsembleDistribution(std::move(points));
}

EnsembleDistribution EnsembleDistribution::grid(std::span<const double> offsets, std::span<const double> scales) {
    std::vector<IsochromatPoint> points;
    points.reserve(offsets.size() * scales.size());
    for (double o : offsets) {
        for (double s : scales) {
            points.push_back({o, s, 0.0});
        }
    }
    return uniform(std::move(points));
}

std::vector<double> EnsembleDistribution::offsets() const {
    std::vector<double> out;
    std::set<double> seen;
    for (const auto &p : points_) {
        if (seen.insert(p.delta_omega).second) {
            out.push_back(p.delta_omega);
        }
    }
    return out;
}

EnsembleDistribution uniform_ladder_distribution(double half_bandwidth, double delta,
                                                 std::span<const double> rf_scales, double jitter_fraction,
                                                 std::uint64_t seed) {
    if (!(delta > 0.0)) {
        throw std::invalid_argument("offset spacing must be > 0");
    }
    if (!(jitter_fraction >= 0.0 && jitter_fraction < 0.5)) {
        throw std::invalid_argument("jitter fraction must be in [0, 0.5)");
    }
    if (half_bandwidth < 0.0 || (half_bandwidth > 0.0 && half_bandwidth < delta)) {
        throw std::invalid_argument("half bandwidth must be 0 or >= offset spacing");
    }
    if (rf_scales.empty()) {
        throw std::invalid_argument("at least one rf scale is required");
    }
    // A hair of slack so that e.g. 8000/250 lands on 32 despite rounding.
    const auto m_max = static_cast<long>(std::floor(half_bandwidth / delta * (1.0 + 1e-12)));
    Rng rng(seed);
    std::vector<double> offsets;
    offsets.reserve(2 * m_max + 1);
    for (long m = -m_max; m <= m_max; ++m) {
        double jitter = m == 0 ? 0.0 : rng.uniform(-jitter_fraction, jitter_fraction);
        offsets.push_back((static_cast<double>(m) + jitter) * delta);
    }
    return EnsembleDistribution::grid(offsets, rf_scales);
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
    if (count == 0) {
        return {};
    }
    if (count == 1) {
        return {lo};
    }
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    return out;
}

double default_offset_spacing(double pulse_duration) { return angular(1.0 / (4.0 * pulse_duration)); }

}  // namespace cpmgoc
