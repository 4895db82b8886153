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

// Acceptance checks for the library. Prints one PASS/FAIL line per criterion.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <set>

#include "cpmgoc/channel.hpp"
#include "cpmgoc/echo_train.hpp"
#include "cpmgoc/ladder.hpp"
#include "cpmgoc/objective.hpp"
#include "cpmgoc/parallel.hpp"
#include "cpmgoc/random.hpp"

namespace {

using namespace cpmgoc;
using std::numbers::pi;

constexpr double kAmax = angular(5000.0);
constexpr double kTau = 1e-3;

struct Outcome {
    bool pass = false;
    std::string detail;
};

EnsembleDistribution table_grid() {
    return EnsembleDistribution::grid(linspace(-1.6 * kAmax, 1.6 * kAmax, 321), linspace(0.9, 1.1, 11));
}

PulseWaveform hard_y() { return hard_pulse(pi, pi / 2, kAmax); }

// ---- 1: gradients ----

double exact_fidelity(const PulseWaveform &p, const IsochromatPoint &pt) {
    return unitary_fidelity(pulse_propagator(p, pt.delta_omega, pt.omega1_scale), pi_y_target());
}

double gradient_residual(const PulseWaveform &p, const IsochromatPoint &pt) {
    FidelityGradient fg = fidelity_and_gradients(p, pt, pi_y_target());
    const double h = 1e-6 * p.a_max();
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        for (int k = 0; k < 2; ++k) {
            auto shifted = [&](double s) {
                std::vector<PulseStep> steps(p.steps().begin(), p.steps().end());
                Cartesian c = to_cartesian(steps[j]);
                (k == 0 ? c.u1 : c.u2) += s;
                steps[j] = to_polar(c);
                return exact_fidelity(p.with_steps(std::move(steps)), pt);
            };
            double fd = (shifted(h) - shifted(-h)) / (2.0 * h);
            double an = fg.grads[j][static_cast<std::size_t>(k)];
            num += (an - fd) * (an - fd);
            den += fd * fd;
        }
    }
    return std::sqrt(num / den);
}

Outcome criterion_gradients() {
    Rng rng(2024);
    double worst = 0.0;
    std::vector<double> ratios;
    for (std::uint64_t w = 0; w < 20; ++w) {
        PulseWaveform fine = random_waveform({.dt = 50e-9, .steps = 20, .pre_delay = 50e-9, .post_delay = 50e-9},
                                             mix_seed(11, w));
        PulseWaveform coarse = random_waveform({.dt = 1e-6, .steps = 20, .pre_delay = 0, .post_delay = 0},
                                               mix_seed(12, w));
        PulseWaveform halved(coarse.dt() / 2, {coarse.steps().begin(), coarse.steps().end()}, coarse.a_max());
        for (int i = 0; i < 5; ++i) {
            IsochromatPoint pt{rng.uniform(-kAmax, kAmax), rng.uniform(0.9, 1.1), 1.0};
            worst = std::max(worst, gradient_residual(fine, pt));
            ratios.push_back(gradient_residual(coarse, pt) / gradient_residual(halved, pt));
        }
    }
    std::sort(ratios.begin(), ratios.end());
    double median = ratios[ratios.size() / 2];
    bool pass = worst <= 1e-3 && std::abs(median - 2.0) <= 0.3;
    return {pass, fmt::format("max relative error {:.2e} (<= 1e-3, 50 ns steps, h = 1e-6 a_max); "
                              "residual ratio dt/(dt/2) median {:.3f} (2 +- 0.3), range [{:.3f}, {:.3f}]",
                              worst, median, ratios.front(), ratios.back())};
}

// ---- 2: on-resonance ----

Outcome criterion_on_resonance() {
    EnsembleDistribution d({{0.0, 1.0, 1.0}});
    double worst = 1.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        GrapeReport r = grape_ascend(random_waveform({}, mix_seed(77, seed)), d, pi_y_target(), {});
        worst = std::min(worst, r.final_fidelity());
    }
    return {worst >= 0.9999, fmt::format("min fidelity over 10 seeds {:.8f} (>= 0.9999)", worst)};
}

// ---- 3: perturbative orders ----

double loglog_slope(const std::vector<double> &x, const std::vector<double> &y) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
        sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    }
    return sxy / sxx;
}

Outcome criterion_orders() {
    bool pass = true;
    std::string detail;
    for (double phase : {0.3, 0.9, 1.4}) {
        std::vector<double> eps, dx, dy;
        for (int i = 0; i <= 20; ++i) {
            double e = 1e-3 * std::pow(10.0, i / 20.0);
            CycleOverlaps o = cp_overlap_orders(e, phase);
            eps.push_back(e);
            dx.push_back(1.0 - o.o_x);
            dy.push_back(1.0 - o.o_y);
        }
        double sx = loglog_slope(eps, dx), sy = loglog_slope(eps, dy);
        pass = pass && std::abs(sx - 2.0) <= 0.05 && std::abs(sy - 4.0) <= 0.10;
        detail += fmt::format("{}dw*tau={}: slopes {:.4f}, {:.4f}", detail.empty() ? "" : "; ", phase, sx, sy);
    }
    return {pass, detail + " (2 +- 0.05, 4 +- 0.10)"};
}

// ---- 4, 5: hard-pulse channel ----

const PauliChannelFit &hard_fit() {
    static const PauliChannelFit fit = analyze_channel(hard_y(), kTau, table_grid(), {.n_cycles = 100});
    return fit;
}

Outcome criterion_table_row() {
    const PauliModel &m = hard_fit().model;
    bool pass = std::abs(m.m_infinity - 0.646) <= 0.02 && std::abs(m.t2_pulse_cycles - 1.0) <= 0.5;
    return {pass, fmt::format("M_inf {:.4f} (0.646 +- 0.02), T2_pulse/t_c {:.3f} (1 +- 0.5)", m.m_infinity,
                              m.t2_pulse_cycles)};
}

Outcome criterion_fit_quality() {
    const PauliChannelFit &fit = hard_fit();
    auto series = superoperator_series(hard_y(), kTau, table_grid(), 100);
    double worst = 1.0;
    int worst_n = 0;
    for (std::size_t n = 0; n < series.size(); ++n) {
        double o = superoperator_overlap(pauli_channel(pauli_probabilities(series[n]).p), series[n]);
        if (o < worst) {
            worst = o;
            worst_n = static_cast<int>(n + 1);
        }
    }
    return {fit.fit_overlap >= 0.999,
            fmt::format("min fit overlap {:.5f} at n = {} (>= 0.999); envelope-model overlap {:.5f}; "
                        "largest off-diagonal PTM entry {:.4f}",
                        worst, worst_n, fit.envelope_overlap, fit.max_off_diagonal)};
}

// ---- 6: Choi/Kraus ----

Outcome criterion_choi() {
    Rng rng(6);
    double prob_err = 0.0, comp_err = 0.0;
    for (int t = 0; t < 50; ++t) {
        std::array<double, 4> p{};
        double sum = 0.0;
        for (auto &v : p) {
            v = rng.uniform();
            sum += v;
        }
        for (auto &v : p) {
            v /= sum;
        }
        SuperoperatorMatrix s = pauli_channel(p);
        auto terms = choi_kraus(s);
        PauliProbabilities pp = pauli_probabilities(s);
        std::vector<double> a, b(pp.p.begin(), pp.p.end());
        for (const auto &k : terms) {
            a.push_back(k.probability);
        }
        a.resize(4, 0.0);
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        for (std::size_t i = 0; i < 4; ++i) {
            prob_err = std::max(prob_err, std::abs(a[i] - b[i]));
        }
        comp_err = std::max(comp_err, kraus_completeness(terms).max_abs_diff(Mat2::identity()));
    }
    return {prob_err <= 1e-8 && comp_err <= 1e-8,
            fmt::format("max probability mismatch {:.1e}, max |sum A A^dag - I| {:.1e} (both <= 1e-8)", prob_err,
                        comp_err)};
}

// ---- 7, 8: full pipeline ----

struct Pipeline {
    LadderResult ladder;
    std::size_t rung_a = 0;
    std::size_t rung_b = 0;
    RfiResult rfi;
    double seconds = 0.0;
};

const Pipeline &pipeline(std::uint64_t seed) {
    static std::optional<Pipeline> cached;
    if (!cached) {
        auto t0 = std::chrono::steady_clock::now();
        Pipeline p;
        WaveformShape shape;
        LadderOptions opts;
        opts.seed = seed;
        p.ladder = run_ladder(random_waveform(shape, seed), default_offset_spacing(1e-3), opts);
        p.rung_a = rung_for_half_bandwidth(p.ladder, 2.0 * kAmax);
        p.rung_b = rung_for_half_bandwidth(p.ladder, 1.6 * kAmax);
        GrapeConfig cfg;
        cfg.max_iterations = 2000;
        p.rfi = add_rfi_and_reoptimize(p.ladder.rungs[p.rung_b], {0.9, 0.95, 1.0, 1.05, 1.1}, cfg);
        p.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        cached = std::move(p);
    }
    return *cached;
}

Outcome criterion_pipeline(std::uint64_t seed) {
    const Pipeline &p = pipeline(seed);
    const LadderRung &a = p.ladder.rungs[p.rung_a];
    std::vector<double> unit{1.0};
    double fid_b = average_fidelity(p.rfi.waveform, table_grid(), pi_y_target());
    auto wide_offsets = linspace(-2.0 * kAmax, 2.0 * kAmax, 401);
    double fid_a = average_fidelity(a.waveform, EnsembleDistribution::grid(wide_offsets, unit), pi_y_target());
    const std::vector<int> echoes{1, 2, 500};
    auto rows = echo_visibility_sweep(a.waveform, kTau, linspace(-2.0 * kAmax, 2.0 * kAmax, 201), unit, echoes);
    std::array<double, 3> worst{1.0, 1.0, 1.0};
    std::array<double, 3> where{};
    for (const auto &r : rows) {
        for (std::size_t e = 0; e < 3; ++e) {
            if (r.values[e] < worst[e]) {
                worst[e] = r.values[e];
                where[e] = hertz(r.delta_omega);
            }
        }
    }
    double vis = *std::min_element(worst.begin(), worst.end());
    bool pass = fid_b >= 0.97 && fid_a >= 0.975 && vis >= 0.95;
    return {pass,
            fmt::format("ladder {} rungs ({}), {:.0f} s; RF-robust pulse (rung {}, +-{:.0f} Hz, re-optimized over 5 "
                        "RF scales) avg fidelity {:.4f} on 321x11 grid (>= 0.97); uniform-RF pulse (rung {}, +-{:.0f} "
                        "Hz) {:.4f} on 401 offsets (>= 0.975); min echo visibility {:.4f}/{:.4f}/{:.4f} at echoes "
                        "1/2/500 (>= 0.95), located at {:.0f}/{:.0f}/{:.0f} Hz",
                        p.ladder.rungs.size(), to_string(p.ladder.stop_reason), p.seconds, p.rung_b,
                        hertz(p.ladder.rungs[p.rung_b].half_bandwidth), fid_b, p.rung_a, hertz(a.half_bandwidth), fid_a,
                        worst[0], worst[1], worst[2], where[0], where[1], where[2])};
}

Outcome criterion_asymptotic(std::uint64_t seed) {
    const Pipeline &p = pipeline(seed);
    EnsembleDistribution d = table_grid();
    RefocusingPulse pulse(p.rfi.waveform);
    SuperoperatorMatrix asym = asymptotic_channel(pulse, kTau, d);
    auto series = superoperator_series(pulse, kTau, d, 100);
    double worst = 0.0;
    int worst_n = 30;
    for (int n = 30; n <= 100; ++n) {
        double gap = series[static_cast<std::size_t>(n - 1)].max_abs_diff(asym);
        if (gap > worst) {
            worst = gap;
            worst_n = n;
        }
    }
    PauliChannelFit fit = analyze_series(series, cycle_time(pulse, kTau));
    return {worst <= 0.05, fmt::format("max entrywise gap {:.4f} at n = {} over n = 30..100 (<= 0.05); info: "
                                       "M_inf {:.4f}, T2_pulse/t_c {:.2f}, fit overlap {:.5f}",
                                       worst, worst_n, fit.model.m_infinity, fit.model.t2_pulse_cycles,
                                       fit.fit_overlap)};
}

// ---- 9: averaging order ----

SuperoperatorMatrix multiply(const SuperoperatorMatrix &a, const SuperoperatorMatrix &b) {
    SuperoperatorMatrix c;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            for (int k = 0; k < 4; ++k) {
                c(i, j) += a(i, k) * b(k, j);
            }
        }
    }
    return c;
}

Outcome criterion_averaging_order() {
    EnsembleDistribution d({{angular(1000), 1.0, 0.5}, {angular(6000), 0.9, 0.5}});
    const int n = 10;
    SuperoperatorMatrix power_then_average, mean_cycle;
    for (const auto &pt : d.points()) {
        SuperoperatorMatrix t = transfer_matrix(cycle_propagator(hard_y(), kTau, pt.delta_omega, pt.omega1_scale));
        SuperoperatorMatrix tn = SuperoperatorMatrix::identity();
        for (int k = 0; k < n; ++k) {
            tn = multiply(t, tn);
        }
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                power_then_average(i, j) += pt.weight * tn(i, j);
                mean_cycle(i, j) += pt.weight * t(i, j);
            }
        }
    }
    SuperoperatorMatrix average_then_power = SuperoperatorMatrix::identity();
    for (int k = 0; k < n; ++k) {
        average_then_power = multiply(mean_cycle, average_then_power);
    }
    SuperoperatorMatrix s = build_superoperator(hard_y(), kTau, d, n);
    double match = s.max_abs_diff(power_then_average);
    double margin = s.max_abs_diff(average_then_power);
    return {match <= 1e-10 && margin >= 0.01,
            fmt::format("gap to power-then-average {:.1e} (<= 1e-10), to average-then-power {:.4f} (>= 0.01)", match,
                        margin)};
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"cpmgoc acceptance checks", "cpmgoc_acceptance"};
    std::vector<int> selected;
    bool skip_extended = false;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    app.add_option("--criteria", selected, "criteria to run (default all)")->delimiter(',');
    app.add_flag("--skip-extended", skip_extended, "skip the slow full-pipeline criteria 7 and 8");
    app.add_option("--seed", seed, "ladder seed")->capture_default_str();
    app.add_option("--threads", threads, "worker thread cap (0 = all cores)");
    CLI11_PARSE(app, argc, argv);
    set_thread_limit(threads);

    const std::map<int, std::pair<std::string, std::function<Outcome()>>> criteria{
        {1, {"gradient correctness", criterion_gradients}},
        {2, {"on-resonance optimality", criterion_on_resonance}},
        {3, {"perturbative orders", criterion_orders}},
        {4, {"hard-pulse channel row", criterion_table_row}},
        {5, {"channel-fit quality", criterion_fit_quality}},
        {6, {"Kraus/Choi consistency", criterion_choi}},
        {7, {"full-pipeline reproduction", [seed] { return criterion_pipeline(seed); }}},
        {8, {"asymptotic-channel oracle", [seed] { return criterion_asymptotic(seed); }}},
        {9, {"averaging order", criterion_averaging_order}},
    };
    std::set<int> run(selected.begin(), selected.end());
    if (run.empty()) {
        for (const auto &[id, c] : criteria) {
            run.insert(id);
        }
    }
    if (skip_extended) {
        run.erase(7);
        run.erase(8);
    }

    int failures = 0;
    for (int id : run) {
        auto it = criteria.find(id);
        if (it == criteria.end()) {
            fmt::print(stderr, "unknown criterion {}\n", id);
            return 2;
        }
        Outcome o;
        try {
            o = it->second.second();
        } catch (const std::exception &e) {
            o = {false, fmt::format("error: {}", e.what())};
        }
        failures += o.pass ? 0 : 1;
        fmt::print("criterion {}: {}  {}: {}\n", id, o.pass ? "PASS" : "FAIL", it->second.first, o.detail);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
