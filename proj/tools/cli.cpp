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

#include "cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/chrono.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

#include "cpmgoc/io.hpp"
#include "cpmgoc/parallel.hpp"
#include "cpmgoc/version.hpp"
#include "units.hpp"

namespace cpmgoc::cli {

namespace fs = std::filesystem;
using io::Json;
using std::numbers::pi;

namespace {

class UsageError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

struct Output {
    std::string dir_flag;
    fs::path dir;
    std::vector<std::string> files;

    void resolve() {
        if (!dir_flag.empty()) {
            dir = dir_flag;
        } else if (const char *env = std::getenv(kOutputDirEnv); env && *env) {
            dir = env;
        } else {
            throw UsageError(fmt::format("no output directory: pass --out or set {}", kOutputDirEnv));
        }
        fs::create_directories(dir);
    }

    fs::path file(const std::string &name) {
        files.push_back(name);
        fs::path p = dir / name;
        fs::create_directories(p.parent_path());
        return p;
    }

    std::ofstream open(const std::string &name) {
        fs::path p = file(name);
        std::ofstream f(p);
        if (!f) {
            throw std::runtime_error("cannot write " + p.string());
        }
        return f;
    }
};

std::string utc_timestamp() {
    auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
    return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::chrono::system_clock::to_time_t(now)));
}

void write_manifest(Output &o, const std::string &command, const std::vector<std::string> &args, Json config) {
    Json m;
    m["tool"] = "cpmgoc";
    m["version"] = kVersion;
    m["command"] = command;
    m["argv"] = args;
    m["threads"] = thread_limit();
    m["config"] = std::move(config);
    m["outputs"] = o.files;
    m["created_utc"] = utc_timestamp();
    io::write_json_file(o.dir / "manifest.json", m);
}

// Unit-bearing flags are kept as text until after parsing.
struct PulseFlags {
    std::string amax = "5kHz";
    std::string guard = "6us";

    void add(CLI::App *app) {
        app->add_option("--amax", amax, "RF amplitude cap (e.g. 5kHz)")->capture_default_str();
        app->add_option("--guard", guard, "guard delay before and after waveforms (e.g. 6us)")->capture_default_str();
    }
    PulseContext resolve() const { return {angular(parse_frequency_hz(amax)), parse_time_s(guard)}; }
};

struct EnsembleFlags {
    std::string offsets;
    std::string rf_scales;
    std::string distribution;

    void add(CLI::App *app, const std::string &offsets_help, const std::string &scales_default) {
        rf_scales = scales_default;
        app->add_option("--offsets", offsets, offsets_help);
        app->add_option("--rf-scales", rf_scales, "RF scales lo:hi:count or a,b,c")->capture_default_str();
        app->add_option("--distribution", distribution, "distribution JSON (overrides --offsets/--rf-scales)");
    }

    /// default_half_bandwidth in rad/s; used when --offsets is absent.
    EnsembleDistribution resolve(double default_half_bandwidth, std::size_t default_count) const {
        if (!distribution.empty()) {
            return io::load_distribution(distribution);
        }
        std::vector<double> offs;
        if (offsets.empty()) {
            offs = linspace(-default_half_bandwidth, default_half_bandwidth, default_count);
        } else {
            for (double hz : parse_values(offsets, Quantity::frequency)) {
                offs.push_back(angular(hz));
            }
        }
        std::vector<double> scales = parse_values(rf_scales, Quantity::plain);
        return EnsembleDistribution::grid(offs, scales);
    }
};

Json ensemble_config(const EnsembleDistribution &d) {
    double lo = 0.0, hi = 0.0, slo = 1.0, shi = 1.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (i == 0 || d[i].delta_omega < lo) lo = d[i].delta_omega;
        if (i == 0 || d[i].delta_omega > hi) hi = d[i].delta_omega;
        if (i == 0 || d[i].omega1_scale < slo) slo = d[i].omega1_scale;
        if (i == 0 || d[i].omega1_scale > shi) shi = d[i].omega1_scale;
    }
    return {{"n_points", d.size()},
            {"offset_min_hz", hertz(lo)},
            {"offset_max_hz", hertz(hi)},
            {"rf_scale_min", slo},
            {"rf_scale_max", shi}};
}

Json pulse_config(const std::string &spec, const RefocusingPulse &p) {
    Json j{{"spec", spec}};
    if (p.is_ideal()) {
        j["ideal"] = true;
    } else {
        j["waveform"] = io::waveform_to_json(p.waveform());
    }
    return j;
}

// ---- optimize ----

struct OptimizeFlags {
    Output out;
    PulseFlags pulse;
    EnsembleFlags ensemble;
    std::string duration = "1ms";
    std::size_t steps = 100;
    std::uint64_t seed = 1;
    std::string init;
    bool on_resonance = false;
    bool ladder = false;
    int max_iterations = 2000;
    double target = 1.0;
    double threshold = 1e-7;
    double stop = 0.9;
    int rung_iterations = 300;
    double jitter = 0.05;
    int max_rungs = 100;
    std::string delta;
    double floor = 0.99;
    std::string rfi_scales;
    std::string rfi_half_bandwidth;
    int rfi_iterations = 2000;
};

int cmd_optimize(OptimizeFlags &f, const std::vector<std::string> &args, std::ostream &out) {
    f.out.resolve();
    const PulseContext ctx = f.pulse.resolve();
    const double duration = parse_time_s(f.duration);
    if (f.steps == 0 || !(duration > 0.0)) {
        throw UsageError("--T and --steps must be positive");
    }
    const int modes = int(f.on_resonance) + int(f.ladder) +
                      int(!f.ensemble.offsets.empty() || !f.ensemble.distribution.empty());
    if (modes != 1) {
        throw UsageError("choose exactly one of --on-resonance, --ladder, --offsets/--distribution");
    }

    WaveformShape shape{.dt = duration / static_cast<double>(f.steps),
                        .steps = f.steps,
                        .a_max = ctx.a_max,
                        .pre_delay = ctx.guard,
                        .post_delay = ctx.guard};
    PulseWaveform start = f.init.empty() ? random_waveform(shape, f.seed) : io::load_waveform(f.init, {ctx.a_max, ctx.guard, ctx.guard});

    Json config{{"mode", f.ladder ? "ladder" : (f.on_resonance ? "on_resonance" : "ensemble")},
                {"duration_s", start.duration()},
                {"steps", start.size()},
                {"dt_s", start.dt()},
                {"a_max_hz", hertz(start.a_max())},
                {"guard_s", start.pre_delay()},
                {"seed", f.seed},
                {"init", f.init}};

    if (!f.ladder) {
        GrapeConfig cfg;
        cfg.max_iterations = f.max_iterations;
        cfg.target_fidelity = f.target;
        cfg.improvement_threshold = f.threshold;
        EnsembleDistribution d = f.on_resonance ? EnsembleDistribution({{0.0, 1.0, 1.0}})
                                                : f.ensemble.resolve(0.0, 1);
        config["ensemble"] = ensemble_config(d);
        config["grape"] = {{"max_iterations", cfg.max_iterations},
                           {"target_fidelity", cfg.target_fidelity},
                           {"improvement_threshold", cfg.improvement_threshold}};
        GrapeReport r = grape_ascend(start, d, pi_y_target(), cfg);
        io::save_waveform(f.out.file("waveform.json"), r.final_waveform);
        io::save_waveform(f.out.file("waveform.csv"), r.final_waveform);
        auto trace = f.out.open("trace.jsonl");
        io::write_trace_jsonl(trace, r.trace);
        fmt::print(out, "fidelity {:.6f} after {} iterations ({})\n", r.final_fidelity(), r.iterations,
                   to_string(r.termination));
        write_manifest(f.out, "optimize", args, config);
        return kExitOk;
    }

    LadderOptions lo;
    lo.stop_fidelity = f.stop;
    lo.grape.max_iterations = f.rung_iterations;
    lo.grape.improvement_threshold = f.threshold;
    lo.jitter_fraction = f.jitter;
    lo.max_rungs = f.max_rungs;
    lo.seed = f.seed;
    const double delta = f.delta.empty() ? default_offset_spacing(start.duration()) : angular(parse_frequency_hz(f.delta));
    lo.on_rung = [&](const LadderRung &r) {
        fmt::print(out, "rung {:3d}  +-{:8.1f} Hz  {:4d} points  fidelity {:.6f}\n", r.index, hertz(r.half_bandwidth),
                   r.distribution.size(), r.avg_fidelity);
        out.flush();
    };
    config["ladder"] = {{"delta_hz", hertz(delta)},
                        {"stop_fidelity", lo.stop_fidelity},
                        {"rung_iterations", lo.grape.max_iterations},
                        {"improvement_threshold", lo.grape.improvement_threshold},
                        {"jitter_fraction", lo.jitter_fraction},
                        {"max_rungs", lo.max_rungs},
                        {"select_floor", f.floor}};

    LadderResult l = run_ladder(start, delta, lo);
    {
        auto csv = f.out.open("ladder.csv");
        io::write_ladder_csv(csv, l);
    }
    for (const auto &r : l.rungs) {
        io::save_waveform(f.out.file(fmt::format("rungs/rung_{:03d}.json", r.index)), r.waveform);
    }
    fmt::print(out, "stopped: {}\n", to_string(l.stop_reason));
    try {
        std::size_t best = select_best_rung(l, f.floor);
        io::save_waveform(f.out.file("best.json"), l.rungs[best].waveform);
        io::save_waveform(f.out.file("best.csv"), l.rungs[best].waveform);
        fmt::print(out, "best rung {} (+-{:.1f} Hz, fidelity {:.6f})\n", best, hertz(l.rungs[best].half_bandwidth),
                   l.rungs[best].avg_fidelity);
        config["best_rung"] = best;
    } catch (const std::runtime_error &e) {
        fmt::print(out, "no rung reaches fidelity {}\n", f.floor);
        config["best_rung"] = nullptr;
    }

    if (!f.rfi_scales.empty()) {
        std::vector<double> scales = parse_values(f.rfi_scales, Quantity::plain);
        std::size_t idx = f.rfi_half_bandwidth.empty()
                              ? select_best_rung(l, f.floor)
                              : rung_for_half_bandwidth(l, angular(parse_frequency_hz(f.rfi_half_bandwidth)));
        GrapeConfig cfg;
        cfg.max_iterations = f.rfi_iterations;
        cfg.improvement_threshold = f.threshold;
        RfiResult rfi = add_rfi_and_reoptimize(l.rungs[idx], scales, cfg);
        io::save_waveform(f.out.file("rfi.json"), rfi.waveform);
        io::write_json_file(f.out.file("rfi_distribution.json"), io::distribution_to_json(rfi.distribution));
        auto trace = f.out.open("rfi_trace.jsonl");
        io::write_trace_jsonl(trace, rfi.report.trace);
        fmt::print(out, "rfi on rung {}: fidelity {:.6f}\n", idx, rfi.avg_fidelity);
        config["rfi"] = {{"rung", idx}, {"rf_scales", scales}, {"max_iterations", cfg.max_iterations}};
    }
    write_manifest(f.out, "optimize", args, config);
    return kExitOk;
}

// ---- simulate ----

struct SimulateFlags {
    Output out;
    PulseFlags pulse;
    EnsembleFlags ensemble;
    std::string spec = "hard";
    std::string tau = "1ms";
    int echoes = 100;
    std::string axis = "y";
    std::string excitation = "perfect";
    std::string sweep_echoes;
    std::string trajectory_offset;
    double trajectory_scale = 1.0;
};

int cmd_simulate(SimulateFlags &f, const std::vector<std::string> &args, std::ostream &out) {
    f.out.resolve();
    const PulseContext ctx = f.pulse.resolve();
    RefocusingPulse p = resolve_pulse(f.spec, ctx);
    const double tau = parse_time_s(f.tau);
    EnsembleDistribution d = f.ensemble.resolve(1.6 * ctx.a_max, 161);
    Json config{{"pulse", pulse_config(f.spec, p)}, {"tau_s", tau}, {"ensemble", ensemble_config(d)}};

    if (!f.sweep_echoes.empty()) {
        std::vector<int> echoes = parse_int_list(f.sweep_echoes);
        std::vector<double> offsets = d.offsets();
        std::vector<double> scales;
        for (const auto &pt : d.points()) {
            if (std::find(scales.begin(), scales.end(), pt.omega1_scale) == scales.end()) {
                scales.push_back(pt.omega1_scale);
            }
        }
        auto rows = echo_visibility_sweep(p, tau, offsets, scales, echoes);
        auto csv = f.out.open("sweep.csv");
        io::write_sweep_csv(csv, rows, echoes);
        config["sweep_echoes"] = echoes;
        double worst = 1.0;
        for (const auto &row : rows) {
            for (double v : row.values) {
                worst = std::min(worst, v);
            }
        }
        fmt::print(out, "minimum visibility {:.6f}\n", worst);
    } else {
        InputAxis axis = parse_input_axis(f.axis);
        Excitation ex;
        if (f.excitation == "hard") {
            ex.kind = Excitation::Kind::hard;
        } else if (f.excitation != "perfect") {
            throw UsageError("--excitation must be perfect or hard");
        }
        EchoTrainResult r = simulate_train(p, tau, d, axis, f.echoes, ex);
        {
            auto csv = f.out.open("train.csv");
            io::write_train_csv(csv, r, d);
        }
        auto sig = f.out.open("signal.csv");
        io::write_signal_csv(sig, r);
        config["echoes"] = f.echoes;
        config["axis"] = to_string(axis);
        config["excitation"] = f.excitation;
        fmt::print(out, "echo 1: {:.6f}  echo {}: {:.6f}\n", r.ensemble_average.front(), f.echoes,
                   r.ensemble_average.back());
    }

    if (!f.trajectory_offset.empty()) {
        if (p.is_ideal()) {
            throw UsageError("an ideal pulse has no trajectory");
        }
        double dw = angular(parse_frequency_hz(f.trajectory_offset));
        auto samples = bloch_trajectory(p.waveform(), dw, f.trajectory_scale, unit_vector(parse_input_axis(f.axis)));
        auto csv = f.out.open("trajectory.csv");
        io::write_trajectory_csv(csv, samples);
        config["trajectory"] = {{"offset_hz", hertz(dw)}, {"rf_scale", f.trajectory_scale}};
    }
    write_manifest(f.out, "simulate", args, config);
    return kExitOk;
}

// ---- analyze-channel ----

struct ChannelFlags {
    Output out;
    PulseFlags pulse;
    EnsembleFlags ensemble;
    std::string spec = "hard";
    std::string tau = "1ms";
    int cycles = 100;
    double tail = 0.25;
    bool asymptotic = false;
};

int cmd_analyze_channel(ChannelFlags &f, const std::vector<std::string> &args, std::ostream &out) {
    f.out.resolve();
    const PulseContext ctx = f.pulse.resolve();
    RefocusingPulse p = resolve_pulse(f.spec, ctx);
    const double tau = parse_time_s(f.tau);
    EnsembleDistribution d = f.ensemble.resolve(1.6 * ctx.a_max, 321);
    PauliChannelFit fit = analyze_channel(p, tau, d, {.n_cycles = f.cycles, .tail_fraction = f.tail});
    Json j = io::channel_fit_to_json(fit);
    if (f.asymptotic) {
        j["asymptotic"] = io::superoperator_to_json(asymptotic_channel(p, tau, d));
    }
    io::write_json_file(f.out.file("channel_fit.json"), j);
    fmt::print(out, "M_inf {:.4f}  T2_pulse {} cycles  fit overlap {:.5f}\n", fit.model.m_infinity,
               std::isinf(fit.model.t2_pulse_cycles) ? std::string("inf")
                                                     : fmt::format("{:.3f}", fit.model.t2_pulse_cycles),
               fit.fit_overlap);
    write_manifest(f.out, "analyze-channel", args,
                   {{"pulse", pulse_config(f.spec, p)},
                    {"tau_s", tau},
                    {"ensemble", ensemble_config(d)},
                    {"n_cycles", f.cycles},
                    {"tail_fraction", f.tail}});
    return kExitOk;
}

// ---- compare ----

struct CompareFlags {
    Output out;
    PulseFlags pulse;
    std::vector<std::string> specs;
    std::string offsets;
    std::string rf_scales = "1";
    EnsembleFlags channel;
    std::string tau = "1ms";
    int cycles = 100;
};

int cmd_compare(CompareFlags &f, const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    if (f.specs.empty()) {
        throw UsageError("compare needs at least one pulse");
    }
    f.out.resolve();
    const PulseContext ctx = f.pulse.resolve();
    const double tau = parse_time_s(f.tau);
    std::vector<double> offsets;
    if (f.offsets.empty()) {
        offsets = linspace(-2.0 * ctx.a_max, 2.0 * ctx.a_max, 201);
    } else {
        for (double hz : parse_values(f.offsets, Quantity::frequency)) {
            offsets.push_back(angular(hz));
        }
    }
    std::vector<double> scales = parse_values(f.rf_scales, Quantity::plain);
    EnsembleDistribution cd = f.channel.resolve(1.6 * ctx.a_max, 321);

    auto criteria = f.out.open("criteria.csv");
    auto table = f.out.open("channel_table.csv");
    criteria << "pulse,offset_hz,rf_scale,fidelity,angle_xy_deg,angle_y_deg,nutation_deg\n";
    table << "pulse,t2_pulse_cycles,m_infinity,fit_overlap\n";
    int failures = 0;
    Json pulses = Json::array();
    for (const auto &spec : f.specs) {
        try {
            RefocusingPulse p = resolve_pulse(spec, ctx);
            std::ostringstream rows;
            io::write_criteria_csv(rows, criteria_sweep(p, offsets, scales), spec);
            std::string body = rows.str();
            criteria << body.substr(body.find('\n') + 1);
            PauliChannelFit fit = analyze_channel(p, tau, cd, {.n_cycles = f.cycles});
            fmt::print(table, "{},{},{},{}\n", spec,
                       std::isinf(fit.model.t2_pulse_cycles) ? std::string("inf")
                                                             : io::format_number(fit.model.t2_pulse_cycles),
                       io::format_number(fit.model.m_infinity), io::format_number(fit.fit_overlap));
            fmt::print(out, "{}: M_inf {:.4f}\n", spec, fit.model.m_infinity);
            pulses.push_back(pulse_config(spec, p));
        } catch (const std::exception &e) {
            ++failures;
            fmt::print(err, "error: {}: {}\n", spec, e.what());
        }
    }
    write_manifest(f.out, "compare", args,
                   {{"pulses", pulses},
                    {"tau_s", tau},
                    {"sweep_points", offsets.size() * scales.size()},
                    {"channel_ensemble", ensemble_config(cd)},
                    {"n_cycles", f.cycles}});
    return failures == 0 ? kExitOk : kExitFailure;
}

int cmd_info(std::ostream &out) {
    Json j{{"tool", "cpmgoc"},
           {"version", kVersion},
           {"threads", thread_limit()},
           {"output_dir_env", kOutputDirEnv},
           {"defaults",
            {{"duration_s", 1e-3},
             {"steps", 100},
             {"a_max_hz", 5000.0},
             {"guard_s", 6e-6},
             {"tau_s", 1e-3},
             {"ladder_stop_fidelity", 0.9},
             {"ladder_rung_iterations", 300}}}};
    out << j.dump(2) << '\n';
    return kExitOk;
}

}  // namespace

RefocusingPulse resolve_pulse(const std::string &spec, const PulseContext &ctx) {
    if (spec == "ideal") {
        return RefocusingPulse::ideal();
    }
    if (spec == "hard") {
        return hard_pulse(pi, pi / 2, ctx.a_max);
    }
    if (spec == "hard90") {
        return hard_pulse(pi / 2, 0.0, ctx.a_max);
    }
    if (spec.rfind("sym:", 0) == 0) {
        RefocusingPulse inner = resolve_pulse(spec.substr(4), ctx);
        if (inner.is_ideal()) {
            throw UsageError("cannot symmetrize an ideal pulse");
        }
        return symmetrize_excitation(inner.waveform()).phase_shifted(pi / 2);
    }
    return io::load_waveform(spec, {.a_max = ctx.a_max, .pre_delay = ctx.guard, .post_delay = ctx.guard});
}

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Optimal-control refocusing pulses for CPMG trains", "cpmgoc"};
    app.require_subcommand(1);
    app.fallthrough();
    unsigned threads = 0;
    app.add_option("--threads", threads, "worker thread cap (0 = all cores)");
    app.set_version_flag("--version", kVersion);

    OptimizeFlags opt;
    auto *optimize = app.add_subcommand("optimize", "GRAPE or bandwidth-ladder optimization");
    optimize->add_option("--out", opt.out.dir_flag, "output directory");
    opt.pulse.add(optimize);
    opt.ensemble.add(optimize, "ensemble offsets lo:hi:count or a,b,c (e.g. -8kHz:8kHz:65)", "1");
    optimize->add_option("--T", opt.duration, "RF duration")->capture_default_str();
    optimize->add_option("--steps", opt.steps, "number of piecewise-constant steps")->capture_default_str();
    optimize->add_option("--seed", opt.seed, "random seed")->capture_default_str();
    optimize->add_option("--init", opt.init, "starting waveform file");
    optimize->add_flag("--on-resonance", opt.on_resonance, "single on-resonance isochromat");
    optimize->add_flag("--ladder", opt.ladder, "bandwidth ladder");
    optimize->add_option("--max-iter", opt.max_iterations, "GRAPE iteration budget")->capture_default_str();
    optimize->add_option("--target", opt.target, "stop at this fidelity (1 = never)")->capture_default_str();
    optimize->add_option("--threshold", opt.threshold, "stall improvement threshold")->capture_default_str();
    optimize->add_option("--stop", opt.stop, "ladder stop fidelity")->capture_default_str();
    optimize->add_option("--rung-iter", opt.rung_iterations, "GRAPE iterations per rung")->capture_default_str();
    optimize->add_option("--jitter", opt.jitter, "offset jitter as a fraction of the spacing")->capture_default_str();
    optimize->add_option("--max-rungs", opt.max_rungs, "rung budget")->capture_default_str();
    optimize->add_option("--delta", opt.delta, "rung spacing (default 1/(4T))");
    optimize->add_option("--floor", opt.floor, "fidelity floor for best.json")->capture_default_str();
    optimize->add_option("--rfi-scales", opt.rfi_scales, "re-optimize one rung over these RF scales");
    optimize->add_option("--rfi-half-bandwidth", opt.rfi_half_bandwidth, "rung to re-optimize (default best)");
    optimize->add_option("--rfi-iter", opt.rfi_iterations, "GRAPE iterations for the RF step")->capture_default_str();

    SimulateFlags sim;
    auto *simulate = app.add_subcommand("simulate", "CPMG/CP echo trains and visibility sweeps");
    simulate->add_option("--out", sim.out.dir_flag, "output directory");
    sim.pulse.add(simulate);
    sim.ensemble.add(simulate, "offsets (default +-1.6 amax, 161 points)", "0.9:1.1:5");
    simulate->add_option("--pulse", sim.spec, "ideal, hard, hard90, sym:SPEC or a waveform file")->capture_default_str();
    simulate->add_option("--tau", sim.tau, "half the pulse spacing")->capture_default_str();
    simulate->add_option("--echoes", sim.echoes, "echo count")->capture_default_str();
    simulate->add_option("--axis", sim.axis, "input magnetization: y (CPMG), x (CP) or z")->capture_default_str();
    simulate->add_option("--excitation", sim.excitation, "perfect or hard")->capture_default_str();
    simulate->add_option("--sweep-echoes", sim.sweep_echoes, "visibility sweep at these echoes (e.g. 1,2,500)");
    simulate->add_option("--trajectory-offset", sim.trajectory_offset, "also export the Bloch trajectory at this offset");
    simulate->add_option("--trajectory-scale", sim.trajectory_scale, "RF scale for the trajectory")->capture_default_str();

    ChannelFlags ch;
    auto *channel = app.add_subcommand("analyze-channel", "Pauli-channel analysis of the cycle superoperator");
    channel->add_option("--out", ch.out.dir_flag, "output directory");
    ch.pulse.add(channel);
    ch.ensemble.add(channel, "offsets (default +-1.6 amax, 321 points)", "0.9:1.1:11");
    channel->add_option("--pulse", ch.spec, "ideal, hard, hard90, sym:SPEC or a waveform file")->capture_default_str();
    channel->add_option("--tau", ch.tau, "half the pulse spacing")->capture_default_str();
    channel->add_option("--cycles", ch.cycles, "simulated cycle count")->capture_default_str();
    channel->add_option("--tail", ch.tail, "tail fraction for the constants")->capture_default_str();
    channel->add_flag("--asymptotic", ch.asymptotic, "include the asymptotic superoperator");

    CompareFlags cmp;
    auto *compare = app.add_subcommand("compare", "criteria sweeps and channel table for several pulses");
    compare->add_option("pulses", cmp.specs, "pulse specs or waveform files");
    compare->add_option("--out", cmp.out.dir_flag, "output directory");
    cmp.pulse.add(compare);
    compare->add_option("--offsets", cmp.offsets, "sweep offsets (default +-2 amax, 201 points)");
    compare->add_option("--rf-scales", cmp.rf_scales, "sweep RF scales")->capture_default_str();
    compare->add_option("--channel-offsets", cmp.channel.offsets, "channel offsets (default +-1.6 amax, 321 points)");
    cmp.channel.rf_scales = "0.9:1.1:11";
    compare->add_option("--channel-rf-scales", cmp.channel.rf_scales, "channel RF scales")->capture_default_str();
    compare->add_option("--tau", cmp.tau, "half the pulse spacing")->capture_default_str();
    compare->add_option("--cycles", cmp.cycles, "simulated cycle count")->capture_default_str();

    auto *info = app.add_subcommand("info", "version and defaults");

    std::vector<std::string> argv_storage{"cpmgoc"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<char *> argv;
    for (auto &a : argv_storage) {
        argv.push_back(a.data());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        set_thread_limit(threads);
        if (*optimize) return cmd_optimize(opt, args, out);
        if (*simulate) return cmd_simulate(sim, args, out);
        if (*channel) return cmd_analyze_channel(ch, args, out);
        if (*compare) return cmd_compare(cmp, args, out, err);
        if (*info) return cmd_info(out);
    } catch (const UsageError &e) {
        fmt::print(err, "usage error: {}\n", e.what());
        return kExitUsage;
    } catch (const UnitError &e) {
        fmt::print(err, "usage error: {}\n", e.what());
        return kExitUsage;
    } catch (const io::ParseError &e) {
        fmt::print(err, "parse error: {}\n", e.what());
        return kExitUsage;
    } catch (const std::invalid_argument &e) {
        fmt::print(err, "invalid configuration: {}\n", e.what());
        return kExitUsage;
    } catch (const std::exception &e) {
        fmt::print(err, "error: {}\n", e.what());
        return kExitFailure;
    }
    return kExitUsage;
}

}  // namespace cpmgoc::cli
