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

#include "cpmgoc/io.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace cpmgoc::io {

namespace {

constexpr double kDeg = 180.0 / std::numbers::pi;

double number_field(const Json &j, const char *key) {
    if (!j.is_object() || !j.contains(key) || !j.at(key).is_number()) {
        throw ParseError(fmt::format("missing numeric field \"{}\"", key));
    }
    return j.at(key).get<double>();
}

std::vector<std::string> split(const std::string &line, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, sep)) {
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == sep) {
        out.emplace_back();
    }
    return out;
}

std::string trim(const std::string &s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

double parse_cell(const std::string &cell, std::size_t line_no) {
    std::string t = trim(cell);
    try {
        std::size_t used = 0;
        double v = std::stod(t, &used);
        if (used != t.size() || !std::isfinite(v)) {
            throw std::invalid_argument(t);
        }
        return v;
    } catch (const std::exception &) {
        throw ParseError(fmt::format("line {}: bad number \"{}\"", line_no, t));
    }
}

bool has_extension(const std::filesystem::path &p, const char *ext) {
    std::string e = p.extension().string();
    for (auto &c : e) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return e == ext;
}

}  // namespace

std::string format_number(double v) { return fmt::format("{}", v); }

Json waveform_to_json(const PulseWaveform &p) {
    Json steps = Json::array();
    for (const auto &s : p.steps()) {
        steps.push_back({{"amp_rad_s", s.amplitude}, {"phase_rad", s.phase}});
    }
    return {{"dt_s", p.dt()},
            {"pre_delay_s", p.pre_delay()},
            {"post_delay_s", p.post_delay()},
            {"a_max_rad_s", p.a_max()},
            {"steps", std::move(steps)}};
}

PulseWaveform waveform_from_json(const Json &j) {
    double dt = number_field(j, "dt_s");
    double pre = number_field(j, "pre_delay_s");
    double post = number_field(j, "post_delay_s");
    double a_max = number_field(j, "a_max_rad_s");
    if (!j.contains("steps") || !j.at("steps").is_array()) {
        throw ParseError("missing array field \"steps\"");
    }
    std::vector<PulseStep> steps;
    for (const auto &s : j.at("steps")) {
        steps.push_back({number_field(s, "amp_rad_s"), number_field(s, "phase_rad")});
    }
    PulseWaveform p;
    try {
        p = PulseWaveform(dt, std::move(steps), a_max, pre, post);
    } catch (const std::invalid_argument &e) {
        throw ParseError(e.what());
    }
    if (!p.within_cap()) {
        throw ParseError("waveform amplitude exceeds a_max_rad_s");
    }
    return p;
}

void write_waveform_csv(std::ostream &out, const PulseWaveform &p) {
    out << "time_s,amp_hz,phase_deg\n";
    for (std::size_t j = 0; j < p.size(); ++j) {
        fmt::print(out, "{},{},{}\n", static_cast<double>(j) * p.dt(), hertz(p.step(j).amplitude),
                   p.step(j).phase * kDeg);
    }
}

PulseWaveform read_waveform_csv(std::istream &in, const CsvWaveformOptions &opts) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<double> times;
    std::vector<PulseStep> steps;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty() || trim(line).front() == '#') {
            continue;
        }
        auto cells = split(line, ',');
        if (!header) {
            if (cells.size() != 3 || trim(cells[0]) != "time_s" || trim(cells[1]) != "amp_hz" ||
                trim(cells[2]) != "phase_deg") {
                throw ParseError("expected header time_s,amp_hz,phase_deg");
            }
            header = true;
            continue;
        }
        if (cells.size() != 3) {
            throw ParseError(fmt::format("line {}: expected 3 columns", line_no));
        }
        times.push_back(parse_cell(cells[0], line_no));
        steps.push_back(to_polar(angular(parse_cell(cells[1], line_no)), parse_cell(cells[2], line_no) / kDeg));
    }
    if (!header) {
        throw ParseError("empty waveform file");
    }
    if (steps.empty()) {
        throw ParseError("waveform file has no steps");
    }
    double dt = opts.dt;
    if (times.size() > 1) {
        dt = times[1] - times[0];
        for (std::size_t j = 1; j < times.size(); ++j) {
            double expected = times[0] + static_cast<double>(j) * dt;
            if (std::abs(times[j] - expected) > 1e-6 * dt) {
                throw ParseError(fmt::format("step {} breaks the uniform time grid", j));
            }
        }
    }
    if (!(dt > 0.0)) {
        throw ParseError("cannot infer step duration");
    }
    PulseWaveform p;
    try {
        p = PulseWaveform(dt, std::move(steps), opts.a_max, opts.pre_delay, opts.post_delay);
    } catch (const std::invalid_argument &e) {
        throw ParseError(e.what());
    }
    if (p.max_amplitude() > p.a_max() * (1.0 + 1e-12)) {
        throw ParseError("waveform amplitude exceeds a_max");
    }
    return clip_amplitudes(p);
}

Json distribution_to_json(const EnsembleDistribution &d) {
    Json pts = Json::array();
    for (const auto &pt : d.points()) {
        pts.push_back({{"offset_hz", hertz(pt.delta_omega)}, {"rf_scale", pt.omega1_scale}, {"weight", pt.weight}});
    }
    return {{"points", std::move(pts)}};
}

EnsembleDistribution distribution_from_json(const Json &j) {
    if (!j.is_object() || !j.contains("points") || !j.at("points").is_array()) {
        throw ParseError("missing array field \"points\"");
    }
    std::vector<IsochromatPoint> pts;
    for (const auto &p : j.at("points")) {
        pts.push_back({angular(number_field(p, "offset_hz")), number_field(p, "rf_scale"), number_field(p, "weight")});
    }
    try {
        return EnsembleDistribution(std::move(pts));
    } catch (const std::invalid_argument &e) {
        throw ParseError(e.what());
    }
}

Json read_json_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError(fmt::format("cannot open {}", path.string()));
    }
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error &e) {
        throw ParseError(fmt::format("{}: {}", path.string(), e.what()));
    }
}

void write_json_file(const std::filesystem::path &path, const Json &j) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error(fmt::format("cannot write {}", path.string()));
    }
    out << j.dump(2) << '\n';
}

PulseWaveform load_waveform(const std::filesystem::path &path, const CsvWaveformOptions &csv) {
    if (has_extension(path, ".csv")) {
        std::ifstream in(path);
        if (!in) {
            throw ParseError(fmt::format("cannot open {}", path.string()));
        }
        try {
            return read_waveform_csv(in, csv);
        } catch (const ParseError &e) {
            throw ParseError(fmt::format("{}: {}", path.string(), e.what()));
        }
    }
    Json j = read_json_file(path);
    try {
        return waveform_from_json(j);
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(fmt::format("{}: {}", path.string(), e.what()));
    } catch (const ParseError &e) {
        throw ParseError(fmt::format("{}: {}", path.string(), e.what()));
    }
}

void save_waveform(const std::filesystem::path &path, const PulseWaveform &p) {
    if (has_extension(path, ".csv")) {
        std::ofstream out(path);
        if (!out) {
            throw std::runtime_error(fmt::format("cannot write {}", path.string()));
        }
        write_waveform_csv(out, p);
        return;
    }
    write_json_file(path, waveform_to_json(p));
}

EnsembleDistribution load_distribution(const std::filesystem::path &path) {
    return distribution_from_json(read_json_file(path));
}

void write_trajectory_csv(std::ostream &out, const std::vector<TrajectorySample> &samples) {
    out << "t_s,x,y,z\n";
    for (const auto &s : samples) {
        fmt::print(out, "{},{},{},{}\n", s.t, s.m.x, s.m.y, s.m.z);
    }
}

void write_criteria_csv(std::ostream &out, const std::vector<CriteriaRow> &rows, const std::string &label) {
    if (!label.empty()) {
        out << "pulse,";
    }
    out << "offset_hz,rf_scale,fidelity,angle_xy_deg,angle_y_deg,nutation_deg\n";
    for (const auto &r : rows) {
        if (!label.empty()) {
            out << label << ',';
        }
        fmt::print(out, "{},{},{},{},{},{}\n", hertz(r.delta_omega), r.omega1_scale, r.criteria.fidelity,
                   r.criteria.angle_from_xy_plane * kDeg, r.criteria.angle_from_y_axis * kDeg,
                   r.criteria.nutation_angle * kDeg);
    }
}

void write_ladder_csv(std::ostream &out, const LadderResult &l) {
    out << "rung,half_bandwidth_hz,n_points,avg_fidelity\n";
    for (const auto &r : l.rungs) {
        fmt::print(out, "{},{},{},{}\n", r.index, hertz(r.half_bandwidth), r.distribution.size(), r.avg_fidelity);
    }
}

void write_train_csv(std::ostream &out, const EchoTrainResult &r, const EnsembleDistribution &d) {
    out << "echo,offset_hz,rf_scale,mx,my,mz\n";
    for (std::size_t k = 0; k < r.magnetization.size(); ++k) {
        for (std::size_t i = 0; i < d.size(); ++i) {
            const Vec3 &m = r.magnetization[k][i];
            fmt::print(out, "{},{},{},{},{},{}\n", k + 1, hertz(d[i].delta_omega), d[i].omega1_scale, m.x, m.y, m.z);
        }
    }
}

void write_signal_csv(std::ostream &out, const EchoTrainResult &r) {
    out << "echo,signal\n";
    for (std::size_t k = 0; k < r.ensemble_average.size(); ++k) {
        fmt::print(out, "{},{}\n", k + 1, r.ensemble_average[k]);
    }
}

void write_sweep_csv(std::ostream &out, const std::vector<VisibilityRow> &rows, const std::vector<int> &echoes) {
    out << "offset_hz,rf_scale,echo,visibility\n";
    for (const auto &row : rows) {
        for (std::size_t e = 0; e < echoes.size(); ++e) {
            fmt::print(out, "{},{},{},{}\n", hertz(row.delta_omega), row.omega1_scale, echoes[e], row.values[e]);
        }
    }
}

Json trace_record_to_json(const TraceRecord &t) {
    return {{"iter", t.iter}, {"fidelity", t.fidelity}, {"step_size", t.step_size}};
}

void write_trace_jsonl(std::ostream &out, const std::vector<TraceRecord> &trace) {
    for (const auto &t : trace) {
        out << trace_record_to_json(t).dump() << '\n';
    }
}

Json superoperator_to_json(const SuperoperatorMatrix &s) {
    Json rows = Json::array();
    for (int i = 0; i < 4; ++i) {
        rows.push_back({s(i, 0), s(i, 1), s(i, 2), s(i, 3)});
    }
    return rows;
}

Json channel_fit_to_json(const PauliChannelFit &fit) {
    const PauliModel &m = fit.model;
    const bool infinite = std::isinf(m.t2_pulse);
    Json probs = Json::array();
    for (std::size_t k = 0; k < fit.per_cycle_probs.size(); ++k) {
        const auto &p = fit.per_cycle_probs[k];
        probs.push_back({static_cast<int>(k + 1), p[0], p[1], p[2], p[3]});
    }
    Json j;
    j["t2_pulse_s"] = infinite ? Json(nullptr) : Json(m.t2_pulse);
    j["t2_pulse_cycles"] = infinite ? Json(nullptr) : Json(m.t2_pulse_cycles);
    j["t2_pulse_infinite"] = infinite;
    j["m_infinity"] = m.m_infinity;
    j["cycle_time_s"] = m.cycle_time;
    j["c"] = {{"I", m.c_i}, {"x", m.c_x}, {"y", m.c_y}, {"z", m.c_z}};
    j["fit_overlap"] = fit.fit_overlap;
    j["envelope_overlap"] = fit.envelope_overlap;
    j["max_off_diagonal"] = fit.max_off_diagonal;
    j["probs"] = std::move(probs);
    return j;
}

}  // namespace cpmgoc::io
