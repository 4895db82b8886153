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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

namespace cpmgoc {
namespace {

namespace fs = std::filesystem;

fs::path scratch_dir(const std::string &name) {
    fs::path d = fs::temp_directory_path() / ("cpmgoc_io_test_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string fmt_row(const std::string &head, double v, const std::string &tail) {
    return head + io::format_number(v) + tail;
}

TEST(WaveformJson, RoundTripIsLossless) {
    PulseWaveform p = random_waveform({.dt = 10e-6, .steps = 100}, 17);
    PulseWaveform back = io::waveform_from_json(io::Json::parse(io::waveform_to_json(p).dump()));
    EXPECT_EQ(back, p);
    fs::path f = scratch_dir("rt") / "w.json";
    io::save_waveform(f, p);
    EXPECT_EQ(io::load_waveform(f), p);
}

TEST(WaveformJson, RejectsBadInput) {
    io::Json j = io::waveform_to_json(hard_pulse(std::numbers::pi, 0.0, angular(5000)));
    io::Json missing = j;
    missing.erase("dt_s");
    EXPECT_THROW(io::waveform_from_json(missing), io::ParseError);
    io::Json over = j;
    over["steps"][0]["amp_rad_s"] = 2.0 * j["a_max_rad_s"].get<double>();
    EXPECT_THROW(io::waveform_from_json(over), io::ParseError);
    io::Json negative = j;
    negative["dt_s"] = -1.0;
    EXPECT_THROW(io::waveform_from_json(negative), io::ParseError);
    EXPECT_THROW(io::load_waveform("/nonexistent/w.json"), io::ParseError);
}

TEST(WaveformCsv, RoundTrip) {
    PulseWaveform p = random_waveform({.dt = 10e-6, .steps = 30, .pre_delay = 6e-6, .post_delay = 6e-6}, 2);
    std::stringstream ss;
    io::write_waveform_csv(ss, p);
    EXPECT_EQ(ss.str().substr(0, 23), "time_s,amp_hz,phase_deg");
    PulseWaveform back = io::read_waveform_csv(ss, {.a_max = p.a_max(), .pre_delay = 6e-6, .post_delay = 6e-6});
    ASSERT_EQ(back.size(), p.size());
    EXPECT_NEAR(back.dt(), p.dt(), 1e-18);
    for (std::size_t j = 0; j < p.size(); ++j) {
        EXPECT_NEAR(back.step(j).amplitude, p.step(j).amplitude, 1e-9);
        EXPECT_NEAR(std::remainder(back.step(j).phase - p.step(j).phase, 2 * std::numbers::pi), 0.0, 1e-12);
    }
}

TEST(WaveformCsv, Errors) {
    auto read = [](const std::string &text, io::CsvWaveformOptions o = {}) {
        std::istringstream in(text);
        return io::read_waveform_csv(in, o);
    };
    EXPECT_THROW(read(""), io::ParseError);
    EXPECT_THROW(read("t,a,p\n0,1,2\n"), io::ParseError);
    EXPECT_THROW(read("time_s,amp_hz,phase_deg\n"), io::ParseError);
    EXPECT_THROW(read("time_s,amp_hz,phase_deg\n0,100,abc\n1e-6,100,0\n"), io::ParseError);
    EXPECT_THROW(read("time_s,amp_hz,phase_deg\n0,100,0\n1e-6,100,0\n3e-6,100,0\n"), io::ParseError);
    EXPECT_THROW(read("time_s,amp_hz,phase_deg\n0,9000,0\n1e-6,100,0\n"), io::ParseError);
    EXPECT_THROW(read("time_s,amp_hz,phase_deg\n0,100,0\n"), io::ParseError);
    PulseWaveform single = read("time_s,amp_hz,phase_deg\n0,100,90\n", {.dt = 2e-6});
    EXPECT_EQ(single.size(), 1u);
    EXPECT_NEAR(single.step(0).phase, std::numbers::pi / 2, 1e-15);
    EXPECT_NEAR(single.step(0).amplitude, angular(100), 1e-9);
}

TEST(DistributionJson, RoundTrip) {
    std::vector<double> scales{0.9, 1.0, 1.1};
    EnsembleDistribution d = uniform_ladder_distribution(angular(2000), angular(250), scales, 0.05, 3);
    EnsembleDistribution back = io::distribution_from_json(io::Json::parse(io::distribution_to_json(d).dump()));
    ASSERT_EQ(back.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        EXPECT_NEAR(back[i].delta_omega, d[i].delta_omega, 1e-9);
        EXPECT_EQ(back[i].omega1_scale, d[i].omega1_scale);
        EXPECT_EQ(back[i].weight, d[i].weight);
    }
    EXPECT_THROW(io::distribution_from_json(io::Json::parse(R"({"points":[{"offset_hz":0,"rf_scale":1,"weight":0.5}]})")),
                 io::ParseError);
}

TEST(ChannelFitJson, InfiniteT2IsNull) {
    PauliChannelFit fit;
    fit.model.t2_pulse = std::numeric_limits<double>::infinity();
    fit.model.t2_pulse_cycles = std::numeric_limits<double>::infinity();
    fit.model.m_infinity = 1.0;
    fit.per_cycle_probs = {{1, 0, 0, 0}, {1, 0, 0, 0}};
    io::Json j = io::channel_fit_to_json(fit);
    EXPECT_TRUE(j["t2_pulse_s"].is_null());
    EXPECT_TRUE(j["t2_pulse_infinite"].get<bool>());
    EXPECT_EQ(j["probs"][1][0].get<int>(), 2);
    EXPECT_NO_THROW(io::Json::parse(j.dump()));
}

TEST(Csv, LadderAndSweepLayouts) {
    LadderResult l;
    LadderRung r;
    r.index = 2;
    r.half_bandwidth = 1000.0;
    r.distribution = EnsembleDistribution({{0.0, 1.0, 0.5}, {1.0, 1.0, 0.5}});
    r.avg_fidelity = 0.5;
    l.rungs.push_back(r);
    std::ostringstream ladder;
    io::write_ladder_csv(ladder, l);
    EXPECT_EQ(ladder.str(), fmt_row("rung,half_bandwidth_hz,n_points,avg_fidelity\n2,", hertz(1000.0), ",2,0.5\n"));

    std::ostringstream sweep;
    io::write_sweep_csv(sweep, {{-kTwoPi * 0.5, 1.0, {0.25, 0.5}}}, {1, 500});
    EXPECT_EQ(sweep.str(), "offset_hz,rf_scale,echo,visibility\n-0.5,1,1,0.25\n-0.5,1,500,0.5\n");

    std::ostringstream trace;
    io::write_trace_jsonl(trace, {{0, 0.5, 1.0}, {1, 0.75, 1.5}});
    EXPECT_EQ(trace.str(), "{\"iter\":0,\"fidelity\":0.5,\"step_size\":1.0}\n{\"iter\":1,\"fidelity\":0.75,\"step_size\":1.5}\n");
}

TEST(FormatNumber, RoundTrips) {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 123456789.123}) {
        EXPECT_EQ(std::stod(io::format_number(v)), v);
    }
}

}  // namespace
}  // namespace cpmgoc
