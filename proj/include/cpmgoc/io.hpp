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

#ifndef CPMGOC_IO_HPP
#define CPMGOC_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "cpmgoc/channel.hpp"
#include "cpmgoc/echo_train.hpp"
#include "cpmgoc/ladder.hpp"
#include "cpmgoc/objective.hpp"

namespace cpmgoc::io {

using Json = nlohmann::ordered_json;

/// Malformed or unreadable input file.
class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

Json waveform_to_json(const PulseWaveform &p);
/// Throws ParseError on missing fields or if a step exceeds a_max.
PulseWaveform waveform_from_json(const Json &j);

/// Settings a CSV waveform does not carry.
struct CsvWaveformOptions {
    double a_max = angular(5000.0);
    double pre_delay = 0.0;
    double post_delay = 0.0;
    /// Used only for single-row files.
    double dt = 0.0;
};

/// `time_s,amp_hz,phase_deg`, time_s is the start of each step after the pre-delay.
void write_waveform_csv(std::ostream &out, const PulseWaveform &p);
PulseWaveform read_waveform_csv(std::istream &in, const CsvWaveformOptions &opts);

Json distribution_to_json(const EnsembleDistribution &d);
EnsembleDistribution distribution_from_json(const Json &j);

/// JSON or CSV by extension.
PulseWaveform load_waveform(const std::filesystem::path &path, const CsvWaveformOptions &csv = {});
void save_waveform(const std::filesystem::path &path, const PulseWaveform &p);
EnsembleDistribution load_distribution(const std::filesystem::path &path);

Json read_json_file(const std::filesystem::path &path);
void write_json_file(const std::filesystem::path &path, const Json &j);

void write_trajectory_csv(std::ostream &out, const std::vector<TrajectorySample> &samples);
void write_criteria_csv(std::ostream &out, const std::vector<CriteriaRow> &rows, const std::string &label = {});
void write_ladder_csv(std::ostream &out, const LadderResult &l);
/// One row per echo and isochromat: `echo,offset_hz,rf_scale,mx,my,mz`.
void write_train_csv(std::ostream &out, const EchoTrainResult &r, const EnsembleDistribution &d);
/// `echo,signal` from the ensemble average.
void write_signal_csv(std::ostream &out, const EchoTrainResult &r);
/// `offset_hz,rf_scale,echo,visibility`.
void write_sweep_csv(std::ostream &out, const std::vector<VisibilityRow> &rows, const std::vector<int> &echoes);
Json trace_record_to_json(const TraceRecord &t);
void write_trace_jsonl(std::ostream &out, const std::vector<TraceRecord> &trace);

/// Infinite T2 is written as null with "t2_pulse_infinite": true.
Json channel_fit_to_json(const PauliChannelFit &fit);
Json superoperator_to_json(const SuperoperatorMatrix &s);

/// Round-trip decimal for CSV cells.
std::string format_number(double v);

}  // namespace cpmgoc::io

#endif  // CPMGOC_IO_HPP
