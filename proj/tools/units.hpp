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

#ifndef CPMGOC_TOOLS_UNITS_HPP
#define CPMGOC_TOOLS_UNITS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace cpmgoc::cli {

class UnitError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

enum class Quantity { frequency, time, angle, plain };

/// "5kHz" -> 5000 (Hz); bare numbers are Hz.
double parse_frequency_hz(const std::string &text);
/// "1ms" -> 1e-3 (s); bare numbers are seconds.
double parse_time_s(const std::string &text);
/// "90deg" -> pi/2; bare numbers are degrees.
double parse_angle_rad(const std::string &text);
double parse_value(const std::string &text, Quantity q);

/// "lo:hi:count" (inclusive, evenly spaced) or "a,b,c" or a single value.
std::vector<double> parse_values(const std::string &text, Quantity q);
std::vector<int> parse_int_list(const std::string &text);

}  // namespace cpmgoc::cli

#endif  // CPMGOC_TOOLS_UNITS_HPP
