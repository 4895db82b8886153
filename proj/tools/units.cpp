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

#include "units.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include "cpmgoc/pulse.hpp"

namespace cpmgoc::cli {

namespace {

std::string trim(const std::string &s) {
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

// Splits "12.5kHz" into 12.5 and "khz".
std::pair<double, std::string> split_number(const std::string &raw) {
    std::string text = trim(raw);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception &) {
        throw UnitError("not a number: \"" + raw + "\"");
    }
    if (!std::isfinite(v)) {
        throw UnitError("not finite: \"" + raw + "\"");
    }
    std::string unit = trim(text.substr(used));
    for (auto &c : unit) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return {v, unit};
}

std::vector<std::string> split(const std::string &text, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(text);
    while (std::getline(ss, cell, sep)) {
        out.push_back(cell);
    }
    return out;
}

}  // namespace

double parse_frequency_hz(const std::string &text) {
    auto [v, unit] = split_number(text);
    if (unit.empty() || unit == "hz") {
        return v;
    }
    if (unit == "khz") {
        return v * 1e3;
    }
    if (unit == "mhz") {
        return v * 1e6;
    }
    throw UnitError("unknown frequency unit in \"" + text + "\"");
}

double parse_time_s(const std::string &text) {
    auto [v, unit] = split_number(text);
    if (unit.empty() || unit == "s") {
        return v;
    }
    if (unit == "ms") {
        return v * 1e-3;
    }
    if (unit == "us" || unit == "\xc2\xb5s") {
        return v * 1e-6;
    }
    if (unit == "ns") {
        return v * 1e-9;
    }
    throw UnitError("unknown time unit in \"" + text + "\"");
}

double parse_angle_rad(const std::string &text) {
    auto [v, unit] = split_number(text);
    if (unit.empty() || unit == "deg") {
        return v * std::numbers::pi / 180.0;
    }
    if (unit == "rad") {
        return v;
    }
    throw UnitError("unknown angle unit in \"" + text + "\"");
}

double parse_value(const std::string &text, Quantity q) {
    switch (q) {
        case Quantity::frequency: return parse_frequency_hz(text);
        case Quantity::time: return parse_time_s(text);
        case Quantity::angle: return parse_angle_rad(text);
        case Quantity::plain: {
            auto [v, unit] = split_number(text);
            if (!unit.empty()) {
                throw UnitError("unexpected unit in \"" + text + "\"");
            }
            return v;
        }
    }
    throw UnitError("unknown quantity");
}

std::vector<double> parse_values(const std::string &text, Quantity q) {
    if (text.find(':') != std::string::npos) {
        auto parts = split(text, ':');
        if (parts.size() != 3) {
            throw UnitError("range must be lo:hi:count, got \"" + text + "\"");
        }
        double count = parse_value(parts[2], Quantity::plain);
        if (count < 1 || count != std::floor(count)) {
            throw UnitError("range count must be a positive integer");
        }
        return linspace(parse_value(parts[0], q), parse_value(parts[1], q), static_cast<std::size_t>(count));
    }
    std::vector<double> out;
    for (const auto &cell : split(text, ',')) {
        out.push_back(parse_value(cell, q));
    }
    if (out.empty()) {
        throw UnitError("empty value list");
    }
    return out;
}

std::vector<int> parse_int_list(const std::string &text) {
    std::vector<int> out;
    for (const auto &cell : split(text, ',')) {
        double v = parse_value(cell, Quantity::plain);
        if (v != std::floor(v)) {
            throw UnitError("expected integers, got \"" + text + "\"");
        }
        out.push_back(static_cast<int>(v));
    }
    if (out.empty()) {
        throw UnitError("empty integer list");
    }
    return out;
}

}  // namespace cpmgoc::cli
