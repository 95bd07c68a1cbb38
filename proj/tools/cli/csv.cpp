// Copyright 2026 The squeezenoise Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "cli/config.hpp"

namespace sqn::cli {
namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_cell(const std::string& cell, int line) {
    const char* begin = cell.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') throw InputError("not a number: '" + cell + "'", line);
    return v;
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

}  // namespace

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(std::ostream& out, const Table& table) {
    for (const auto& c : table.comments) out << '#' << c << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
        out << '\n';
    }
}

Table read_csv(std::istream& in) {
    Table t;
    std::string line;
    int number = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++number;
        line = strip_cr(line);
        if (!line.empty() && line[0] == '#') {
            t.comments.push_back(line.substr(1));
            continue;
        }
        if (line.empty()) continue;
        auto cells = split(line);
        if (!have_header) {
            t.columns = std::move(cells);
            have_header = true;
            continue;
        }
        if (cells.size() != t.columns.size()) {
            throw InputError("expected " + std::to_string(t.columns.size()) + " fields, got " +
                                 std::to_string(cells.size()),
                             number);
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) row.push_back(parse_cell(c, number));
        t.rows.push_back(std::move(row));
    }
    if (!have_header) throw InputError("missing header row", number);
    return t;
}

NoiseCurve curve_from_table(const Table& table, double default_frequency, double default_resistance) {
    NoiseCurve curve;
    curve.frequency = default_frequency;
    curve.resistance = default_resistance;
    for (const auto& c : table.comments) {
        const auto eq = c.find('=');
        if (eq == std::string::npos) continue;
        std::string key = c.substr(0, eq);
        key.erase(std::remove(key.begin(), key.end(), ' '), key.end());
        const std::string value = c.substr(eq + 1);
        if (key == "frequency_hz") curve.frequency = parse_cell(value.substr(value.find_first_not_of(' ')), 0);
        if (key == "resistance_ohm") curve.resistance = parse_cell(value.substr(value.find_first_not_of(' ')), 0);
    }
    const auto col = [&](const char* name) {
        const auto it = std::find(table.columns.begin(), table.columns.end(), name);
        if (it == table.columns.end()) throw InputError(std::string("missing column '") + name + "'", 1);
        return static_cast<std::size_t>(it - table.columns.begin());
    };
    const std::size_t bias = col("bias_V");
    const std::size_t measured = col("measured");
    for (const auto& row : table.rows) curve.points.push_back({row[bias], row[measured]});
    return curve;
}

Table table_from_curve(const NoiseCurve& curve) {
    Table t;
    t.comments = {" squeezenoise noise curve",
                  " frequency_hz = " + format_number(curve.frequency),
                  " resistance_ohm = " + format_number(curve.resistance),
                  " units: bias_V in volts; measured in kelvin or detector units"};
    t.columns = {"bias_V", "measured"};
    for (const auto& pt : curve.points) t.rows.push_back({pt.bias, pt.measured});
    return t;
}

}  // namespace sqn::cli
