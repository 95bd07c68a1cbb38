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

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sqn/calibrate.hpp"

namespace sqn::cli {

/// A CSV file: '#' comment lines (kept verbatim, without the '#'), one
/// header row of column names, then numeric rows.
struct Table {
    std::vector<std::string> comments;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

/// 17 significant digits; values round-trip through double exactly.
std::string format_number(double v);

void write_csv(std::ostream& out, const Table& table);

/// Throws InputError with the offending line number.
Table read_csv(std::istream& in);

/// NoiseCurve from columns bias_V, measured. Frequency and resistance come
/// from `# frequency_hz = ...` / `# resistance_ohm = ...` comments when
/// present, otherwise from the defaults.
NoiseCurve curve_from_table(const Table& table, double default_frequency, double default_resistance);
Table table_from_curve(const NoiseCurve& curve);

}  // namespace sqn::cli
