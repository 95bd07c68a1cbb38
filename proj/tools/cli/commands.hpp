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

#include <json.hpp>

#include "cli/config.hpp"
#include "cli/csv.hpp"

namespace sqn::cli {

/// One headline number checked by `reproduce`.
struct HeadlineCheck {
    std::string name;
    double expected_ratio = 0.0;
    double expected_db = 0.0;
    double ratio_tolerance = 0.0;
    double db_tolerance = 0.05;
    SqueezeOptimum computed;
    double v_dc_star = 0.0;  // V
    double v_ac = 0.0;       // V

    bool ratio_ok() const;
    bool db_ok() const;
    bool pass() const { return ratio_ok() && db_ok(); }
};

/// Canned figure configurations.
RunConfig fig2_config();
RunConfig fig3_config();

HeadlineCheck t0_check(int p);
HeadlineCheck experimental_check(const RunConfig& fig_config, double expected_ratio, double expected_db);

/// Sweep table with the standard columns, plus noise temperatures in kelvin
/// when `with_kelvin` is set.
Table sweep_table(const RunConfig& config, const std::vector<SweepPoint>& points, bool with_kelvin);

SweepSpec sweep_spec_of(const RunConfig& config);

// Each command writes its artifact and throws on failure; the caller maps
// exceptions to exit codes. `console` receives output for path "-".
void cmd_sweep(const RunConfig& config, std::ostream& console);
void cmd_optimize(const RunConfig& config, std::ostream& console);
void cmd_calibrate(const RunConfig& config, std::ostream& console);
void cmd_synth(const RunConfig& config, std::ostream& console);

/// Returns true when every headline check passed.
bool cmd_reproduce(const RunConfig& config, std::ostream& console);

}  // namespace sqn::cli
