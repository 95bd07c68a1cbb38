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

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sqn/optimize.hpp"

namespace sqn::cli {

/// Exit codes of the `squeeze` tool.
enum ExitCode : int { kOk = 0, kInvalidInput = 2, kIoFailure = 3, kNumericalFailure = 4 };

/// Malformed input file; carries the 1-based line number when known.
class InputError : public std::runtime_error {
public:
    InputError(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Command { sweep, optimize, calibrate, reproduce, synth };
enum class OutputFormat { csv, json };

struct RunConfig {
    Command command = Command::sweep;
    JunctionParams junction{70.0, 0.028};
    DriveParams drive;
    std::optional<SweepSpec> sweep;
    Interval bounds_u{-4.0, 4.0};
    Interval bounds_z{0.0, 4.0};
    int grid = 201;
    std::string output_path = "-";
    OutputFormat format = OutputFormat::csv;

    // calibrate
    std::string input_path;
    std::string driven_path;
    std::string prior_path;

    // reproduce
    std::string target;
    std::string out_dir = ".";

    // synth
    double gain = 1e7;
    double amp_noise = 3.0;  // K
    double noise_level = 0.0;
    std::uint64_t seed = 0;
    bool synth_driven = false;
    std::size_t synth_points = 121;
    double synth_reach_u = 3.0;

    /// Key/value pairs actually applied, in application order. Echoed into
    /// output headers so every artifact records how it was produced.
    std::vector<std::pair<std::string, std::string>> applied;
};

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Parses `key = value` lines; '#' starts a comment, blank lines are skipped.
KeyValues parse_config_text(const std::string& text);
KeyValues read_config_file(const std::string& path);

/// Applies settings in order, later keys overriding earlier ones. Unknown
/// keys and unparsable values throw ValidationError naming the key.
void apply_settings(RunConfig& config, const KeyValues& settings);

/// Known keys, for help text.
const std::vector<std::string>& known_keys();

/// Checks that the sub-configuration needed by `config.command` is present.
void validate_for_command(const RunConfig& config);

}  // namespace sqn::cli
