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

#include "cli/app.hpp"

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "sqn/calibrate.hpp"
#include "sqn/errors.hpp"

namespace sqn::cli {
namespace {

struct FlagBinding {
    const char* flag;
    const char* key;
    const char* help;
};

constexpr FlagBinding kFlags[] = {
    {"--output", "output", "Output file ('-' for stdout)"},
    {"--format", "format", "csv or json"},
    {"--vdc-uv", "vdc_uv", "DC bias in microvolts"},
    {"--vac-uv", "vac_uv", "AC drive amplitude in microvolts"},
    {"--freq-ghz", "freq_ghz", "Measurement frequency in GHz"},
    {"--temp-mk", "temp_mk", "Electron temperature in millikelvin"},
    {"--resistance-ohm", "resistance_ohm", "Junction resistance in ohms"},
    {"--p", "p", "Drive harmonic: 1 (w0 = 2w) or 2 (w0 = w)"},
    {"--input", "input", "Undriven noise curve CSV (calibrate)"},
    {"--driven", "driven", "Phase-averaged driven noise curve CSV (calibrate)"},
    {"--prior", "prior", "Calibration JSON supplying G, S_amp, T (calibrate)"},
    {"--out-dir", "out_dir", "Directory for reproduce artifacts"},
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Shot-noise squeezing of a dc+ac biased tunnel junction"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "Flat key = value configuration file");
    std::vector<std::string> flag_values(std::size(kFlags));
    std::vector<CLI::Option*> flag_options;
    for (std::size_t i = 0; i < std::size(kFlags); ++i) {
        flag_options.push_back(app.add_option(kFlags[i].flag, flag_values[i], kFlags[i].help));
    }
    std::vector<std::string> extra;
    app.add_option("--set", extra, "Any configuration key as key=value (repeatable)");

    auto* sweep = app.add_subcommand("sweep", "Noise and quadrature variances along a bias or drive sweep");
    auto* optimize = app.add_subcommand("optimize", "Optimal squeezing over bias and drive");
    auto* calibrate = app.add_subcommand("calibrate", "Fit G, S_amp, T (and V_ac) to measured curves");
    auto* reproduce = app.add_subcommand("reproduce", "Regenerate figure data and headline optima");
    auto* synth = app.add_subcommand("synth", "Write a synthetic noise-vs-bias curve");
    std::string target;
    reproduce->add_option("target", target, "fig2, fig3, t0_optima or table_of_optima")->required();
    for (auto* sub : {sweep, optimize, calibrate, reproduce, synth}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInvalidInput;
    }

    try {
        RunConfig config;
        if (*sweep) config.command = Command::sweep;
        else if (*optimize) config.command = Command::optimize;
        else if (*calibrate) config.command = Command::calibrate;
        else if (*reproduce) config.command = Command::reproduce;
        else config.command = Command::synth;

        KeyValues settings;
        if (!config_path.empty()) settings = read_config_file(config_path);
        for (const auto& kv : extra) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw ValidationError("--set", "expected key=value, got '" + kv + "'");
            settings.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
        }
        for (std::size_t i = 0; i < flag_options.size(); ++i) {
            if (flag_options[i]->count() > 0) settings.emplace_back(kFlags[i].key, flag_values[i]);
        }
        if (*reproduce) settings.emplace_back("target", target);
        apply_settings(config, settings);

        switch (config.command) {
            case Command::sweep: cmd_sweep(config, out); break;
            case Command::optimize: cmd_optimize(config, out); break;
            case Command::calibrate: cmd_calibrate(config, out); break;
            case Command::synth: cmd_synth(config, out); break;
            case Command::reproduce:
                if (!cmd_reproduce(config, out)) {
                    err << "reproduce: one or more headline checks failed\n";
                    return kNumericalFailure;
                }
                break;
        }
        return kOk;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return kIoFailure;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "I/O error: " << e.what() << '\n';
        return kIoFailure;
    } catch (const FitError& e) {
        err << "fit failed: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const RangeError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    }
}

}  // namespace sqn::cli
