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

#include "cli/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>

#include "cli/report.hpp"
#include "sqn/calibrate.hpp"
#include "sqn/errors.hpp"
#include "sqn/noise.hpp"
#include "sqn/optimize.hpp"

namespace sqn::cli {
namespace {

void with_output(const std::string& path, std::ostream& console, const std::function<void(std::ostream&)>& write) {
    if (path.empty() || path == "-") {
        write(console);
        console.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write(out);
    out.flush();
    if (!out) throw IoError("write to '" + path + "' failed");
}

Table read_table(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    try {
        return read_csv(in);
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what(), e.line());
    }
}

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
}

std::string path_in(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

void write_json(const std::string& path, std::ostream& console, const nlohmann::ordered_json& j) {
    with_output(path, console, [&](std::ostream& out) { out << j.dump(2) << '\n'; });
}

nlohmann::ordered_json check_json(const HeadlineCheck& c) {
    nlohmann::ordered_json j;
    j["name"] = c.name;
    j["expected_ratio"] = c.expected_ratio;
    j["ratio_tolerance"] = c.ratio_tolerance;
    j["computed_ratio"] = c.computed.ratio;
    j["expected_db"] = c.expected_db;
    j["db_tolerance"] = c.db_tolerance;
    j["computed_db"] = c.computed.db;
    j["u_star"] = c.computed.u_star;
    j["z_star"] = c.computed.z_star;
    j["v_dc_star_uV"] = 1e6 * c.v_dc_star;
    j["v_ac_uV"] = 1e6 * c.v_ac;
    j["pass"] = c.pass();
    return j;
}

Table checks_table(const std::vector<HeadlineCheck>& checks) {
    Table t;
    t.comments = {" squeezenoise headline optima",
                  " rows: "};
    for (std::size_t i = 0; i < checks.size(); ++i) t.comments[1] += (i ? ", " : "") + checks[i].name;
    t.columns = {"expected_ratio", "computed_ratio", "expected_db", "computed_db", "u_star", "z_star", "pass"};
    for (const auto& c : checks) {
        t.rows.push_back({c.expected_ratio, c.computed.ratio, c.expected_db, c.computed.db, c.computed.u_star,
                          c.computed.z_star, c.pass() ? 1.0 : 0.0});
    }
    return t;
}

}  // namespace

bool HeadlineCheck::ratio_ok() const { return std::abs(computed.ratio - expected_ratio) <= ratio_tolerance; }
bool HeadlineCheck::db_ok() const { return std::abs(computed.db - expected_db) <= db_tolerance; }

RunConfig fig2_config() {
    RunConfig c;
    c.command = Command::reproduce;
    apply_settings(c, {{"resistance_ohm", "70"}, {"temp_mk", "28"}, {"freq_ghz", "7.2"}, {"p", "1"},
                       {"vac_uv", "46"}, {"sweep_axis", "dc_bias"}, {"sweep_units", "uV"},
                       {"sweep_lo", "-120"}, {"sweep_hi", "120"}, {"sweep_points", "481"}});
    return c;
}

RunConfig fig3_config() {
    RunConfig c = fig2_config();
    apply_settings(c, {{"p", "2"}, {"vac_uv", "36"}});
    return c;
}

HeadlineCheck t0_check(int p) {
    HeadlineCheck c;
    c.ratio_tolerance = 0.01;
    if (p == 1) {
        c.name = "t0_p1";
        c.expected_ratio = 0.62;
        c.expected_db = -2.09;
        c.computed = optimize_squeeze(0.0, 1, {0.0, 3.0}, {0.0, 3.0});
    } else {
        c.name = "t0_p2";
        c.expected_ratio = 0.73;
        c.expected_db = -1.37;
        c.computed = optimize_squeeze(0.0, 2, {-1.0, 1.0}, {0.0, 3.0});
    }
    return c;
}

HeadlineCheck experimental_check(const RunConfig& fig, double expected_ratio, double expected_db) {
    HeadlineCheck c;
    c.name = fig.drive.harmonic_p == 1 ? "fig2_p1" : "fig3_p2";
    c.expected_ratio = expected_ratio;
    c.expected_db = expected_db;
    c.ratio_tolerance = 0.02;
    const SweepSpec spec = sweep_spec_of(fig);
    DriveParams lo = fig.drive, hi = fig.drive;
    lo.dc_bias = spec.lo;
    hi.dc_bias = spec.hi;
    const ReducedPoint a = to_reduced(fig.junction, lo);
    const ReducedPoint b = to_reduced(fig.junction, hi);
    c.computed = optimize_bias_at_fixed_drive(a.z, a.theta_T, a.p, {a.u, b.u});
    c.v_dc_star = reduced_to_dc_volts(c.computed.u_star, fig.drive.measurement_frequency);
    c.v_ac = fig.drive.ac_amplitude;
    return c;
}

SweepSpec sweep_spec_of(const RunConfig& config) {
    if (!config.sweep) throw ValidationError("sweep", "no sweep configured");
    SweepSpec spec = *config.sweep;
    spec.junction = config.junction;
    spec.drive = config.drive;
    if (spec.units == SweepUnits::volts) {
        spec.lo *= 1e-6;
        spec.hi *= 1e-6;
    }
    spec.validate();
    return spec;
}

Table sweep_table(const RunConfig& config, const std::vector<SweepPoint>& points, bool with_kelvin) {
    const SweepSpec spec = sweep_spec_of(config);
    const bool volts = spec.units == SweepUnits::volts;
    const double t_vac = vacuum_temperature(config.drive.measurement_frequency);

    Table t;
    t.comments.push_back(" squeezenoise sweep");
    t.comments.push_back(std::string(" units: abscissa = ") +
                         (spec.axis == SweepAxis::dc_bias ? "dc bias" : "ac amplitude") +
                         (volts ? " in uV" : " in reduced units") +
                         "; S..vacuum_reference in hbar*omega/R; squeeze_ratio dimensionless; squeeze_db in dB" +
                         (with_kelvin ? "; T_* in kelvin" : ""));
    for (const auto& [k, v] : config.applied) t.comments.push_back(" config: " + k + " = " + v);
    t.columns = {"abscissa", "S", "S_tilde", "var_A", "var_B", "min_quadrature",
                 "squeeze_ratio", "squeeze_db", "vacuum_reference"};
    if (with_kelvin) {
        for (const char* c : {"T_S", "T_S_tilde", "T_var_A", "T_var_B", "T_vacuum"}) t.columns.emplace_back(c);
    }
    // Abscissae in the units the user gave, recomputed from the configured
    // range so they don't pick up volt/microvolt rounding.
    const SweepSpec& given = *config.sweep;
    const auto last = static_cast<double>(points.size() - 1);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& sp = points[i];
        const auto& r = sp.result;
        const double x = i + 1 == points.size() ? given.hi
                                                : given.lo + (given.hi - given.lo) * static_cast<double>(i) / last;
        std::vector<double> row{x,
                                sp.s_undriven, r.s_tilde, r.var_a, r.var_b, r.min_quadrature,
                                r.squeeze_ratio, r.squeeze_db, sp.vacuum};
        if (with_kelvin) {
            for (double v : {sp.s_undriven, r.s_tilde, r.var_a, r.var_b, sp.vacuum}) row.push_back(t_vac * v);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

void cmd_sweep(const RunConfig& config, std::ostream& console) {
    validate_for_command(config);
    const auto points = sweep(sweep_spec_of(config));
    const Table table = sweep_table(config, points, false);
    if (config.format == OutputFormat::csv) {
        with_output(config.output_path, console, [&](std::ostream& out) { write_csv(out, table); });
        return;
    }
    nlohmann::ordered_json j;
    j["config"] = config_json(config);
    j["units"] = table.comments[1].substr(8);
    j["columns"] = table.columns;
    j["rows"] = table.rows;
    write_json(config.output_path, console, j);
}

void cmd_optimize(const RunConfig& config, std::ostream& console) {
    validate_for_command(config);
    const ReducedPoint origin = to_reduced(config.junction, config.drive);
    OptimizeOptions options;
    options.grid_u = options.grid_z = config.grid;
    const SqueezeOptimum opt =
        optimize_squeeze(origin.theta_T, origin.p, config.bounds_u, config.bounds_z, options);

    nlohmann::ordered_json j = to_json(opt);
    j["v_dc_star_uV"] = 1e6 * reduced_to_dc_volts(opt.u_star, config.drive.measurement_frequency);
    j["v_ac_star_uV"] = 1e6 * reduced_to_ac_volts(opt.z_star, config.drive.measurement_frequency, origin.p);
    nlohmann::ordered_json input;
    input["theta_T"] = origin.theta_T;
    input["p"] = origin.p;
    input["bounds_u"] = {config.bounds_u.lo, config.bounds_u.hi};
    input["bounds_z"] = {config.bounds_z.lo, config.bounds_z.hi};
    input["grid"] = config.grid;
    input["electron_temperature_K"] = config.junction.electron_temperature;
    input["measurement_frequency_Hz"] = config.drive.measurement_frequency;
    input["config"] = config_json(config);
    j["input"] = std::move(input);
    write_json(config.output_path, console, j);
}

void cmd_calibrate(const RunConfig& config, std::ostream& console) {
    validate_for_command(config);
    std::optional<CalibrationFit> fit;
    if (!config.input_path.empty()) {
        const NoiseCurve curve = curve_from_table(read_table(config.input_path), config.drive.measurement_frequency,
                                                  config.junction.resistance);
        fit = fit_undriven(curve);
    } else if (!config.prior_path.empty()) {
        fit = calibration_from_json(read_json(config.prior_path));
    }
    if (!config.driven_path.empty()) {
        const NoiseCurve driven = curve_from_table(read_table(config.driven_path),
                                                   config.drive.measurement_frequency, config.junction.resistance);
        fit = fit_drive_amplitude(driven, *fit, 2.0 * driven.frequency / config.drive.harmonic_p);
    }
    write_json(config.output_path, console, to_json(*fit));
}

void cmd_synth(const RunConfig& config, std::ostream& console) {
    validate_for_command(config);
    SynthesisParams params;
    params.junction = config.junction;
    params.drive = config.drive;
    params.gain = config.gain;
    params.amp_noise = config.amp_noise;
    params.driven = config.synth_driven;
    const double photon = reduced_to_dc_volts(1.0, config.drive.measurement_frequency);
    std::vector<double> biases(config.synth_points);
    for (std::size_t i = 0; i < biases.size(); ++i) {
        biases[i] = photon * config.synth_reach_u *
                    (-1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(biases.size() - 1));
    }
    const NoiseCurve curve = synthesize_curve(params, biases, config.noise_level, config.seed);
    with_output(config.output_path, console, [&](std::ostream& out) { write_csv(out, table_from_curve(curve)); });
}

bool cmd_reproduce(const RunConfig& config, std::ostream& console) {
    validate_for_command(config);
    std::filesystem::create_directories(config.out_dir);
    std::vector<HeadlineCheck> checks;

    auto figure = [&](const RunConfig& fig, const std::string& stem, double ratio, double db) {
        const auto points = sweep(sweep_spec_of(fig));
        with_output(path_in(config.out_dir, stem + ".csv"), console,
                    [&](std::ostream& out) { write_csv(out, sweep_table(fig, points, true)); });
        checks.push_back(experimental_check(fig, ratio, db));
    };

    if (config.target == "fig2") {
        figure(fig2_config(), "fig2", 0.74, -1.31);
    } else if (config.target == "fig3") {
        figure(fig3_config(), "fig3", 0.82, -0.86);
    } else if (config.target == "t0_optima") {
        checks.push_back(t0_check(1));
        checks.push_back(t0_check(2));
    } else {
        checks.push_back(t0_check(1));
        checks.push_back(t0_check(2));
        checks.push_back(experimental_check(fig2_config(), 0.74, -1.31));
        checks.push_back(experimental_check(fig3_config(), 0.82, -0.86));
    }
    if (config.target == "t0_optima" || config.target == "table_of_optima") {
        with_output(path_in(config.out_dir, config.target + ".csv"), console,
                    [&](std::ostream& out) { write_csv(out, checks_table(checks)); });
    }

    bool all = true;
    nlohmann::ordered_json summary;
    summary["target"] = config.target;
    summary["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
        summary["checks"].push_back(check_json(c));
        all = all && c.pass();
    }
    summary["all_pass"] = all;
    write_json(path_in(config.out_dir, config.target + "_summary.json"), console, summary);
    for (const auto& c : checks) {
        console << (c.pass() ? "PASS " : "FAIL ") << c.name << ": ratio " << c.computed.ratio << " (expected "
                << c.expected_ratio << " +- " << c.ratio_tolerance << "), " << c.computed.db << " dB\n";
    }
    return all;
}

}  // namespace sqn::cli
