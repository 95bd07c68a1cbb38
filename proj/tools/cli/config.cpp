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

#include "cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "sqn/calibrate.hpp"
#include "sqn/errors.hpp"

namespace sqn::cli {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ValidationError(key, "expected a number, got '" + v + "'");
    }
}

long long to_integer(const std::string& key, const std::string& v) {
    long long out = 0;
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end) throw ValidationError(key, "expected an integer, got '" + v + "'");
    return out;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw ValidationError(key, "expected a boolean, got '" + v + "'");
}

SweepSpec& sweep_of(RunConfig& c) {
    if (!c.sweep) {
        c.sweep.emplace();
        c.sweep->points = 401;
    }
    return *c.sweep;
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

const std::vector<std::pair<std::string, Setter>>& setters() {
    static const std::vector<std::pair<std::string, Setter>> table = {
        {"resistance_ohm", [](RunConfig& c, auto& k, auto& v) { c.junction.resistance = to_double(k, v); }},
        {"temp_mk", [](RunConfig& c, auto& k, auto& v) { c.junction.electron_temperature = 1e-3 * to_double(k, v); }},
        {"freq_ghz", [](RunConfig& c, auto& k, auto& v) { c.drive.measurement_frequency = 1e9 * to_double(k, v); }},
        {"p", [](RunConfig& c, auto& k, auto& v) { c.drive.harmonic_p = static_cast<int>(to_integer(k, v)); }},
        {"vdc_uv", [](RunConfig& c, auto& k, auto& v) { c.drive.dc_bias = 1e-6 * to_double(k, v); }},
        {"vac_uv", [](RunConfig& c, auto& k, auto& v) { c.drive.ac_amplitude = 1e-6 * to_double(k, v); }},
        {"phase_rad", [](RunConfig& c, auto& k, auto& v) { c.drive.quadrature_phase = to_double(k, v); }},
        {"sweep_axis",
         [](RunConfig& c, auto& k, auto& v) {
             if (v == "dc_bias") sweep_of(c).axis = SweepAxis::dc_bias;
             else if (v == "ac_amplitude") sweep_of(c).axis = SweepAxis::ac_amplitude;
             else throw ValidationError(k, "expected dc_bias or ac_amplitude");
         }},
        {"sweep_units",
         [](RunConfig& c, auto& k, auto& v) {
             if (v == "uV") sweep_of(c).units = SweepUnits::volts;
             else if (v == "reduced") sweep_of(c).units = SweepUnits::reduced;
             else throw ValidationError(k, "expected uV or reduced");
         }},
        {"sweep_lo", [](RunConfig& c, auto& k, auto& v) { sweep_of(c).lo = to_double(k, v); }},
        {"sweep_hi", [](RunConfig& c, auto& k, auto& v) { sweep_of(c).hi = to_double(k, v); }},
        {"sweep_points",
         [](RunConfig& c, auto& k, auto& v) {
             const auto n = to_integer(k, v);
             if (n < 0) throw ValidationError(k, "must be positive");
             sweep_of(c).points = static_cast<std::size_t>(n);
         }},
        {"u_lo", [](RunConfig& c, auto& k, auto& v) { c.bounds_u.lo = to_double(k, v); }},
        {"u_hi", [](RunConfig& c, auto& k, auto& v) { c.bounds_u.hi = to_double(k, v); }},
        {"z_lo", [](RunConfig& c, auto& k, auto& v) { c.bounds_z.lo = to_double(k, v); }},
        {"z_hi", [](RunConfig& c, auto& k, auto& v) { c.bounds_z.hi = to_double(k, v); }},
        {"grid", [](RunConfig& c, auto& k, auto& v) { c.grid = static_cast<int>(to_integer(k, v)); }},
        {"output", [](RunConfig& c, auto&, auto& v) { c.output_path = v; }},
        {"format",
         [](RunConfig& c, auto& k, auto& v) {
             if (v == "csv") c.format = OutputFormat::csv;
             else if (v == "json") c.format = OutputFormat::json;
             else throw ValidationError(k, "expected csv or json");
         }},
        {"input", [](RunConfig& c, auto&, auto& v) { c.input_path = v; }},
        {"driven", [](RunConfig& c, auto&, auto& v) { c.driven_path = v; }},
        {"prior", [](RunConfig& c, auto&, auto& v) { c.prior_path = v; }},
        {"target", [](RunConfig& c, auto&, auto& v) { c.target = v; }},
        {"out_dir", [](RunConfig& c, auto&, auto& v) { c.out_dir = v; }},
        {"gain", [](RunConfig& c, auto& k, auto& v) { c.gain = to_double(k, v); }},
        {"amp_noise_k", [](RunConfig& c, auto& k, auto& v) { c.amp_noise = to_double(k, v); }},
        {"noise_level", [](RunConfig& c, auto& k, auto& v) { c.noise_level = to_double(k, v); }},
        {"seed",
         [](RunConfig& c, auto& k, auto& v) {
             const auto s = to_integer(k, v);
             if (s < 0) throw ValidationError(k, "must be non-negative");
             c.seed = static_cast<std::uint64_t>(s);
         }},
        {"synth_driven", [](RunConfig& c, auto& k, auto& v) { c.synth_driven = to_bool(k, v); }},
        {"synth_points",
         [](RunConfig& c, auto& k, auto& v) {
             const auto n = to_integer(k, v);
             if (n < 0) throw ValidationError(k, "must be positive");
             c.synth_points = static_cast<std::size_t>(n);
         }},
        {"synth_reach_u", [](RunConfig& c, auto& k, auto& v) { c.synth_reach_u = to_double(k, v); }},
    };
    return table;
}

}  // namespace

KeyValues parse_config_text(const std::string& text) {
    KeyValues out;
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw InputError("expected 'key = value'", number);
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw InputError("empty key", number);
        out.emplace_back(std::move(key), std::move(value));
    }
    return out;
}

KeyValues read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config_text(buf.str());
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

void apply_settings(RunConfig& config, const KeyValues& settings) {
    for (const auto& [key, value] : settings) {
        const auto& table = setters();
        const auto it = std::find_if(table.begin(), table.end(), [&](const auto& e) { return e.first == key; });
        if (it == table.end()) throw ValidationError(key, "unknown configuration key");
        it->second(config, key, value);
        auto prev = std::find_if(config.applied.begin(), config.applied.end(),
                                 [&](const auto& e) { return e.first == key; });
        if (prev != config.applied.end()) config.applied.erase(prev);
        config.applied.emplace_back(key, value);
    }
}

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& e : setters()) k.push_back(e.first);
        return k;
    }();
    return keys;
}

void validate_for_command(const RunConfig& config) {
    config.junction.validate();
    DriveParams d = config.drive;
    d.validate();
    switch (config.command) {
        case Command::sweep:
            if (!config.sweep) throw ValidationError("sweep", "sweep command needs sweep_lo/sweep_hi/sweep_points");
            break;
        case Command::optimize:
            config.bounds_u.validate("u_lo/u_hi");
            config.bounds_z.validate("z_lo/z_hi");
            if (config.grid < 2) throw ValidationError("grid", "must be at least 2");
            break;
        case Command::calibrate:
            if (config.input_path.empty() && config.driven_path.empty()) {
                throw ValidationError("input", "calibrate needs --input and/or --driven");
            }
            if (!config.driven_path.empty() && config.input_path.empty() && config.prior_path.empty()) {
                throw ValidationError("prior", "a driven fit needs --input or --prior for G, S_amp and T");
            }
            break;
        case Command::reproduce:
            if (config.target != "fig2" && config.target != "fig3" && config.target != "t0_optima" &&
                config.target != "table_of_optima") {
                throw ValidationError("target", "expected fig2, fig3, t0_optima or table_of_optima");
            }
            break;
        case Command::synth:
            if (config.synth_points < NoiseCurve::kMinPoints) {
                throw ValidationError("synth_points", "need at least 8 points");
            }
            if (!(config.synth_reach_u > 0.0)) throw ValidationError("synth_reach_u", "must be positive");
            break;
    }
}

}  // namespace sqn::cli
