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

#include "cli/report.hpp"

#include <cmath>

namespace sqn::cli {
namespace {

// NaN and inf have no JSON spelling; they become null.
nlohmann::ordered_json number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

}  // namespace

nlohmann::ordered_json to_json(const SqueezeOptimum& opt) {
    nlohmann::ordered_json j;
    j["u_star"] = number(opt.u_star);
    j["z_star"] = number(opt.z_star);
    j["ratio"] = number(opt.ratio);
    j["db"] = number(opt.db);
    j["converged"] = opt.converged;
    j["evaluations"] = opt.evaluations;
    return j;
}

nlohmann::ordered_json to_json(const CalibrationFit& fit) {
    nlohmann::ordered_json j;
    j["gain"] = number(fit.gain);
    j["amp_noise"] = number(fit.amp_noise);
    j["temperature"] = number(fit.temperature);
    j["v_ac"] = fit.v_ac ? number(*fit.v_ac) : nlohmann::ordered_json(nullptr);
    j["rms_residual"] = number(fit.rms_residual);
    auto& cov = j["covariance_diag"] = nlohmann::ordered_json::object();
    for (const auto& [name, v] : fit.covariance_diag) cov[name] = number(v);
    j["iterations"] = fit.iterations;
    return j;
}

nlohmann::ordered_json to_json(const NoiseResult& r) {
    nlohmann::ordered_json j;
    j["s_tilde"] = number(r.s_tilde);
    j["x_corr"] = number(r.x_corr);
    j["var_a"] = number(r.var_a);
    j["var_b"] = number(r.var_b);
    j["min_quadrature"] = number(r.min_quadrature);
    j["squeeze_ratio"] = number(r.squeeze_ratio);
    j["squeeze_db"] = number(r.squeeze_db);
    return j;
}

nlohmann::ordered_json config_json(const RunConfig& config) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [k, v] : config.applied) j[k] = v;
    return j;
}

CalibrationFit calibration_from_json(const nlohmann::json& j) {
    auto field = [&](const char* name) {
        if (!j.contains(name) || !j[name].is_number()) {
            throw InputError(std::string("calibration report lacks numeric '") + name + "'");
        }
        return j[name].get<double>();
    };
    CalibrationFit fit;
    fit.gain = field("gain");
    fit.amp_noise = field("amp_noise");
    fit.temperature = field("temperature");
    if (j.contains("v_ac") && j["v_ac"].is_number()) fit.v_ac = j["v_ac"].get<double>();
    if (j.contains("rms_residual") && j["rms_residual"].is_number()) fit.rms_residual = j["rms_residual"].get<double>();
    return fit;
}

}  // namespace sqn::cli
