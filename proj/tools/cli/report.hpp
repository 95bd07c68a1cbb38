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

#include <json.hpp>

#include "cli/config.hpp"
#include "sqn/calibrate.hpp"
#include "sqn/optimize.hpp"

namespace sqn::cli {

nlohmann::ordered_json to_json(const SqueezeOptimum& opt);
nlohmann::ordered_json to_json(const CalibrationFit& fit);
nlohmann::ordered_json to_json(const NoiseResult& r);

/// The applied configuration as a flat object.
nlohmann::ordered_json config_json(const RunConfig& config);

/// Reads gain, amp_noise, temperature (and v_ac if present) from a fit
/// report. Throws InputError on missing or non-numeric fields.
CalibrationFit calibration_from_json(const nlohmann::json& j);

}  // namespace sqn::cli
