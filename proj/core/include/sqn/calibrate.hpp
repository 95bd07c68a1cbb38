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
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sqn/noise.hpp"

namespace sqn {

struct CurvePoint {
    double bias = 0.0;      // V
    double measured = 0.0;  // K or detector units
};

struct NoiseCurve {
    std::vector<CurvePoint> points;
    double frequency = 7.2e9;  // Hz
    double resistance = 70.0;  // ohm

    static constexpr std::size_t kMinPoints = 8;
    void validate() const;
};

/// Calibration of the detection chain. The forward model is
///   measured(V) = gain * (amp_noise + T_N(S(V)))
/// with T_N the noise temperature in kelvin, so amp_noise is in kelvin and
/// gain carries the detector scale.
struct CalibrationFit {
    double gain = 0.0;
    double amp_noise = 0.0;    // K
    double temperature = 0.0;  // K
    std::optional<double> v_ac;  // V
    double rms_residual = 0.0;
    std::map<std::string, double> covariance_diag;
    int iterations = 0;
    /// Sum of squared relative residuals after each accepted step, starting
    /// with the initial guess.
    std::vector<double> objective_trace;
};

struct InitialGuess {
    double gain = 0.0;
    double amp_noise = 0.0;
    double temperature = 0.05;
};

class FitError : public std::runtime_error {
public:
    enum class Kind { ill_conditioned, not_converged };

    FitError(Kind kind, const std::string& what, CalibrationFit best)
        : std::runtime_error(what), kind_(kind), best_(std::move(best)) {}

    Kind kind() const noexcept { return kind_; }
    const CalibrationFit& best() const noexcept { return best_; }

private:
    Kind kind_;
    CalibrationFit best_;
};

/// Fits (gain, amp_noise, temperature) to an undriven noise-vs-bias curve.
/// The curve must reach |eV| >= 2 hbar w on both sides and sample the
/// plateau. Without a guess, gain and amp_noise come from a line through
/// the |eV| >= 2 hbar w points and temperature starts at 50 mK.
CalibrationFit fit_undriven(const NoiseCurve& curve, std::optional<InitialGuess> initial_guess = std::nullopt);

/// Fits the drive amplitude to a phase-averaged (detuned) curve with gain,
/// amp_noise and temperature held at `fixed`. `omega0` is the drive
/// frequency in Hz and must be w or 2w.
CalibrationFit fit_drive_amplitude(const NoiseCurve& curve, const CalibrationFit& fixed, double omega0);

struct SynthesisParams {
    JunctionParams junction;
    DriveParams drive;   // dc_bias is ignored; ac_amplitude used when driven
    double gain = 1.0;
    double amp_noise = 0.0;  // K
    bool driven = false;     // phase-averaged S~ instead of S
};

/// Forward model sampled at `biases`, each value multiplied by
/// (1 + noise_level * N(0,1)) from a std::mt19937_64 seeded with `seed`.
NoiseCurve synthesize_curve(const SynthesisParams& params, const std::vector<double>& biases, double noise_level,
                            std::uint64_t seed);

}  // namespace sqn
