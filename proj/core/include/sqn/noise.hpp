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

// Shot noise of a dc+ac biased tunnel junction and the quadrature variances
// of the field it radiates.
//
// All kernel routines work in reduced units:
//   u       = e V_dc / (hbar w)      dc bias
//   z       = e V_ac / (hbar w0)     drive strength, w0 = 2 w / p
//   theta_T = k_B T / (hbar w)       temperature
// and return spectral densities in units of hbar w / R. The SI boundary is
// `to_reduced` and `noise_temperature`.

namespace sqn {

struct JunctionParams {
    double resistance = 70.0;           // ohm
    double electron_temperature = 0.0;  // K

    void validate() const;
};

struct DriveParams {
    double measurement_frequency = 7.2e9;  // Hz, w / 2 pi
    int harmonic_p = 1;                    // w0 = 2 w / p, p in {1, 2}
    double dc_bias = 0.0;                  // V
    double ac_amplitude = 0.0;             // V
    double quadrature_phase = 0.0;         // rad

    double drive_frequency() const noexcept { return 2.0 * measurement_frequency / harmonic_p; }
    void validate() const;
};

struct ReducedPoint {
    double u = 0.0;
    double z = 0.0;
    double theta_T = 0.0;
    int p = 1;

    void validate() const;
};

struct NoiseResult {
    double s_tilde = 0.0;
    double x_corr = 0.0;
    double var_a = 0.0;
    double var_b = 0.0;
    double min_quadrature = 0.0;
    double squeeze_ratio = 0.0;
    double squeeze_db = 0.0;
};

/// Zero-frequency shot noise v coth(v / 2 theta_T); |v| at theta_T = 0.
double s0(double v, double theta_T);

/// Noise at the measurement frequency, [s0(u+1) + s0(u-1)] / 2.
double s_finite_freq(double u, double theta_T);

/// Equilibrium noise at zero bias. Reference level for squeezing.
double vacuum_noise(double theta_T);

/// Number of Bessel sidebands kept on each side of n = 0.
int default_truncation(double z, int p);

/// Photo-assisted noise: sum_n J_n(z)^2 S(u + 2n/p). `truncation` <= 0 means
/// default_truncation(z, p).
double photo_assisted_noise(const ReducedPoint& point, int truncation = 0);

/// Noise-dynamics correlator
///   X = 1/2 sum_n J_n J_{n+p} [s0(u + 1 + 2n/p) + (-1)^p s0(u - 1 - 2n/p)].
double noise_dynamics_x(const ReducedPoint& point, int truncation = 0);

/// Quadrature variances Delta^2(theta) = S~ + X cos(2 theta); var_a and var_b
/// are the theta = 0 and theta = pi/2 quadratures.
NoiseResult quadrature_variances(const ReducedPoint& point, int truncation = 0);

/// Variance of the quadrature at angle `theta` (radians).
double variance_at_phase(const NoiseResult& r, double theta);

/// Mean over the quadrature angle, which is S~. With `self_check` the value
/// is compared against a 64-point angular average and NumericalError is
/// thrown on disagreement.
double phase_averaged_variance(const ReducedPoint& point, bool self_check = false);

ReducedPoint to_reduced(const JunctionParams& j, const DriveParams& d);

/// Convenience: quadrature_variances(to_reduced(j, d)).
NoiseResult evaluate(const JunctionParams& j, const DriveParams& d);

/// Spectral density in hbar w / R to noise temperature R Delta^2 / 2 k_B.
double noise_temperature(double sd, const JunctionParams& j, const DriveParams& d);

/// hbar w / 2 k_B for a measurement frequency in Hz.
double vacuum_temperature(double measurement_frequency);

/// Bias in volts corresponding to reduced bias u at frequency f.
double reduced_to_dc_volts(double u, double measurement_frequency);

/// Drive amplitude in volts corresponding to reduced drive z.
double reduced_to_ac_volts(double z, double measurement_frequency, int p);

}  // namespace sqn
