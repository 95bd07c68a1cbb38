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

#include "sqn/noise.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "sqn/constants.hpp"
#include "sqn/errors.hpp"
#include "sqn/specfun.hpp"

namespace sqn {
namespace {

void require_finite(double v, const char* field) {
    if (!std::isfinite(v)) throw ValidationError(field, "must be finite");
}

struct KernelSums {
    double s_tilde = 0.0;
    double x_corr = 0.0;
};

KernelSums kernel_sums(const ReducedPoint& pt, int truncation, bool want_s, bool want_x) {
    pt.validate();
    const int n_max = truncation > 0 ? truncation : default_truncation(pt.z, pt.p);
    const auto bessel = specfun::bessel_j_all(pt.z, n_max + pt.p);
    const double shift = 2.0 / pt.p;
    const double parity = (pt.p % 2 == 0) ? 1.0 : -1.0;

    KernelSums out;
    for (int n = -n_max; n <= n_max; ++n) {
        const double jn = bessel(n);
        if (jn == 0.0) continue;
        const double offset = n * shift;
        if (want_s) out.s_tilde += jn * jn * s_finite_freq(pt.u + offset, pt.theta_T);
        if (want_x) {
            const double jnp = bessel(n + pt.p);
            if (jnp != 0.0) {
                out.x_corr += jn * jnp *
                              (s0(pt.u + 1.0 + offset, pt.theta_T) +
                               parity * s0(pt.u - 1.0 - offset, pt.theta_T));
            }
        }
    }
    out.x_corr *= 0.5;
    return out;
}

}  // namespace

void JunctionParams::validate() const {
    if (!(resistance > 0.0) || !std::isfinite(resistance)) {
        throw ValidationError("resistance", "must be positive and finite");
    }
    if (!(electron_temperature >= 0.0) || !std::isfinite(electron_temperature)) {
        throw ValidationError("electron_temperature", "must be non-negative and finite");
    }
}

void DriveParams::validate() const {
    if (!(measurement_frequency > 0.0) || !std::isfinite(measurement_frequency)) {
        throw ValidationError("measurement_frequency", "must be positive and finite");
    }
    if (harmonic_p != 1 && harmonic_p != 2) {
        throw ValidationError("harmonic_p", "must be 1 or 2");
    }
    require_finite(dc_bias, "dc_bias");
    if (!(ac_amplitude >= 0.0) || !std::isfinite(ac_amplitude)) {
        throw ValidationError("ac_amplitude", "must be non-negative and finite");
    }
    require_finite(quadrature_phase, "quadrature_phase");
}

void ReducedPoint::validate() const {
    require_finite(u, "u");
    if (!(z >= 0.0) || !std::isfinite(z)) throw ValidationError("z", "must be non-negative and finite");
    if (!(theta_T >= 0.0) || !std::isfinite(theta_T)) {
        throw ValidationError("theta_T", "must be non-negative and finite");
    }
    if (p != 1 && p != 2) throw ValidationError("p", "must be 1 or 2");
}

double s0(double v, double theta_T) {
    if (theta_T == 0.0) return std::abs(v);
    const double scale = 2.0 * theta_T;
    return scale * specfun::x_coth_x(v / scale);
}

double s_finite_freq(double u, double theta_T) {
    // max(1, |u|) is the exact zero-temperature value; avoids rounding on the plateau.
    if (theta_T == 0.0) return std::max(1.0, std::abs(u));
    return 0.5 * (s0(u + 1.0, theta_T) + s0(u - 1.0, theta_T));
}

double vacuum_noise(double theta_T) { return s_finite_freq(0.0, theta_T); }

int default_truncation(double z, int p) {
    return static_cast<int>(std::ceil(std::abs(z))) + std::abs(p) + 40;
}

double photo_assisted_noise(const ReducedPoint& point, int truncation) {
    return kernel_sums(point, truncation, true, false).s_tilde;
}

double noise_dynamics_x(const ReducedPoint& point, int truncation) {
    return kernel_sums(point, truncation, false, true).x_corr;
}

NoiseResult quadrature_variances(const ReducedPoint& point, int truncation) {
    const KernelSums k = kernel_sums(point, truncation, true, true);
    NoiseResult r;
    r.var_a = k.s_tilde + k.x_corr;
    r.var_b = k.s_tilde - k.x_corr;
    // Recomputed from the quadratures so var_a + var_b == 2 s_tilde holds bitwise.
    r.s_tilde = 0.5 * (r.var_a + r.var_b);
    r.x_corr = k.x_corr;
    r.min_quadrature = std::min(r.var_a, r.var_b);
    r.squeeze_ratio = r.min_quadrature / vacuum_noise(point.theta_T);
    r.squeeze_db = 10.0 * std::log10(r.squeeze_ratio);
    return r;
}

double variance_at_phase(const NoiseResult& r, double theta) {
    return r.s_tilde + r.x_corr * std::cos(2.0 * theta);
}

double phase_averaged_variance(const ReducedPoint& point, bool self_check) {
    if (!self_check) return photo_assisted_noise(point);
    const NoiseResult r = quadrature_variances(point);
    constexpr int kSamples = 64;
    double sum = 0.0;
    for (int k = 0; k < kSamples; ++k) {
        sum += variance_at_phase(r, 2.0 * constants::pi * k / kSamples);
    }
    const double averaged = sum / kSamples;
    const double analytic = photo_assisted_noise(point);
    if (std::abs(averaged - analytic) > 1e-12 * std::max(1.0, std::abs(analytic))) {
        throw NumericalError("phase average disagrees with photo-assisted noise");
    }
    return analytic;
}

ReducedPoint to_reduced(const JunctionParams& j, const DriveParams& d) {
    j.validate();
    d.validate();
    using namespace constants;
    const double photon = planck * d.measurement_frequency;  // hbar w
    const double drive_photon = planck * d.drive_frequency();
    ReducedPoint pt;
    pt.u = elementary_charge * d.dc_bias / photon;
    pt.z = elementary_charge * d.ac_amplitude / drive_photon;
    pt.theta_T = boltzmann * j.electron_temperature / photon;
    pt.p = d.harmonic_p;
    return pt;
}

NoiseResult evaluate(const JunctionParams& j, const DriveParams& d) {
    return quadrature_variances(to_reduced(j, d));
}

double vacuum_temperature(double measurement_frequency) {
    return constants::planck * measurement_frequency / (2.0 * constants::boltzmann);
}

double noise_temperature(double sd, const JunctionParams& j, const DriveParams& d) {
    j.validate();
    d.validate();
    if (!(sd >= 0.0)) throw ValidationError("sd", "spectral density must be non-negative");
    return vacuum_temperature(d.measurement_frequency) * sd;
}

double reduced_to_dc_volts(double u, double measurement_frequency) {
    return u * constants::planck * measurement_frequency / constants::elementary_charge;
}

double reduced_to_ac_volts(double z, double measurement_frequency, int p) {
    return z * constants::planck * (2.0 * measurement_frequency / p) / constants::elementary_charge;
}

}  // namespace sqn
