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

#include "sqn/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include <Eigen/Dense>

#include "sqn/constants.hpp"
#include "sqn/errors.hpp"

namespace sqn {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr int kMaxIterations = 200;
constexpr double kRelativeStep = 1e-6;

double reduced_bias(double volts, double frequency) {
    return constants::elementary_charge * volts / (constants::planck * frequency);
}

double reduced_temperature(double kelvin, double frequency) {
    return constants::boltzmann * std::max(0.0, kelvin) / (constants::planck * frequency);
}

// Damped Gauss-Newton on relative residuals (model - y) / y with a central
// finite-difference Jacobian. Parameters are clamped to `lower`.
struct LeastSquares {
    std::vector<double> measured;
    std::function<std::vector<double>(const VectorXd&)> model;
    VectorXd lower;
    VectorXd step_floor;

    VectorXd residuals(const VectorXd& x) const {
        const auto m = model(x);
        VectorXd r(static_cast<Eigen::Index>(m.size()));
        for (std::size_t i = 0; i < m.size(); ++i) r[static_cast<Eigen::Index>(i)] = (m[i] - measured[i]) / measured[i];
        return r;
    }

    VectorXd clamp(VectorXd x) const { return x.cwiseMax(lower); }

    MatrixXd jacobian(const VectorXd& x, const VectorXd& r0) const {
        MatrixXd J(r0.size(), x.size());
        for (Eigen::Index j = 0; j < x.size(); ++j) {
            const double h = kRelativeStep * std::max(std::abs(x[j]), step_floor[j]);
            VectorXd up = x;
            up[j] += h;
            if (x[j] - h < lower[j]) {
                J.col(j) = (residuals(up) - r0) / h;
            } else {
                VectorXd down = x;
                down[j] -= h;
                J.col(j) = (residuals(up) - residuals(down)) / (2.0 * h);
            }
        }
        return J;
    }
};

struct LmOutcome {
    VectorXd x;
    double sse = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> trace;
    MatrixXd normal;  // J^T J at the solution
};

LmOutcome levenberg_marquardt(const LeastSquares& problem, VectorXd x0) {
    LmOutcome out;
    out.x = problem.clamp(std::move(x0));
    VectorXd r = problem.residuals(out.x);
    out.sse = r.squaredNorm();
    out.trace.push_back(out.sse);
    const double tiny_sse = 1e-28 * static_cast<double>(r.size());

    double lambda = -1.0;
    for (out.iterations = 0; out.iterations < kMaxIterations; ++out.iterations) {
        const MatrixXd J = problem.jacobian(out.x, r);
        out.normal = J.transpose() * J;
        const VectorXd g = J.transpose() * r;
        if (out.sse <= tiny_sse || g.lpNorm<Eigen::Infinity>() == 0.0) {
            out.converged = true;
            return out;
        }
        VectorXd scale = out.normal.diagonal();
        const double floor = 1e-12 * std::max(scale.maxCoeff(), std::numeric_limits<double>::min());
        scale = scale.cwiseMax(floor);
        if (lambda < 0.0) lambda = 1e-3;

        bool accepted = false;
        VectorXd trial;
        VectorXd trial_r;
        double trial_sse = 0.0;
        for (int attempt = 0; attempt < 40 && !accepted; ++attempt) {
            MatrixXd A = out.normal;
            A.diagonal() += lambda * scale;
            const VectorXd step = A.ldlt().solve(-g);
            trial = problem.clamp(out.x + step);
            trial_r = problem.residuals(trial);
            trial_sse = trial_r.squaredNorm();
            if (std::isfinite(trial_sse) && trial_sse < out.sse) {
                accepted = true;
                lambda = std::max(lambda / 3.0, 1e-12);
            } else {
                lambda *= 4.0;
            }
        }
        if (!accepted) {
            // No descent direction left at working precision.
            out.converged = true;
            return out;
        }
        const double decrease = out.sse - trial_sse;
        const double moved = (trial - out.x).cwiseAbs().cwiseQuotient(
            out.x.cwiseAbs().cwiseMax(problem.step_floor)).maxCoeff();
        out.x = trial;
        r = trial_r;
        out.sse = trial_sse;
        out.trace.push_back(out.sse);
        if (moved <= 1e-10 || out.sse <= tiny_sse || (decrease <= 1e-15 * out.sse && moved <= 1e-6)) {
            const MatrixXd J = problem.jacobian(out.x, r);
            out.normal = J.transpose() * J;
            out.converged = true;
            ++out.iterations;
            return out;
        }
    }
    return out;
}

std::vector<double> variances(const LmOutcome& lm, std::size_t n_points) {
    const auto k = static_cast<std::size_t>(lm.x.size());
    std::vector<double> out(k, std::numeric_limits<double>::quiet_NaN());
    if (n_points <= k || lm.normal.size() == 0) return out;
    const double sigma2 = lm.sse / static_cast<double>(n_points - k);
    // Invert in the Jacobi-scaled basis; the raw normal matrix mixes
    // parameters that differ by many orders of magnitude.
    const VectorXd d = lm.normal.diagonal().cwiseSqrt();
    if ((d.array() <= 0.0).any()) return out;
    const MatrixXd scaled = d.cwiseInverse().asDiagonal() * lm.normal * d.cwiseInverse().asDiagonal();
    Eigen::FullPivLU<MatrixXd> lu(scaled);
    if (!lu.isInvertible()) return out;
    const MatrixXd inv = lu.inverse();
    for (std::size_t j = 0; j < k; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        const double v = sigma2 * inv(jj, jj) / (d[jj] * d[jj]);
        if (std::isfinite(v) && v >= 0.0) out[j] = v;
    }
    return out;
}

double rms_absolute(const std::vector<double>& model, const NoiseCurve& curve) {
    double acc = 0.0;
    for (std::size_t i = 0; i < model.size(); ++i) {
        const double d = model[i] - curve.points[i].measured;
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(model.size()));
}

std::vector<double> undriven_model(const NoiseCurve& curve, double gain, double amp_noise, double temperature) {
    const double t_vac = vacuum_temperature(curve.frequency);
    const double theta = reduced_temperature(temperature, curve.frequency);
    std::vector<double> out;
    out.reserve(curve.points.size());
    for (const auto& pt : curve.points) {
        out.push_back(gain * (amp_noise + t_vac * s_finite_freq(reduced_bias(pt.bias, curve.frequency), theta)));
    }
    return out;
}

std::vector<double> driven_model(const NoiseCurve& curve, const CalibrationFit& fixed, int p, double v_ac) {
    const double t_vac = vacuum_temperature(curve.frequency);
    ReducedPoint pt;
    pt.p = p;
    pt.theta_T = reduced_temperature(fixed.temperature, curve.frequency);
    pt.z = constants::elementary_charge * std::max(0.0, v_ac) /
           (constants::planck * (2.0 * curve.frequency / p));
    std::vector<double> out;
    out.reserve(curve.points.size());
    for (const auto& cp : curve.points) {
        pt.u = reduced_bias(cp.bias, curve.frequency);
        out.push_back(fixed.gain * (fixed.amp_noise + t_vac * photo_assisted_noise(pt)));
    }
    return out;
}

InitialGuess asymptote_guess(const NoiseCurve& curve) {
    // Above |u| = 2 the undriven curve is G (S_amp + e|V| / 2 k_B) up to
    // thermal corrections of order exp(-1 / theta_T).
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (const auto& pt : curve.points) {
        if (std::abs(reduced_bias(pt.bias, curve.frequency)) < 2.0) continue;
        const double x = std::abs(pt.bias);
        sx += x;
        sy += pt.measured;
        sxx += x * x;
        sxy += x * pt.measured;
        ++n;
    }
    const double det = n * sxx - sx * sx;
    InitialGuess g;
    if (n < 2 || !(det > 0.0)) return g;
    const double slope = (n * sxy - sx * sy) / det;
    const double intercept = (sy - slope * sx) / n;
    g.gain = slope * 2.0 * constants::boltzmann / constants::elementary_charge;
    g.amp_noise = g.gain > 0.0 ? intercept / g.gain : 0.0;
    return g;
}

void check_span(const NoiseCurve& curve) {
    int below = 0, above = 0, plateau = 0;
    for (const auto& pt : curve.points) {
        const double u = reduced_bias(pt.bias, curve.frequency);
        if (u <= -2.0) ++below;
        if (u >= 2.0) ++above;
        if (std::abs(u) < 1.0) ++plateau;
    }
    if (below == 0 || above == 0 || below + above < 2 || plateau == 0) {
        throw FitError(FitError::Kind::ill_conditioned,
                       "bias span must cover the plateau and reach 2 hbar w / e on both sides", {});
    }
}

}  // namespace

void NoiseCurve::validate() const {
    if (points.size() < kMinPoints) {
        throw ValidationError("points", "need at least " + std::to_string(kMinPoints) + " points, got " +
                                            std::to_string(points.size()));
    }
    if (!(frequency > 0.0) || !std::isfinite(frequency)) throw ValidationError("frequency", "must be positive");
    if (!(resistance > 0.0) || !std::isfinite(resistance)) throw ValidationError("resistance", "must be positive");
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& pt = points[i];
        if (!std::isfinite(pt.bias)) throw ValidationError("bias", "non-finite at index " + std::to_string(i));
        if (i > 0 && !(pt.bias > points[i - 1].bias)) {
            throw ValidationError("bias", "not strictly increasing at index " + std::to_string(i));
        }
        if (!std::isfinite(pt.measured) || !(pt.measured > 0.0)) {
            throw ValidationError("measured", "must be finite and positive at index " + std::to_string(i));
        }
    }
}

CalibrationFit fit_undriven(const NoiseCurve& curve, std::optional<InitialGuess> initial_guess) {
    curve.validate();
    check_span(curve);
    InitialGuess guess = initial_guess.value_or(asymptote_guess(curve));
    if (!(guess.gain > 0.0) || !std::isfinite(guess.amp_noise)) {
        throw FitError(FitError::Kind::ill_conditioned, "could not form a positive gain from the shot-noise slope", {});
    }

    LeastSquares problem;
    for (const auto& pt : curve.points) problem.measured.push_back(pt.measured);
    problem.model = [&curve](const VectorXd& x) { return undriven_model(curve, x[0], x[1], x[2]); };
    const double inf = std::numeric_limits<double>::infinity();
    problem.lower = (VectorXd(3) << std::numeric_limits<double>::min(), -inf, 0.0).finished();
    problem.step_floor = (VectorXd(3) << guess.gain * 1e-3, 1e-3, 1e-3).finished();

    const LmOutcome lm = levenberg_marquardt(problem, (VectorXd(3) << guess.gain, guess.amp_noise,
                                                       std::max(0.0, guess.temperature)).finished());
    CalibrationFit fit;
    fit.gain = lm.x[0];
    fit.amp_noise = lm.x[1];
    fit.temperature = lm.x[2];
    fit.rms_residual = rms_absolute(undriven_model(curve, fit.gain, fit.amp_noise, fit.temperature), curve);
    const auto var = variances(lm, curve.points.size());
    fit.covariance_diag = {{"gain", var[0]}, {"amp_noise", var[1]}, {"temperature", var[2]}};
    fit.iterations = lm.iterations;
    fit.objective_trace = lm.trace;
    if (!lm.converged) {
        throw FitError(FitError::Kind::not_converged, "undriven fit did not converge", fit);
    }
    return fit;
}

CalibrationFit fit_drive_amplitude(const NoiseCurve& curve, const CalibrationFit& fixed, double omega0) {
    curve.validate();
    if (!(fixed.gain > 0.0) || !(fixed.temperature >= 0.0) || !std::isfinite(fixed.amp_noise)) {
        throw ValidationError("fixed", "needs a positive gain, finite amp_noise and non-negative temperature");
    }
    if (!(omega0 > 0.0) || !std::isfinite(omega0)) throw ValidationError("omega0", "must be positive");
    const double ratio = 2.0 * curve.frequency / omega0;
    const int p = static_cast<int>(std::lround(ratio));
    if ((p != 1 && p != 2) || std::abs(ratio - p) > 1e-3 * p) {
        throw ValidationError("omega0", "drive frequency must be 2w (p=1) or w (p=2)");
    }

    const double v_photon = constants::planck * omega0 / constants::elementary_charge;
    auto sse_at = [&](double v) {
        const auto m = driven_model(curve, fixed, p, v);
        double acc = 0.0;
        for (std::size_t i = 0; i < m.size(); ++i) {
            const double r = (m[i] - curve.points[i].measured) / curve.points[i].measured;
            acc += r * r;
        }
        return acc;
    };
    double seed_v = 0.0;
    double seed_sse = sse_at(0.0);
    constexpr int kScan = 80;
    for (int i = 1; i <= kScan; ++i) {
        const double v = 4.0 * v_photon * i / kScan;
        const double s = sse_at(v);
        if (s < seed_sse) {
            seed_sse = s;
            seed_v = v;
        }
    }

    LeastSquares problem;
    for (const auto& pt : curve.points) problem.measured.push_back(pt.measured);
    problem.model = [&](const VectorXd& x) { return driven_model(curve, fixed, p, x[0]); };
    problem.lower = VectorXd::Zero(1);
    problem.step_floor = VectorXd::Constant(1, 1e-3 * v_photon);

    const LmOutcome lm = levenberg_marquardt(problem, VectorXd::Constant(1, seed_v));
    CalibrationFit fit = fixed;
    fit.v_ac = lm.x[0];
    fit.rms_residual = rms_absolute(driven_model(curve, fixed, p, lm.x[0]), curve);
    fit.covariance_diag["v_ac"] = variances(lm, curve.points.size())[0];
    fit.iterations = lm.iterations;
    fit.objective_trace = lm.trace;
    if (!lm.converged) {
        throw FitError(FitError::Kind::not_converged, "drive-amplitude fit did not converge", fit);
    }
    return fit;
}

NoiseCurve synthesize_curve(const SynthesisParams& params, const std::vector<double>& biases, double noise_level,
                            std::uint64_t seed) {
    params.junction.validate();
    DriveParams drive = params.drive;
    drive.dc_bias = 0.0;
    if (!params.driven) drive.ac_amplitude = 0.0;
    drive.validate();
    if (!(noise_level >= 0.0) || !std::isfinite(noise_level)) {
        throw ValidationError("noise_level", "must be non-negative");
    }
    const ReducedPoint origin = to_reduced(params.junction, drive);
    const double t_vac = vacuum_temperature(drive.measurement_frequency);

    NoiseCurve curve;
    curve.frequency = drive.measurement_frequency;
    curve.resistance = params.junction.resistance;
    curve.points.reserve(biases.size());
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (const double v : biases) {
        if (!std::isfinite(v)) throw ValidationError("biases", "must be finite");
        ReducedPoint pt = origin;
        pt.u = reduced_bias(v, drive.measurement_frequency);
        const double s = params.driven ? photo_assisted_noise(pt) : s_finite_freq(pt.u, pt.theta_T);
        double value = params.gain * (params.amp_noise + t_vac * s);
        if (noise_level > 0.0) value *= 1.0 + noise_level * gauss(rng);
        curve.points.push_back({v, value});
    }
    return curve;
}

}  // namespace sqn
