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

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sqn/noise.hpp"

namespace sqn {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    /// Throws ValidationError(field) when lo > hi or an end is not finite.
    /// A single point (lo == hi) is allowed and pins that coordinate.
    void validate(const char* field) const;
    bool degenerate() const noexcept { return lo == hi; }
};

struct SqueezeOptimum {
    double u_star = 0.0;
    double z_star = 0.0;
    double ratio = 1.0;
    double db = 0.0;
    bool converged = false;
    std::int64_t evaluations = 0;
};

struct OptimizeOptions {
    int grid_u = 201;
    int grid_z = 201;
    int grid_bias = 2001;  // 1-D bias scan in optimize_bias_at_fixed_drive
    std::int64_t max_evaluations = 1'000'000;
    double ratio_tolerance = 1e-6;
};

/// Minimum of the squeeze ratio over (u, z) at fixed temperature and
/// harmonic: dense grid, then a bounded Nelder-Mead simplex from the best
/// grid node. Ties between grid nodes resolve to the smallest |u|, then the
/// smallest z, then u >= 0.
SqueezeOptimum optimize_squeeze(double theta_T, int p, Interval bounds_u = {-4.0, 4.0},
                                Interval bounds_z = {0.0, 4.0}, const OptimizeOptions& options = {});

/// Same search with bias and drive bounds in volts; the result stays in
/// reduced units.
SqueezeOptimum optimize_squeeze_si(const JunctionParams& junction, double measurement_frequency, int p,
                                   Interval dc_bias_volts, Interval ac_amplitude_volts,
                                   const OptimizeOptions& options = {});

/// Bias-only minimization at a fixed drive strength z.
SqueezeOptimum optimize_bias_at_fixed_drive(double z, double theta_T, int p, Interval bounds_u = {-4.0, 4.0},
                                            const OptimizeOptions& options = {});

enum class SweepAxis { dc_bias, ac_amplitude };
enum class SweepUnits { volts, reduced };

struct SweepSpec {
    SweepAxis axis = SweepAxis::dc_bias;
    SweepUnits units = SweepUnits::volts;
    double lo = 0.0;
    double hi = 0.0;
    std::size_t points = 2;
    JunctionParams junction;
    DriveParams drive;  // the swept field is ignored

    void validate() const;
};

struct SweepPoint {
    double abscissa = 0.0;   // in SweepSpec::units
    double s_undriven = 0.0; // S(u) without drive
    double vacuum = 1.0;     // vacuum_noise(theta_T)
    NoiseResult result;
};

/// Evaluates quadrature_variances on an evenly spaced grid, ordered by
/// abscissa. Evaluation is spread over worker_count() threads.
std::vector<SweepPoint> sweep(const SweepSpec& spec);

}  // namespace sqn
