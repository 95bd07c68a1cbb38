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

#include <span>
#include <vector>

namespace sqn::specfun {

/// Largest |z| accepted by the Bessel routines.
inline constexpr double kMaxBesselArgument = 1e4;

/// J_0(z) .. J_max(z) evaluated together. Negative orders are served through
/// J_{-n}(z) = (-1)^n J_n(z).
class BesselSeries {
public:
    BesselSeries(double argument, std::vector<double> values);

    double argument() const noexcept { return argument_; }
    int max_order() const noexcept { return static_cast<int>(values_.size()) - 1; }
    std::span<const double> values() const noexcept { return values_; }

    /// J_n(argument) for |n| <= max_order(); throws std::out_of_range otherwise.
    double operator()(int n) const;

private:
    double argument_;
    std::vector<double> values_;
};

/// Starting order of the downward recurrence for argument z.
int miller_start_order(double z);

/// J_n(z) for integer n. Throws RangeError for |z| > kMaxBesselArgument.
double bessel_j(int n, double z);

/// All orders 0..max_order at once (Miller's normalized downward recurrence).
BesselSeries bessel_j_all(double z, int max_order);

/// x * coth(x), continuous through x = 0 where it equals 1.
double x_coth_x(double x);

}  // namespace sqn::specfun
