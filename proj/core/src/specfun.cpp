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

#include "sqn/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sqn/errors.hpp"

namespace sqn::specfun {
namespace {

constexpr double kSeriesCrossover = 1e-2;
constexpr double kTinyArgument = 1e-5;
constexpr double kRescaleAbove = 1e200;

void check_argument(double z) {
    if (!std::isfinite(z) || std::abs(z) > kMaxBesselArgument) {
        throw RangeError("bessel argument " + std::to_string(z) +
                         " outside validated range |z| <= 1e4");
    }
}

// Leading terms of the power series; only used where (z/2)^2 < 1e-10 so
// three corrections are exact to double precision.
std::vector<double> tiny_argument_series(double z, int max_order) {
    std::vector<double> out(static_cast<std::size_t>(max_order) + 1, 0.0);
    const double half = 0.5 * z;
    const double q = half * half;
    double lead = 1.0;  // (z/2)^n / n!
    for (int n = 0; n <= max_order; ++n) {
        if (n > 0) lead *= half / n;
        if (lead == 0.0) break;
        const double c1 = q / (n + 1);
        const double c2 = c1 * q / (2.0 * (n + 2));
        const double c3 = c2 * q / (3.0 * (n + 3));
        out[static_cast<std::size_t>(n)] = lead * (1.0 - c1 + c2 - c3);
    }
    return out;
}

// Miller's algorithm for z > 0: recur J_{k-1} = (2k/z) J_k - J_{k+1} downward
// from an arbitrary seed far above the needed orders, then normalize with
// J_0 + 2 sum_{k>=1} J_{2k} = 1.
std::vector<double> miller(double z, int max_order) {
    const int start = std::max(miller_start_order(z), max_order + 20) | 1;
    std::vector<double> work(static_cast<std::size_t>(start) + 2, 0.0);
    work[static_cast<std::size_t>(start)] = 1e-300;
    double even_sum = 0.0;
    const double two_over_z = 2.0 / z;
    for (int k = start; k >= 1; --k) {
        const auto i = static_cast<std::size_t>(k);
        double next = k * two_over_z * work[i] - work[i + 1];
        work[i - 1] = next;
        if ((k - 1) % 2 == 0 && k - 1 > 0) even_sum += next;
        if (std::abs(next) > kRescaleAbove) {
            for (std::size_t j = i - 1; j < work.size(); ++j) work[j] /= kRescaleAbove;
            even_sum /= kRescaleAbove;
        }
    }
    const double norm = work[0] + 2.0 * even_sum;
    std::vector<double> out(static_cast<std::size_t>(max_order) + 1);
    for (int n = 0; n <= max_order; ++n) {
        out[static_cast<std::size_t>(n)] = work[static_cast<std::size_t>(n)] / norm;
    }
    return out;
}

}  // namespace

BesselSeries::BesselSeries(double argument, std::vector<double> values)
    : argument_(argument), values_(std::move(values)) {
    if (values_.empty()) throw std::invalid_argument("BesselSeries: no orders");
}

double BesselSeries::operator()(int n) const {
    const int m = n < 0 ? -n : n;
    if (m > max_order()) {
        throw std::out_of_range("BesselSeries: order " + std::to_string(n) +
                                " beyond max_order " + std::to_string(max_order()));
    }
    const double v = values_[static_cast<std::size_t>(m)];
    return (n < 0 && (m % 2) != 0) ? -v : v;
}

int miller_start_order(double z) {
    // The Airy transition region past n = |z| widens like |z|^(1/3); the
    // cube-root term keeps the seed far enough out for large arguments.
    const double a = std::abs(z);
    return static_cast<int>(std::ceil(a)) + 40 + static_cast<int>(std::ceil(6.0 * std::cbrt(a)));
}

BesselSeries bessel_j_all(double z, int max_order) {
    check_argument(z);
    if (max_order < 0) throw ValidationError("max_order", "must be non-negative");
    const double a = std::abs(z);
    std::vector<double> values;
    if (a == 0.0) {
        values.assign(static_cast<std::size_t>(max_order) + 1, 0.0);
        values[0] = 1.0;
    } else if (a < kTinyArgument) {
        values = tiny_argument_series(a, max_order);
    } else {
        values = miller(a, max_order);
    }
    if (z < 0.0) {
        for (std::size_t n = 1; n < values.size(); n += 2) values[n] = -values[n];
    }
    return BesselSeries(z, std::move(values));
}

double bessel_j(int n, double z) {
    const int m = n < 0 ? -n : n;
    return bessel_j_all(z, m)(n);
}

double x_coth_x(double x) {
    const double a = std::abs(x);
    if (a < kSeriesCrossover) {
        const double x2 = a * a;
        return 1.0 + x2 * (1.0 / 3.0 + x2 * (-1.0 / 45.0 + x2 * (2.0 / 945.0)));
    }
    return a / std::tanh(a);
}

}  // namespace sqn::specfun
