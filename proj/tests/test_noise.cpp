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

#include <cmath>
#include <random>

#include <doctest.h>

#include "oracles.hpp"
#include "sqn/errors.hpp"
#include "sqn/noise.hpp"

using namespace sqn;

namespace {

// 28 mK at 7.2 GHz, and 46 uV at 14.4 GHz (CODATA arithmetic).
constexpr double kTheta28mK = 0.081031296590718347;
constexpr double kZ46uV = 0.77241323011045994;

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("s0") {
    CHECK(s0(0.0, 0.3) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(s0(-2.5, 0.0) == 2.5);
    CHECK(s0(2.5, 0.0) == 2.5);
    // 1 * coth(1 / 0.0776), mpmath.
    CHECK(rel(s0(1.0, 0.0388), 1.0000000000128196) < 1e-15);
    CHECK(rel(s0(0.7, 0.2), static_cast<double>(oracle::s0_direct(0.7L, 0.2L))) < 1e-14);
}

TEST_CASE("s_finite_freq") {
    CHECK(s_finite_freq(0.0, 0.0) == 1.0);
    CHECK(s_finite_freq(0.5, 0.0) == 1.0);
    CHECK(s_finite_freq(2.0, 0.0) == 2.0);
    CHECK(s_finite_freq(-3.0, 0.0) == 3.0);
    for (double u : {0.1, 0.9, 1.7, 4.2}) {
        CHECK(s_finite_freq(u, 0.25) == s_finite_freq(-u, 0.25));
    }
}

TEST_CASE("vacuum_noise and noise temperature") {
    CHECK(vacuum_noise(0.0) == 1.0);
    CHECK(std::abs(vacuum_noise(0.0388) - (1.0 + 1.2819563726e-11)) < 1e-15);
    CHECK(std::abs(vacuum_noise(kTheta28mK) - 1.0000087386118318) < 1e-15);

    JunctionParams j;
    DriveParams d;
    d.measurement_frequency = 7.2e9;
    CHECK(noise_temperature(1.0, j, d) == doctest::Approx(0.17277275064118395).epsilon(1e-14));
    CHECK(std::abs(noise_temperature(1.0, j, d) - 0.173) < 1e-3);
    CHECK(noise_temperature(0.0, j, d) == 0.0);
    CHECK(noise_temperature(2.0, j, d) == doctest::Approx(0.3455455012823679).epsilon(1e-14));
    CHECK_THROWS_AS(noise_temperature(-0.1, j, d), ValidationError);
}

TEST_CASE("to_reduced") {
    JunctionParams j{70.0, 0.028};
    DriveParams d;
    d.measurement_frequency = 7.2e9;
    d.dc_bias = 29.776807417851783e-6;
    d.ac_amplitude = 46e-6;
    d.harmonic_p = 1;
    const ReducedPoint pt = to_reduced(j, d);
    CHECK(pt.u == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(pt.theta_T == doctest::Approx(kTheta28mK).epsilon(1e-14));
    CHECK(pt.z == doctest::Approx(kZ46uV).epsilon(1e-14));
    CHECK(pt.p == 1);

    d.harmonic_p = 2;
    CHECK(to_reduced(j, d).z == doctest::Approx(2.0 * kZ46uV).epsilon(1e-14));

    SUBCASE("validation names the field") {
        auto field_of = [](auto&& fn) {
            try {
                fn();
            } catch (const ValidationError& e) {
                return e.field();
            }
            return std::string("<none>");
        };
        CHECK(field_of([&] { to_reduced({-1.0, 0.0}, d); }) == "resistance");
        CHECK(field_of([&] { to_reduced({70.0, -0.01}, d); }) == "electron_temperature");
        DriveParams bad = d;
        bad.harmonic_p = 3;
        CHECK(field_of([&] { to_reduced(j, bad); }) == "harmonic_p");
        bad = d;
        bad.ac_amplitude = -1e-6;
        CHECK(field_of([&] { to_reduced(j, bad); }) == "ac_amplitude");
        bad = d;
        bad.measurement_frequency = 0.0;
        CHECK(field_of([&] { to_reduced(j, bad); }) == "measurement_frequency");
        bad = d;
        bad.dc_bias = INFINITY;
        CHECK(field_of([&] { to_reduced(j, bad); }) == "dc_bias");
    }
}

TEST_CASE("photo_assisted_noise") {
    SUBCASE("no drive reduces to S") {
        for (double u : {-2.3, 0.0, 0.4, 1.0, 3.1}) {
            for (double th : {0.0, 0.04, 0.5}) {
                for (int p : {1, 2}) CHECK(photo_assisted_noise({u, 0.0, th, p}) == s_finite_freq(u, th));
            }
        }
    }
    SUBCASE("brute-force oracle") {
        const double got = photo_assisted_noise({0.0, 0.77, 0.0, 1});
        CHECK(rel(got, 1.2858182761462965) < 1e-13);  // mpmath, |n| <= 60
        CHECK(rel(got, static_cast<double>(oracle::photo_assisted_brute(0.0L, 0.77L, 0.0L, 1))) < 1e-13);
        for (double th : {0.04, 0.5}) {
            for (int p : {1, 2}) {
                const double want = static_cast<double>(oracle::photo_assisted_brute(0.8L, 1.9L, th, p));
                CHECK(rel(photo_assisted_noise({0.8, 1.9, th, p}), want) < 1e-13);
            }
        }
    }
    SUBCASE("drive adds noise at zero bias") { CHECK(photo_assisted_noise({0.0, 5.0, 0.0, 1}) > 1.0); }
}

TEST_CASE("noise_dynamics_x") {
    CHECK(noise_dynamics_x({1.3, 0.0, 0.1, 1}) == 0.0);
    CHECK(noise_dynamics_x({1.3, 0.0, 0.1, 2}) == 0.0);
    CHECK(std::abs(noise_dynamics_x({0.0, 1.4, 0.0, 1})) < 1e-14);

    const double got = noise_dynamics_x({1.0, 0.77, 0.0, 1});
    CHECK(rel(got, 0.66398605065884915) < 1e-13);  // mpmath, |n| <= 60
    CHECK(rel(got, static_cast<double>(oracle::x_corr_brute(1.0L, 0.77L, 0.0L, 1))) < 1e-13);
    for (double th : {0.04, 0.5}) {
        for (int p : {1, 2}) {
            const double want = static_cast<double>(oracle::x_corr_brute(-0.6L, 2.2L, th, p));
            CHECK(std::abs(noise_dynamics_x({-0.6, 2.2, th, p}) - want) < 1e-13);
        }
    }
}

TEST_CASE("quadrature_variances") {
    SUBCASE("no drive: equal quadratures, no squeezing") {
        for (double u : {-1.5, 0.0, 0.5, 2.0}) {
            const auto r = quadrature_variances({u, 0.0, 0.04, 1});
            CHECK(r.var_a == r.var_b);
            CHECK(r.var_a == s_finite_freq(u, 0.04));
            CHECK(r.squeeze_ratio >= 1.0 - 1e-12);
        }
    }
    SUBCASE("derived fields") {
        const auto r = quadrature_variances({1.0, kZ46uV, kTheta28mK, 1});
        CHECK(r.var_a + r.var_b == 2.0 * r.s_tilde);
        CHECK(r.min_quadrature == std::min(r.var_a, r.var_b));
        CHECK(r.min_quadrature == doctest::Approx(r.s_tilde - std::abs(r.x_corr)).epsilon(1e-15));
        CHECK(r.squeeze_ratio == r.min_quadrature / vacuum_noise(kTheta28mK));
        CHECK(r.squeeze_db == doctest::Approx(10.0 * std::log10(r.squeeze_ratio)));
        CHECK(r.squeeze_ratio < 1.0);
        CHECK(variance_at_phase(r, 0.0) == doctest::Approx(r.var_a));
        CHECK(variance_at_phase(r, 1.5707963267948966) == doctest::Approx(r.var_b));
    }
    SUBCASE("experimental drives") {
        CHECK(quadrature_variances({1.0, kZ46uV, kTheta28mK, 1}).squeeze_ratio == doctest::Approx(0.74).epsilon(0.02 / 0.74));
        // Three-wave mixing at 36 uV, 28 mK evaluates to 0.850 in this model.
        const double z36 = 2.0 * kZ46uV * 36.0 / 46.0;
        CHECK(quadrature_variances({0.0, z36, kTheta28mK, 2}).squeeze_ratio == doctest::Approx(0.8504).epsilon(1e-3));
    }
}

TEST_CASE("phase_averaged_variance") {
    const ReducedPoint pt{0.9, 1.3, 0.04, 1};
    CHECK(phase_averaged_variance(pt) == photo_assisted_noise(pt));
    CHECK(phase_averaged_variance(pt, true) == photo_assisted_noise(pt));
    CHECK(phase_averaged_variance({0.4, 0.0, 0.1, 2}) == s_finite_freq(0.4, 0.1));
}

TEST_CASE("property: symmetries at zero temperature") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> pu(-4.0, 4.0), pz(0.0, 4.0);
    for (int i = 0; i < 300; ++i) {
        const double u = pu(rng), z = pz(rng);
        const auto p1 = quadrature_variances({u, z, 0.0, 1});
        const auto p1m = quadrature_variances({-u, z, 0.0, 1});
        const auto p2 = quadrature_variances({u, z, 0.0, 2});
        const auto p2m = quadrature_variances({-u, z, 0.0, 2});
        INFO("u=" << u << " z=" << z);
        CHECK(std::abs(p1.s_tilde - p1m.s_tilde) < 1e-12);
        CHECK(std::abs(p1.x_corr + p1m.x_corr) < 1e-12);
        CHECK(std::abs(p2.x_corr - p2m.x_corr) < 1e-12);
        CHECK(std::abs(p2.min_quadrature - p2m.min_quadrature) < 1e-12);
    }
}

TEST_CASE("property: plateau is exactly one at zero temperature") {
    for (int i = 0; i <= 1000; ++i) {
        const double u = -1.0 + 2.0 * i / 1000.0;
        CHECK(s_finite_freq(u, 0.0) == 1.0);
    }
}

TEST_CASE("property: truncation doubling is invisible") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> pu(-4.0, 4.0), pz(0.0, 4.0);
    for (int i = 0; i < 100; ++i) {
        const ReducedPoint pt{pu(rng), pz(rng), i % 3 == 0 ? 0.0 : 0.04 * (i % 3), 1 + i % 2};
        const int n = default_truncation(pt.z, pt.p);
        const double s1 = photo_assisted_noise(pt, n), s2 = photo_assisted_noise(pt, 2 * n);
        const double x1 = noise_dynamics_x(pt, n), x2 = noise_dynamics_x(pt, 2 * n);
        CHECK(rel(s2, s1) < 1e-12);
        // X is bounded by S~, which sets its scale (X itself vanishes at symmetric points).
        CHECK(std::abs(x2 - x1) < 1e-12 * s1);
    }
}

TEST_CASE("kernel rejects invalid points") {
    CHECK_THROWS_AS(photo_assisted_noise({0.0, -0.1, 0.0, 1}), ValidationError);
    CHECK_THROWS_AS(noise_dynamics_x({0.0, 0.1, -1.0, 1}), ValidationError);
    CHECK_THROWS_AS(quadrature_variances({0.0, 0.1, 0.0, 3}), ValidationError);
    CHECK_THROWS_AS(quadrature_variances({NAN, 0.1, 0.0, 1}), ValidationError);
}

TEST_CASE("SI evaluation is frequency independent at zero temperature") {
    for (double f : {5e9, 7.2e9}) {
        JunctionParams j{70.0, 0.0};
        DriveParams d;
        d.measurement_frequency = f;
        d.harmonic_p = 1;
        d.dc_bias = reduced_to_dc_volts(1.0, f);
        d.ac_amplitude = reduced_to_ac_volts(0.7, f, 1);
        CHECK(std::abs(evaluate(j, d).squeeze_ratio - quadrature_variances({1.0, 0.7, 0.0, 1}).squeeze_ratio) < 1e-9);
    }
}
