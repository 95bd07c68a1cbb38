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

#include "sqn/optimize.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>

#include "sqn/errors.hpp"
#include "sqn/parallel.hpp"

namespace sqn {
namespace {

constexpr double kTieTolerance = 1e-12;
constexpr double kSimplexFtol = 1e-13;
constexpr double kSimplexXtol = 1e-9;

struct Candidate {
    double u = 0.0;
    double z = 0.0;
    double f = std::numeric_limits<double>::infinity();
};

// Canonical ordering among near-equal optima.
bool preferred(const Candidate& a, const Candidate& b) {
    if (std::abs(a.u) != std::abs(b.u)) return std::abs(a.u) < std::abs(b.u);
    if (a.z != b.z) return a.z < b.z;
    return a.u > b.u;
}

Candidate pick_best(const std::vector<Candidate>& nodes) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : nodes) best = std::min(best, c.f);
    const double cut = best + kTieTolerance * std::max(1.0, std::abs(best));
    Candidate chosen;
    bool have = false;
    for (const auto& c : nodes) {
        if (!(c.f <= cut)) continue;
        if (!have || preferred(c, chosen)) {
            chosen = c;
            have = true;
        }
    }
    if (!have) throw NumericalError("objective not finite anywhere on the grid");
    return chosen;
}

double axis_node(const Interval& iv, int count, int i) {
    if (iv.degenerate() || count <= 1) return iv.lo;
    if (i == count - 1) return iv.hi;
    return iv.lo + (iv.hi - iv.lo) * static_cast<double>(i) / (count - 1);
}

class Objective {
public:
    Objective(double theta_T, int p) : theta_T_(theta_T), p_(p) {}

    double operator()(double u, double z) const {
        calls_.fetch_add(1, std::memory_order_relaxed);
        const double r = quadrature_variances({u, z, theta_T_, p_}).squeeze_ratio;
        return std::isfinite(r) ? r : std::numeric_limits<double>::infinity();
    }

    std::int64_t calls() const { return calls_.load(); }

private:
    double theta_T_;
    int p_;
    mutable std::atomic<std::int64_t> calls_{0};
};

// Bounded Nelder-Mead over the non-degenerate coordinates of (u, z).
// Returns the best vertex and whether the simplex collapsed before the budget.
std::pair<Candidate, bool> simplex_refine(const Objective& f, Candidate start, const Interval& bu,
                                          const Interval& bz, std::array<double, 2> step,
                                          std::int64_t budget) {
    std::vector<int> dims;
    if (!bu.degenerate()) dims.push_back(0);
    if (!bz.degenerate()) dims.push_back(1);
    const std::size_t k = dims.size();
    if (k == 0) return {start, true};

    const std::array<Interval, 2> box{bu, bz};
    auto clamp = [&](std::array<double, 2> x) {
        for (int d = 0; d < 2; ++d) x[d] = std::clamp(x[d], box[d].lo, box[d].hi);
        return x;
    };
    struct Vertex {
        std::array<double, 2> x;
        double f;
    };
    auto eval = [&](std::array<double, 2> x) {
        x = clamp(x);
        return Vertex{x, f(x[0], x[1])};
    };

    std::vector<Vertex> simplex;
    simplex.push_back({{start.u, start.z}, start.f});
    for (int d : dims) {
        std::array<double, 2> x{start.u, start.z};
        double s = step[d];
        if (x[d] + s > box[d].hi) s = -s;
        x[d] += s;
        simplex.push_back(eval(x));
    }

    bool converged = false;
    while (f.calls() < budget) {
        std::sort(simplex.begin(), simplex.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
        double diameter = 0.0;
        for (std::size_t i = 1; i <= k; ++i) {
            for (int d : dims) diameter = std::max(diameter, std::abs(simplex[i].x[d] - simplex[0].x[d]));
        }
        const double spread = simplex[k].f - simplex[0].f;
        if ((spread <= kSimplexFtol && diameter <= kSimplexXtol) || diameter <= 1e-13) {
            converged = true;
            break;
        }

        std::array<double, 2> centroid{0.0, 0.0};
        for (std::size_t i = 0; i < k; ++i) {
            for (int d = 0; d < 2; ++d) centroid[d] += simplex[i].x[d] / static_cast<double>(k);
        }
        auto along = [&](double t) {
            std::array<double, 2> x{};
            for (int d = 0; d < 2; ++d) x[d] = centroid[d] + t * (simplex[k].x[d] - centroid[d]);
            return x;
        };

        Vertex reflected = eval(along(-1.0));
        if (reflected.f < simplex[0].f) {
            Vertex expanded = eval(along(-2.0));
            simplex[k] = expanded.f < reflected.f ? expanded : reflected;
        } else if (reflected.f < simplex[k - 1].f) {
            simplex[k] = reflected;
        } else {
            const bool outside = reflected.f < simplex[k].f;
            Vertex contracted = eval(along(outside ? -0.5 : 0.5));
            if (contracted.f < (outside ? reflected.f : simplex[k].f)) {
                simplex[k] = contracted;
            } else {
                for (std::size_t i = 1; i <= k; ++i) {
                    std::array<double, 2> x{};
                    for (int d = 0; d < 2; ++d) x[d] = simplex[0].x[d] + 0.5 * (simplex[i].x[d] - simplex[0].x[d]);
                    simplex[i] = eval(x);
                }
            }
        }
    }
    const auto best = std::min_element(simplex.begin(), simplex.end(),
                                       [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
    return {{best->x[0], best->x[1], best->f}, converged};
}

// Golden-section search on [lo, hi]; the objective is unimodal within one
// grid cell on either side of the best node.
std::pair<Candidate, bool> golden_refine(const Objective& f, double z, double lo, double hi, Candidate best,
                                         std::int64_t budget) {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c, z), fd = f(d, z);
    bool converged = false;
    while (f.calls() < budget) {
        if (b - a <= 1e-11 * std::max(1.0, std::abs(a))) {
            converged = true;
            break;
        }
        if (fc <= fd) {
            b = d; d = c; fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c, z);
        } else {
            a = c; c = d; fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d, z);
        }
    }
    const Candidate inner = fc <= fd ? Candidate{c, z, fc} : Candidate{d, z, fd};
    return {inner.f < best.f ? inner : best, converged};
}

SqueezeOptimum finish(const Candidate& c, bool converged, std::int64_t evaluations) {
    SqueezeOptimum out;
    out.u_star = c.u;
    out.z_star = c.z;
    out.ratio = c.f;
    out.db = 10.0 * std::log10(c.f);
    out.converged = converged;
    out.evaluations = evaluations;
    return out;
}

void check_common(double theta_T, int p) {
    if (!(theta_T >= 0.0) || !std::isfinite(theta_T)) throw ValidationError("theta_T", "must be non-negative and finite");
    if (p != 1 && p != 2) throw ValidationError("p", "must be 1 or 2");
}

}  // namespace

void Interval::validate(const char* field) const {
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw ValidationError(field, "bounds must be finite");
    if (lo > hi) throw ValidationError(field, "empty interval (lo > hi)");
}

SqueezeOptimum optimize_squeeze(double theta_T, int p, Interval bounds_u, Interval bounds_z,
                                const OptimizeOptions& options) {
    check_common(theta_T, p);
    bounds_u.validate("bounds_u");
    bounds_z.validate("bounds_z");
    if (bounds_z.lo < 0.0) throw ValidationError("bounds_z", "drive strength must be non-negative");
    if (options.grid_u < 2 || options.grid_z < 2) throw ValidationError("grid", "need at least 2 nodes per axis");

    const Objective f(theta_T, p);
    const int nu = bounds_u.degenerate() ? 1 : options.grid_u;
    const int nz = bounds_z.degenerate() ? 1 : options.grid_z;
    std::vector<Candidate> nodes(static_cast<std::size_t>(nu) * static_cast<std::size_t>(nz));
    parallel_for(nodes.size(), [&](std::size_t idx) {
        const int iu = static_cast<int>(idx) / nz;
        const int iz = static_cast<int>(idx) % nz;
        Candidate& c = nodes[idx];
        c.u = axis_node(bounds_u, nu, iu);
        c.z = axis_node(bounds_z, nz, iz);
        c.f = f(c.u, c.z);
    });
    const Candidate grid_best = pick_best(nodes);

    const std::array<double, 2> step{
        bounds_u.degenerate() ? 0.0 : (bounds_u.hi - bounds_u.lo) / (nu - 1),
        bounds_z.degenerate() ? 0.0 : (bounds_z.hi - bounds_z.lo) / (nz - 1)};
    auto [refined, converged] =
        simplex_refine(f, grid_best, bounds_u, bounds_z, step, options.max_evaluations);
    const Candidate best = refined.f < grid_best.f ? refined : grid_best;
    return finish(best, converged, f.calls());
}

SqueezeOptimum optimize_squeeze_si(const JunctionParams& junction, double measurement_frequency, int p,
                                   Interval dc_bias_volts, Interval ac_amplitude_volts,
                                   const OptimizeOptions& options) {
    dc_bias_volts.validate("dc_bias");
    ac_amplitude_volts.validate("ac_amplitude");
    DriveParams lo;
    lo.measurement_frequency = measurement_frequency;
    lo.harmonic_p = p;
    lo.dc_bias = dc_bias_volts.lo;
    lo.ac_amplitude = ac_amplitude_volts.lo;
    DriveParams hi = lo;
    hi.dc_bias = dc_bias_volts.hi;
    hi.ac_amplitude = ac_amplitude_volts.hi;
    const ReducedPoint a = to_reduced(junction, lo);
    const ReducedPoint b = to_reduced(junction, hi);
    return optimize_squeeze(a.theta_T, p, {a.u, b.u}, {a.z, b.z}, options);
}

SqueezeOptimum optimize_bias_at_fixed_drive(double z, double theta_T, int p, Interval bounds_u,
                                            const OptimizeOptions& options) {
    check_common(theta_T, p);
    if (!(z >= 0.0) || !std::isfinite(z)) throw ValidationError("z", "must be non-negative and finite");
    bounds_u.validate("bounds_u");
    if (options.grid_bias < 2) throw ValidationError("grid", "need at least 2 bias nodes");

    const Objective f(theta_T, p);
    const int nu = bounds_u.degenerate() ? 1 : options.grid_bias;
    std::vector<Candidate> nodes(static_cast<std::size_t>(nu));
    parallel_for(nodes.size(), [&](std::size_t i) {
        Candidate& c = nodes[i];
        c.u = axis_node(bounds_u, nu, static_cast<int>(i));
        c.z = z;
        c.f = f(c.u, z);
    });
    const Candidate grid_best = pick_best(nodes);
    if (nu == 1) return finish(grid_best, true, f.calls());

    const double h = (bounds_u.hi - bounds_u.lo) / (nu - 1);
    const double lo = std::max(bounds_u.lo, grid_best.u - h);
    const double hi = std::min(bounds_u.hi, grid_best.u + h);
    auto [best, converged] = golden_refine(f, z, lo, hi, grid_best, options.max_evaluations);
    return finish(best, converged, f.calls());
}

void SweepSpec::validate() const {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
        throw ValidationError("range", "need finite lo < hi");
    }
    if (points < 2 || points > 1'000'000) throw ValidationError("points", "must be in [2, 1e6]");
    if (axis == SweepAxis::ac_amplitude && lo < 0.0) {
        throw ValidationError("range", "ac amplitude must be non-negative");
    }
    junction.validate();
    DriveParams probe = drive;
    probe.dc_bias = 0.0;
    probe.ac_amplitude = 0.0;
    probe.validate();
}

std::vector<SweepPoint> sweep(const SweepSpec& spec) {
    spec.validate();
    DriveParams base = spec.drive;
    if (spec.axis == SweepAxis::dc_bias) base.dc_bias = 0.0;
    else base.ac_amplitude = 0.0;
    const ReducedPoint origin = to_reduced(spec.junction, base);

    std::vector<SweepPoint> out(spec.points);
    const double span = spec.hi - spec.lo;
    const auto last = static_cast<double>(spec.points - 1);
    parallel_for(spec.points, [&](std::size_t i) {
        const double x = (i + 1 == spec.points) ? spec.hi : spec.lo + span * static_cast<double>(i) / last;
        ReducedPoint pt = origin;
        if (spec.units == SweepUnits::reduced) {
            (spec.axis == SweepAxis::dc_bias ? pt.u : pt.z) = x;
        } else {
            DriveParams d = base;
            (spec.axis == SweepAxis::dc_bias ? d.dc_bias : d.ac_amplitude) = x;
            pt = to_reduced(spec.junction, d);
        }
        SweepPoint& sp = out[i];
        sp.abscissa = x;
        sp.s_undriven = s_finite_freq(pt.u, pt.theta_T);
        sp.vacuum = vacuum_noise(pt.theta_T);
        sp.result = quadrature_variances(pt);
    });
    return out;
}

}  // namespace sqn
