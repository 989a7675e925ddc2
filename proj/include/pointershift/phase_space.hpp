// Copyright 2026 The pointershift Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Husimi-Kano Q function Q(alpha) = |<alpha|psi>|^2 / pi on single points and
// rectangular phase-space grids.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <utility>
#include <vector>

#include "pointershift/errors.hpp"
#include "pointershift/fock.hpp"
#include "pointershift/parallel.hpp"
#include "pointershift/transition.hpp"

#include "json.hpp"

namespace pointershift {

/// <alpha|psi> = sum_n conj(e^{-|alpha|^2/2} alpha^n / sqrt(n!)) c_n. The state
/// has finite support, so the sum is exact; probe amplitudes are formed in log
/// space and stay finite for any finite alpha.
inline cplx coherent_overlap(const FockVector &state, cplx alpha) {
    if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) {
        throw InvalidArgument("coherent_overlap: non-finite alpha");
    }
    const auto c = state.amps();
    const double mag = std::abs(alpha);
    if (mag == 0.0) {
        return c[0];
    }
    const double log_mag = std::log(mag);
    const double phase = -std::arg(alpha);
    cplx s = 0.0;
    for (std::size_t n = 0; n < c.size(); ++n) {
        const double nd = static_cast<double>(n);
        const double lg = -0.5 * mag * mag + nd * log_mag - 0.5 * std::lgamma(nd + 1.0);
        s += std::polar(std::exp(lg), nd * phase) * c[n];
    }
    return s;
}

inline double q_function(const FockVector &state, cplx alpha) {
    return std::norm(coherent_overlap(state, alpha)) / std::numbers::pi;
}

/// Q function of the postselected coherent-pointer state (sigma_x measurement,
/// pre |down>, post cos(theta)|up> - sin(theta)|down>):
///
///   Q = [ s^2 e^{-|alpha-beta-Gamma/2|^2} + c^2 e^{-|alpha-beta+Gamma/2|^2}
///         - cos(2 theta) cos(Gamma (Im alpha + Im beta))
///           e^{-|alpha-beta-Gamma/2|^2/2 - |alpha-beta+Gamma/2|^2/2} ] / (pi D)
///
/// with s = sin(pi/4 - theta), c = cos(pi/4 - theta) and D from
/// coherent_denominator. The interference phase varies with Im alpha, which is
/// what produces fringes between the two lobes.
inline double q_final_closed_form(double theta, cplx beta, const CouplingConfig &cfg, cplx alpha) {
    const double gm = cfg.gamma;
    const double d = coherent_denominator(theta, beta, gm);
    if (!(d > kPostselectFloor)) {
        throw SelectionError("q_final_closed_form: postselection probability vanishes");
    }
    const double s = std::sin(0.25 * std::numbers::pi - theta);
    const double c = std::cos(0.25 * std::numbers::pi - theta);
    const double plus = std::norm(alpha - beta - 0.5 * gm);
    const double minus = std::norm(alpha - beta + 0.5 * gm);
    const double interference = std::cos(2.0 * theta) * std::cos(gm * (alpha.imag() + beta.imag())) *
                                std::exp(-0.5 * plus - 0.5 * minus);
    return (s * s * std::exp(-plus) + c * c * std::exp(-minus) - interference) /
           (std::numbers::pi * d);
}

/// Axis-aligned sampling lattice. Points are min + k (max - min) / (count - 1);
/// a count of 1 samples min only.
struct GridAxis {
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 1;

    double at(std::size_t k) const {
        return count == 1 ? min : min + (max - min) * static_cast<double>(k) /
                                            static_cast<double>(count - 1);
    }
    double step() const {
        return count > 1 ? (max - min) / static_cast<double>(count - 1) : 0.0;
    }
};

struct GridSpec {
    GridAxis re;
    GridAxis im;
};

/// Q sampled on a grid. values[i * re.count + k] holds Q at
/// (re.at(k), im.at(i)), i.e. rows run along the imaginary axis.
struct PhaseGrid {
    GridSpec spec;
    std::vector<double> values;

    double at(std::size_t im_index, std::size_t re_index) const {
        return values[im_index * spec.re.count + re_index];
    }

    /// Riemann sum of Q dRe dIm.
    double integral() const {
        double s = 0.0;
        for (double v : values) s += v;
        return s * spec.re.step() * spec.im.step();
    }

    /// (Re alpha, Im alpha) of the largest sample.
    cplx peak() const {
        const auto it = std::max_element(values.begin(), values.end());
        const auto k = static_cast<std::size_t>(it - values.begin());
        return {spec.re.at(k % spec.re.count), spec.im.at(k / spec.re.count)};
    }

    double max_value() const { return *std::max_element(values.begin(), values.end()); }
};

/// Default window for the coherent-pointer pictures: 201 x 201 samples over
/// [Re beta - Gamma/2 - 4, Re beta + Gamma/2 + 4] x [Im beta - 4, Im beta + 4].
inline GridSpec default_qfunc_grid(cplx beta, double gamma, std::size_t count = 201) {
    const double half = 0.5 * std::abs(gamma);
    return GridSpec{{beta.real() - half - 4.0, beta.real() + half + 4.0, count},
                    {beta.imag() - 4.0, beta.imag() + 4.0, count}};
}

/// Contour level used for the pictures: the 1/e point of a coherent-state Q.
inline double one_over_e_level() { return 1.0 / (std::numbers::e * std::numbers::pi); }

/// Evaluates q(alpha) row by row; rows are independent and may run in parallel.
template <typename QFn>
PhaseGrid q_grid(const GridSpec &spec, QFn &&q, std::size_t threads = thread_cap()) {
    if (spec.re.count == 0 || spec.im.count == 0) {
        throw InvalidArgument("q_grid: empty grid");
    }
    if (!std::isfinite(spec.re.min) || !std::isfinite(spec.re.max) ||
        !std::isfinite(spec.im.min) || !std::isfinite(spec.im.max)) {
        throw InvalidArgument("q_grid: non-finite grid bounds");
    }
    PhaseGrid grid{spec, std::vector<double>(spec.re.count * spec.im.count)};
    parallel_for(
        spec.im.count,
        [&](std::size_t i) {
            const double y = spec.im.at(i);
            for (std::size_t k = 0; k < spec.re.count; ++k) {
                grid.values[i * spec.re.count + k] = q(cplx(spec.re.at(k), y));
            }
        },
        threads);
    return grid;
}

inline PhaseGrid q_grid(const FockVector &state, const GridSpec &spec,
                        std::size_t threads = thread_cap()) {
    return q_grid(spec, [&](cplx a) { return q_function(state, a); }, threads);
}

/// Number of 4-connected regions where the grid is >= level.
inline std::size_t count_regions_above(const PhaseGrid &grid, double level) {
    const std::size_t w = grid.spec.re.count;
    const std::size_t h = grid.spec.im.count;
    std::vector<char> seen(w * h, 0);
    std::vector<std::size_t> stack;
    std::size_t regions = 0;
    for (std::size_t start = 0; start < w * h; ++start) {
        if (seen[start] || grid.values[start] < level) continue;
        ++regions;
        stack.push_back(start);
        seen[start] = 1;
        while (!stack.empty()) {
            const std::size_t p = stack.back();
            stack.pop_back();
            const std::size_t x = p % w;
            const std::size_t y = p / w;
            auto visit = [&](std::size_t q) {
                if (!seen[q] && grid.values[q] >= level) {
                    seen[q] = 1;
                    stack.push_back(q);
                }
            };
            if (x > 0) visit(p - 1);
            if (x + 1 < w) visit(p + 1);
            if (y > 0) visit(p - w);
            if (y + 1 < h) visit(p + w);
        }
    }
    return regions;
}

/// Rows "alpha_r,alpha_i,q" in grid order, 17 significant digits.
inline void write_grid_csv(std::ostream &out, const PhaseGrid &grid) {
    out << "alpha_r,alpha_i,q\n";
    out << std::setprecision(17);
    for (std::size_t i = 0; i < grid.spec.im.count; ++i) {
        for (std::size_t k = 0; k < grid.spec.re.count; ++k) {
            out << grid.spec.re.at(k) << ',' << grid.spec.im.at(i) << ',' << grid.at(i, k) << '\n';
        }
    }
}

/// Ranges, row-major values and caller-supplied metadata.
inline nlohmann::json grid_to_json(const PhaseGrid &grid, nlohmann::json metadata) {
    auto axis = [](const GridAxis &a) {
        return nlohmann::json{{"min", a.min}, {"max", a.max}, {"count", a.count}};
    };
    metadata["level_1_over_e"] = one_over_e_level();
    return nlohmann::json{{"re_range", axis(grid.spec.re)},
                          {"im_range", axis(grid.spec.im)},
                          {"values", grid.values},
                          {"metadata", std::move(metadata)}};
}

}  // namespace pointershift
