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

// Postselected von Neumann measurement with an oscillator pointer.
//
// The impulsive coupling exp(-i g A (x) P) sends eigenvalue branch a_i of the
// measured system to D(Gamma a_i / 2)|phi> on the pointer. After projecting the
// system on |psi_f>, the pointer is left in
//
//   |Theta> = N sum_i w_i D(Gamma a_i / 2)|phi>,   w_i = alpha_i beta_i^*.
//
// Shifts are computed two independent ways:
//   * summation formulas over displacement matrix elements <m|D(delta)|n> with
//     delta = Gamma (a_i - a_j) / 2, never forming |Theta>;
//   * an oracle that propagates each branch under the truncated generator
//     Gamma a_i / 2 (a^dagger - a) in an enlarged space and measures <X>, <P> on
//     the resulting state. The oracle never calls displacement_element.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pointershift/errors.hpp"
#include "pointershift/fock.hpp"
#include "pointershift/measured_system.hpp"
#include "pointershift/parallel.hpp"
#include "pointershift/pointer_states.hpp"

namespace pointershift {

/// Postselection probabilities below this raise SelectionError.
inline constexpr double kPostselectFloor = 1e-12;
/// Oracle branches with more than this weight in their top levels raise TruncationError.
inline constexpr double kBranchTailLimit = 1e-8;

struct ShiftReport {
    double gamma = 0.0;
    double theta = std::numeric_limits<double>::quiet_NaN();
    double delta_x = 0.0;
    double delta_p = 0.0;
    double norm_const = 1.0;
    double postselect_prob = 1.0;
    double tail_mass = 0.0;
    std::string error;  // empty on success

    bool ok() const { return error.empty(); }
};

struct FinalPointerState {
    FockVector state;
    double postselect_prob;
    double branch_tail;  // largest top-level weight over the displaced branches
};

/// Knobs for the summation path. `element_perturbation` multiplies every
/// displacement matrix element by a deterministic, index-dependent factor
/// 1 + eps * ((m + 3n) mod 7 - 3) / 3; it exists only to prove that the
/// cross-checks detect a broken kernel.
struct SummationOptions {
    double element_perturbation = 0.0;
    /// Amplitudes smaller than support_cutoff * max|c_n| are left out of the
    /// double sums; each dropped term is bounded by that ratio since |<m|D|n>| <= 1.
    double support_cutoff = 1e-30;
};

namespace detail {

struct PairSums {
    cplx s0;      // sum_{m,n} c_m^* c_n <m|D|n>
    cplx s_up;    // sum_{m,n} c_m^* c_n sqrt(n+1) <m|D|n+1>
    cplx s_down;  // sum_{m,n} c_m^* c_n sqrt(n)   <m|D|n-1>
};

inline std::vector<std::size_t> support_of(std::span<const cplx> c, double cutoff) {
    double peak = 0.0;
    for (const auto &v : c) {
        peak = std::max(peak, std::abs(v));
    }
    std::vector<std::size_t> idx;
    for (std::size_t n = 0; n < c.size(); ++n) {
        if (std::abs(c[n]) > cutoff * peak) {
            idx.push_back(n);
        }
    }
    return idx;
}

inline PairSums displacement_sums(std::span<const cplx> c, std::span<const std::size_t> support,
                                  cplx delta, const SummationOptions &opts) {
    // y_k = sum_m c_m^* <m|D|k> for every column k adjacent to the support.
    std::vector<std::size_t> columns;
    columns.reserve(3 * support.size());
    for (std::size_t n : support) {
        if (n > 0) columns.push_back(n - 1);
        columns.push_back(n);
        columns.push_back(n + 1);
    }
    std::sort(columns.begin(), columns.end());
    columns.erase(std::unique(columns.begin(), columns.end()), columns.end());

    std::map<std::size_t, cplx> y;
    for (std::size_t k : columns) {
        cplx s = 0.0;
        for (std::size_t m : support) {
            cplx d = displacement_element(m, k, delta);
            if (opts.element_perturbation != 0.0) {
                d *= 1.0 + opts.element_perturbation *
                               (static_cast<double>((m + 3 * k) % 7) - 3.0) / 3.0;
            }
            s += std::conj(c[m]) * d;
        }
        y[k] = s;
    }
    PairSums out{0.0, 0.0, 0.0};
    for (std::size_t n : support) {
        out.s0 += y[n] * c[n];
        out.s_up += std::sqrt(static_cast<double>(n + 1)) * y[n + 1] * c[n];
        if (n > 0) {
            out.s_down += std::sqrt(static_cast<double>(n)) * y[n - 1] * c[n];
        }
    }
    return out;
}

struct GeneralSums {
    double norm_inv_sq;  // 1 / N^2, the postselection probability
    cplx x_bracket;      // sum_ij w_j^* w_i (s_up + s_down + Gamma a_i s0)
    cplx p_bracket;      // sum_ij w_j^* w_i (s_up - s_down)
};

inline GeneralSums general_sums(const Observable &obs, const SelectionPair &sel,
                                const FockVector &pointer, const CouplingConfig &cfg,
                                const SummationOptions &opts) {
    check_sizes(obs, sel.size(), "general_sums");
    const auto c = pointer.amps();
    const auto support = support_of(c, opts.support_cutoff);
    const auto a = obs.eigenvalues();
    std::map<double, PairSums> cache;
    cplx norm = 0.0;
    cplx xb = 0.0;
    cplx pb = 0.0;
    for (std::size_t i = 0; i < sel.size(); ++i) {
        const cplx wi = sel.weight(i);
        if (wi == cplx(0.0)) continue;
        for (std::size_t j = 0; j < sel.size(); ++j) {
            const cplx wj = sel.weight(j);
            if (wj == cplx(0.0)) continue;
            const double delta = 0.5 * cfg.gamma * (a[i] - a[j]);
            auto it = cache.find(delta);
            if (it == cache.end()) {
                it = cache.emplace(delta, displacement_sums(c, support, delta, opts)).first;
            }
            const PairSums &s = it->second;
            const cplx w = std::conj(wj) * wi;
            norm += w * s.s0;
            xb += w * (s.s_up + s.s_down + cfg.gamma * a[i] * s.s0);
            pb += w * (s.s_up - s.s_down);
        }
    }
    if (!(norm.real() > kPostselectFloor)) {
        throw SelectionError("postselection probability " + std::to_string(norm.real()) +
                             " below 1e-12");
    }
    return GeneralSums{norm.real(), xb, pb};
}

// Pad so that a branch displaced by |delta| from a state supported below dim
// stays well inside the enlarged space.
inline std::size_t oracle_dim(std::size_t dim, double max_shift) {
    const double pad = 32.0 + 12.0 * max_shift * (std::sqrt(static_cast<double>(dim)) + max_shift);
    return dim + static_cast<std::size_t>(std::ceil(pad));
}

// (G v)_n = delta sqrt(n) v_{n-1} - delta^* sqrt(n+1) v_{n+1}, truncated.
inline void apply_generator(std::span<const cplx> v, cplx delta, std::span<cplx> out) {
    const std::size_t d = v.size();
    for (std::size_t n = 0; n < d; ++n) {
        cplx s = 0.0;
        if (n > 0) s += delta * std::sqrt(static_cast<double>(n)) * v[n - 1];
        if (n + 1 < d) s -= std::conj(delta) * std::sqrt(static_cast<double>(n + 1)) * v[n + 1];
        out[n] = s;
    }
}

}  // namespace detail

/// exp(delta a^dagger - delta^* a) v on the truncated space of v, by Taylor
/// steps of operator norm <= 1/2.
inline std::vector<cplx> propagate_displacement(std::span<const cplx> v, cplx delta) {
    std::vector<cplx> acc(v.begin(), v.end());
    const double mag = std::abs(delta);
    if (mag == 0.0) {
        return acc;
    }
    const double gen_norm = 2.0 * mag * std::sqrt(static_cast<double>(v.size()));
    const auto steps = static_cast<std::size_t>(std::ceil(gen_norm / 0.5));
    const cplx h = delta / static_cast<double>(steps);
    std::vector<cplx> term(v.size());
    std::vector<cplx> next(v.size());
    for (std::size_t s = 0; s < steps; ++s) {
        term = acc;
        const double scale = std::sqrt(norm_squared(acc));
        for (int k = 1; k < 80; ++k) {
            detail::apply_generator(term, h, next);
            const double inv_k = 1.0 / k;
            double tn = 0.0;
            for (std::size_t n = 0; n < v.size(); ++n) {
                term[n] = next[n] * inv_k;
                acc[n] += term[n];
                tn += std::norm(term[n]);
            }
            if (std::sqrt(tn) < 1e-19 * scale) {
                break;
            }
        }
    }
    return acc;
}

/// Postselected pointer state by direct propagation of every eigenvalue branch.
inline FinalPointerState evolve_postselect_oracle(const Observable &obs, const SelectionPair &sel,
                                                  const FockVector &pointer,
                                                  const CouplingConfig &cfg) {
    check_sizes(obs, sel.size(), "evolve_postselect_oracle");
    double max_shift = 0.0;
    for (double a : obs.eigenvalues()) {
        max_shift = std::max(max_shift, std::abs(0.5 * cfg.gamma * a));
    }
    const std::size_t work = detail::oracle_dim(pointer.dim(), max_shift);
    std::vector<cplx> padded(work, 0.0);
    std::copy(pointer.amps().begin(), pointer.amps().end(), padded.begin());

    std::vector<cplx> total(work, 0.0);
    double worst_tail = 0.0;
    for (std::size_t i = 0; i < sel.size(); ++i) {
        const cplx w = sel.weight(i);
        if (w == cplx(0.0)) continue;
        const auto branch = propagate_displacement(padded, 0.5 * cfg.gamma * obs.eigenvalues()[i]);
        double tail = 0.0;
        for (std::size_t n = work - kTailLevels; n < work; ++n) {
            tail += std::norm(branch[n]);
        }
        worst_tail = std::max(worst_tail, tail);
        if (tail > kBranchTailLimit) {
            throw TruncationError("evolve_postselect_oracle: displaced branch " + std::to_string(i) +
                                  " has tail mass " + std::to_string(tail));
        }
        for (std::size_t n = 0; n < work; ++n) {
            total[n] += w * branch[n];
        }
    }
    const double prob = norm_squared(total);
    if (!(prob > kPostselectFloor)) {
        throw SelectionError("evolve_postselect_oracle: postselection probability " +
                             std::to_string(prob) + " below 1e-12");
    }
    return FinalPointerState{FockVector(std::move(total)), prob, worst_tail};
}

struct OracleShifts {
    double delta_x;
    double delta_p;
    double postselect_prob;
};

/// <X>, <P> differences measured on the oracle state.
inline OracleShifts oracle_shifts(const Observable &obs, const SelectionPair &sel,
                                  const FockVector &pointer, const CouplingConfig &cfg) {
    const auto fin = evolve_postselect_oracle(obs, sel, pointer, cfg);
    const double x0 = mean_position(pointer.amps(), cfg.sigma);
    const double p0 = mean_momentum(pointer.amps(), cfg.sigma);
    return OracleShifts{mean_position(fin.state.amps(), cfg.sigma) - x0,
                        mean_momentum(fin.state.amps(), cfg.sigma) - p0, fin.postselect_prob};
}

/// Position and momentum shift, normalization and postselection probability
/// from the displacement-element double sums. Valid at every coupling strength.
inline ShiftReport evaluate_shifts(const Observable &obs, const SelectionPair &sel,
                                   const FockVector &pointer, const CouplingConfig &cfg,
                                   const SummationOptions &opts = {}) {
    const auto sums = detail::general_sums(obs, sel, pointer, cfg, opts);
    const auto c = pointer.amps();
    ShiftReport r;
    r.gamma = cfg.gamma;
    r.postselect_prob = sums.norm_inv_sq;
    r.norm_const = 1.0 / std::sqrt(sums.norm_inv_sq);
    if (cfg.gamma == 0.0) {
        // D(0) is the identity: the pointer is untouched, only the overlap phase remains.
        r.delta_x = 0.0;
        r.delta_p = 0.0;
    } else {
        r.delta_x = (cfg.sigma * sums.x_bracket / sums.norm_inv_sq).real() - mean_position(c, cfg.sigma);
        r.delta_p = (cplx(0.0, 0.5 / cfg.sigma) * sums.p_bracket / sums.norm_inv_sq).real() -
                    mean_momentum(c, cfg.sigma);
    }
    r.tail_mass = pointer.tail_mass();
    return r;
}

inline double position_shift_general(const Observable &obs, const SelectionPair &sel,
                                     const FockVector &pointer, const CouplingConfig &cfg,
                                     const SummationOptions &opts = {}) {
    return evaluate_shifts(obs, sel, pointer, cfg, opts).delta_x;
}

inline double momentum_shift_general(const Observable &obs, const SelectionPair &sel,
                                     const FockVector &pointer, const CouplingConfig &cfg,
                                     const SummationOptions &opts = {}) {
    return evaluate_shifts(obs, sel, pointer, cfg, opts).delta_p;
}

/// g Re<A>_w + 2 g Im<A>_w Im(<a^2> - <a>^2).
inline double position_shift_weak_limit(const Observable &obs, const SelectionPair &sel,
                                        const FockVector &pointer, const CouplingConfig &cfg) {
    const cplx aw = weak_value(obs, sel);
    const auto [a1, a2] = moments_a(pointer);
    return cfg.g * aw.real() + 2.0 * cfg.g * aw.imag() * (a2 - a1 * a1).imag();
}

/// g <A>_c.
inline double position_shift_strong_limit(const Observable &obs, const SelectionPair &sel,
                                          const CouplingConfig &cfg) {
    return cfg.g * conditional_expectation(obs, sel);
}

/// 2 g Im<A>_w Var(P).
inline double momentum_shift_weak_limit(const Observable &obs, const SelectionPair &sel,
                                        const FockVector &pointer, const CouplingConfig &cfg) {
    const cplx aw = weak_value(obs, sel);
    return 2.0 * cfg.g * aw.imag() * momentum_variance(pointer, cfg.sigma);
}

/// The strong-coupling momentum shift vanishes for every pointer and selection.
constexpr double momentum_shift_strong_limit() { return 0.0; }

// Coherent pointer |beta> measuring sigma_x with pre |down> and post
// cos(theta)|up> - sin(theta)|down>. All closed forms share
//   D = 1 - cos(2 theta) cos(2 Gamma Im(beta)) exp(-Gamma^2 / 2),
// and the postselection probability is D / 2.

inline double coherent_denominator(double theta, cplx beta, double gamma) {
    return 1.0 - std::cos(2.0 * theta) * std::cos(2.0 * gamma * beta.imag()) *
                     std::exp(-0.5 * gamma * gamma);
}

namespace detail {
inline double guarded_denominator(double theta, cplx beta, double gamma, const char *what) {
    const double d = coherent_denominator(theta, beta, gamma);
    if (!(d > kPostselectFloor)) {
        throw SelectionError(std::string(what) + ": postselection probability vanishes");
    }
    return d;
}
}  // namespace detail

/// delta_x = -g sin(2 theta) / D.
inline double coherent_position_shift(double theta, cplx beta, const CouplingConfig &cfg) {
    const double d = detail::guarded_denominator(theta, beta, cfg.gamma, "coherent_position_shift");
    return -cfg.g * std::sin(2.0 * theta) / d;
}

/// delta_p = Gamma cos(2 theta) sin(2 Gamma Im beta) exp(-Gamma^2/2) / (2 sigma D).
inline double coherent_momentum_shift(double theta, cplx beta, const CouplingConfig &cfg) {
    const double d = detail::guarded_denominator(theta, beta, cfg.gamma, "coherent_momentum_shift");
    const double gm = cfg.gamma;
    return gm * std::cos(2.0 * theta) * std::sin(2.0 * gm * beta.imag()) * std::exp(-0.5 * gm * gm) /
           (2.0 * cfg.sigma * d);
}

/// Scan input. With both `observable` and `selection` set the selection is fixed
/// and theta is not swept; otherwise each theta builds qubit_sigma_x(theta).
struct ScanScenario {
    std::optional<Observable> observable;
    std::optional<SelectionPair> selection;
    FockVector pointer;
    double sigma = 1.0;
    SummationOptions options{};
};

/// One report per (gamma, theta), gamma-major. Failing points carry NaN shifts
/// and an error message; the scan continues.
inline std::vector<ShiftReport> shift_scan(const ScanScenario &sc, std::span<const double> gammas,
                                           std::span<const double> thetas,
                                           std::size_t threads = thread_cap()) {
    const bool fixed = sc.observable.has_value() && sc.selection.has_value();
    const std::vector<double> nan_theta{std::numeric_limits<double>::quiet_NaN()};
    if (!fixed && thetas.empty()) {
        throw InvalidArgument("shift_scan: theta list required without a fixed selection");
    }
    const std::span<const double> ths = fixed ? std::span<const double>(nan_theta) : thetas;
    std::vector<ShiftReport> rows(gammas.size() * ths.size());
    parallel_for(
        rows.size(),
        [&](std::size_t k) {
            const double gm = gammas[k / ths.size()];
            const double th = ths[k % ths.size()];
            ShiftReport &row = rows[k];
            try {
                const auto cfg = CouplingConfig::from_gamma(gm, sc.sigma);
                if (fixed) {
                    row = evaluate_shifts(*sc.observable, *sc.selection, sc.pointer, cfg, sc.options);
                } else {
                    const auto q = qubit_sigma_x(th);
                    row = evaluate_shifts(q.observable, q.selection, sc.pointer, cfg, sc.options);
                }
            } catch (const Error &e) {
                const double nan = std::numeric_limits<double>::quiet_NaN();
                row = ShiftReport{};
                row.delta_x = row.delta_p = row.norm_const = row.postselect_prob = nan;
                row.tail_mass = sc.pointer.tail_mass();
                row.error = e.what();
            }
            row.gamma = gm;
            row.theta = th;
        },
        threads);
    return rows;
}

}  // namespace pointershift
