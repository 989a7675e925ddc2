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

// Self-check suite behind the `verify` command, plus the random scenario
// generator it shares with the test suites.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pointershift/fock.hpp"
#include "pointershift/measured_system.hpp"
#include "pointershift/phase_space.hpp"
#include "pointershift/pointer_states.hpp"
#include "pointershift/transition.hpp"

namespace pointershift {

/// Literal series L_n^{(eta)}(x) = sum_k C(n+eta, n-k) (-x)^k / k!.
#ifdef __SIZEOF_FLOAT128__
using wide_real = __float128;
#else
using wide_real = long double;
#endif

inline double laguerre_series(std::size_t n, double eta, double x) {
    // Terms reach ~1e12 before cancelling at n=15, so long double is not enough.
    wide_real total = 0;
    for (std::size_t k = 0; k <= n; ++k) {
        wide_real binom = 1;
        for (std::size_t i = 1; i <= n - k; ++i) {
            binom *= (static_cast<wide_real>(eta) + static_cast<wide_real>(k + i)) / static_cast<wide_real>(i);
        }
        wide_real term = binom;
        for (std::size_t i = 1; i <= k; ++i) {
            term *= -static_cast<wide_real>(x) / static_cast<wide_real>(i);
        }
        total += term;
    }
    return static_cast<double>(total);
}

/// <m|D(alpha)|n> from the normal-ordered product e^{-|alpha|^2/2} e^{alpha a^dagger} e^{-alpha^* a};
/// finite sum, accurate for small m, n and |alpha|.
inline cplx displacement_element_normal_ordered(std::size_t m, std::size_t n, cplx alpha) {
    using lc = std::complex<long double>;
    const lc a(alpha.real(), alpha.imag());
    const lc b = -std::conj(a);
    auto fact = [](std::size_t k) {
        long double f = 1.0L;
        for (std::size_t i = 2; i <= k; ++i) f *= static_cast<long double>(i);
        return f;
    };
    lc total = 0.0L;
    for (std::size_t k = 0; k <= std::min(m, n); ++k) {
        const long double coeff = std::sqrt(fact(m) * fact(n)) / (fact(k) * fact(m - k) * fact(n - k));
        total += coeff * std::pow(a, static_cast<int>(m - k)) * std::pow(b, static_cast<int>(n - k));
    }
    total *= std::exp(-0.5L * std::norm(a));
    return {static_cast<double>(total.real()), static_cast<double>(total.imag())};
}

struct RandomScenario {
    Observable observable;
    SelectionPair selection;
    FockVector pointer;
    CouplingConfig coupling;
    std::string description;
};

/// d in {2, 3} eigenvalues uniform in [-1, 1]; complex normal selections with
/// |<psi_f|psi_i>| > 0.05; pointer drawn from coherent |alpha| <= 2, squeezed
/// r <= 1 (|alpha| <= 1), SPAC |alpha| <= 2 or Fock n <= 3; gamma in [0, 4].
inline RandomScenario random_scenario(std::mt19937_64 &rng, std::size_t dim) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::size_t d = unit(rng) < 0.5 ? 2 : 3;
    std::vector<double> eig(d);
    for (auto &a : eig) a = -1.0 + 2.0 * unit(rng);
    auto draw = [&] {
        std::vector<cplx> v(d);
        for (auto &c : v) c = {normal(rng), normal(rng)};
        return v;
    };
    std::optional<SelectionPair> sel;
    while (!sel) {
        auto candidate = SelectionPair::normalized(draw(), draw());
        if (std::abs(candidate.overlap()) > 0.05) sel = std::move(candidate);
    }
    auto disk = [&](double radius) {
        return std::polar(radius * std::sqrt(unit(rng)), 2.0 * std::numbers::pi * unit(rng));
    };
    std::ostringstream desc;
    desc.precision(6);
    std::optional<FockVector> ptr;
    switch (static_cast<int>(unit(rng) * 4.0)) {
        case 0: {
            const cplx a = disk(2.0);
            desc << "coherent alpha=" << a;
            ptr = make_coherent(a, dim);
            break;
        }
        case 1: {
            const cplx a = disk(1.0);
            const double r = unit(rng);
            const double phi = 2.0 * std::numbers::pi * unit(rng);
            desc << "squeezed alpha=" << a << " r=" << r << " phi=" << phi;
            ptr = make_squeezed_coherent(a, r, phi, dim);
            break;
        }
        case 2: {
            const cplx a = disk(2.0);
            desc << "spac alpha=" << a;
            ptr = make_spac(a, dim);
            break;
        }
        default: {
            const auto n = static_cast<std::size_t>(unit(rng) * 4.0);
            desc << "fock n=" << n;
            ptr = FockVector::basis(std::min<std::size_t>(n, 3), dim);
            break;
        }
    }
    const double gamma = 4.0 * unit(rng);
    desc << " d=" << d << " gamma=" << gamma;
    return RandomScenario{Observable(eig), std::move(*sel), std::move(*ptr),
                          CouplingConfig::from_gamma(gamma, 0.5 + unit(rng)), desc.str()};
}

struct CheckResult {
    std::string name;
    bool pass;
    std::string detail;
};

struct VerifyOptions {
    double perturb = 0.0;                // fault injected into displacement elements
    std::optional<double> qubit_theta;   // adds a readout row for that angle
    std::uint64_t seed = 20261015;
    std::size_t oracle_trials = 24;
    std::size_t oracle_dim = 128;
};

namespace detail {

inline std::string sci(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

inline CheckResult bound_check(std::string name, double worst, double limit) {
    return CheckResult{std::move(name), worst < limit,
                       "max error " + sci(worst) + " (limit " + sci(limit) + ")"};
}

}  // namespace detail

inline std::vector<CheckResult> run_invariant_suite(const VerifyOptions &opts) {
    std::vector<CheckResult> out;
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const SummationOptions sum_opts{opts.perturb};

    {
        double worst = 0.0;
        for (std::size_t n = 0; n <= 15; ++n) {
            for (double eta : {0.0, 0.5, 1.0, 3.0, 7.5}) {
                for (double x : {0.0, 0.37, 1.1, 2.9, 6.3}) {
                    const double ref = laguerre_series(n, eta, x);
                    worst = std::max(worst, std::abs(laguerre_general(n, eta, x) - ref) /
                                                std::max(std::abs(ref), 1e-300));
                }
            }
        }
        out.push_back(detail::bound_check("laguerre recurrence vs series (n<=15)", worst, 1e-10));
    }
    {
        double worst = 0.0;
        for (std::size_t n : {0, 5, 20, 40}) {
            double s = 0.0;
            for (std::size_t m = 0; m < 200; ++m) s += std::norm(displacement_element(m, n, 1.3));
            worst = std::max(worst, std::abs(s - 1.0));
        }
        out.push_back(detail::bound_check("displacement column unitarity", worst, 1e-10));
    }
    {
        double worst = 0.0;
        for (int t = 0; t < 200; ++t) {
            const auto m = static_cast<std::size_t>(unit(rng) * 65.0);
            const auto n = static_cast<std::size_t>(unit(rng) * 65.0);
            const cplx a = std::polar(4.0 * unit(rng), 2.0 * std::numbers::pi * unit(rng));
            worst = std::max(worst, std::abs(displacement_element(m, n, a) -
                                             std::conj(displacement_element(n, m, -a))));
        }
        out.push_back(detail::bound_check("displacement branch consistency", worst, 1e-12));
    }
    {
        double worst = 0.0;
        for (std::size_t m = 0; m <= 12; ++m) {
            for (std::size_t n = 0; n <= 12; ++n) {
                const cplx a(0.7, -0.4);
                worst = std::max(worst, std::abs(displacement_element(m, n, a) -
                                                 displacement_element_normal_ordered(m, n, a)));
            }
        }
        out.push_back(detail::bound_check("displacement vs normal-ordered series", worst, 1e-12));
    }
    {
        double worst = 0.0;
        for (std::size_t dim : {2, 64, 512}) {
            for (auto k : {OperatorKind::position, OperatorKind::momentum, OperatorKind::number}) {
                worst = std::max(worst, build_operator(k, dim, 0.7).hermiticity_defect());
            }
        }
        out.push_back(detail::bound_check("hermiticity of X, P, n", worst, 1e-14));
    }
    {
        double worst = 0.0;
        for (int t = 0; t < 10; ++t) {
            const cplx a = std::polar(3.0 * unit(rng), 2.0 * std::numbers::pi * unit(rng));
            const auto [m1, m2] = moments_a(make_coherent(a, 128));
            worst = std::max({worst, std::abs(m1 - a), std::abs(m2 - a * a)});
            const double r = unit(rng);
            const double phi = 2.0 * std::numbers::pi * unit(rng);
            const auto [s1, s2] = moments_a(make_squeezed_coherent(a / 1.5, r, phi, 256));
            worst = std::max({worst, std::abs(s1 - a / 1.5),
                              std::abs(s2 - (a * a / 2.25 - std::polar(1.0, phi) * std::sinh(r) * std::cosh(r)))});
            const auto [p1, p2] = moments_a(make_spac(a, 160));
            const double x = std::norm(a);
            worst = std::max({worst, std::abs(p1 - a * (2.0 + x) / (1.0 + x)),
                              std::abs(p2 - a * a * (3.0 + x) / (1.0 + x))});
        }
        out.push_back(detail::bound_check("pointer moments <a>, <a^2>", worst, 1e-9));
    }
    {
        double worst = 0.0;
        for (int t = 0; t < 20; ++t) {
            std::normal_distribution<double> nd;
            std::vector<cplx> v(3);
            for (auto &c : v) c = {nd(rng), nd(rng)};
            const auto sel = SelectionPair::normalized(v, v);
            const Observable obs({nd(rng), nd(rng), nd(rng)});
            const double e = expectation_value(obs, sel.pre());
            // The conditional value weighs |alpha_j|^4 here, so only its range is universal.
            const double c = conditional_expectation(obs, sel);
            const double outside = std::max({0.0, obs.min() - c, c - obs.max()});
            worst = std::max({worst, outside, std::abs(weak_value(obs, sel) - e)});
        }
        out.push_back(detail::bound_check("post = pre: weak = expectation, conditional in range", worst, 1e-12));
    }
    {
        double worst = 0.0;
        std::string where;
        for (std::size_t t = 0; t < opts.oracle_trials; ++t) {
            const auto sc = random_scenario(rng, opts.oracle_dim);
            const auto gen = evaluate_shifts(sc.observable, sc.selection, sc.pointer, sc.coupling, sum_opts);
            const auto ora = oracle_shifts(sc.observable, sc.selection, sc.pointer, sc.coupling);
            const double e = std::max(std::abs(gen.delta_x - ora.delta_x), std::abs(gen.delta_p - ora.delta_p));
            if (e > worst) {
                worst = e;
                where = sc.description;
            }
        }
        auto r = detail::bound_check("oracle equivalence (summation vs propagation)", worst, 1e-8);
        if (!r.pass) r.detail += "; worst at " + where;
        out.push_back(std::move(r));
    }
    const cplx beta = std::polar(3.0, std::numbers::pi / 6.0);
    const auto coherent_r3 = make_coherent(beta, 128);
    {
        double worst = 0.0;
        for (int k = 1; k <= 30; ++k) {
            const double th = 0.05 * k;
            const auto q = qubit_sigma_x(th);
            const auto cfg = CouplingConfig::from_gamma(8.0);
            const double dx = evaluate_shifts(q.observable, q.selection, coherent_r3, cfg, sum_opts).delta_x;
            worst = std::max(worst, std::abs(dx / cfg.g + std::sin(2.0 * th)));
        }
        out.push_back(detail::bound_check("strong limit at Gamma=8: dx/g -> -sin 2theta", worst, 1e-10));
    }
    {
        double worst = 0.0;
        for (int k = 6; k <= 30; ++k) {
            const double th = 0.05 * k;
            const auto q = qubit_sigma_x(th);
            const auto cfg = CouplingConfig::from_gamma(1e-3);
            const double dx = evaluate_shifts(q.observable, q.selection, coherent_r3, cfg, sum_opts).delta_x;
            const double target = -1.0 / std::tan(th);
            worst = std::max(worst, std::abs(dx / cfg.g - target) / std::abs(target));
        }
        out.push_back(detail::bound_check("weak limit at Gamma=1e-3: dx/g -> -cot theta (rel)", worst, 1e-3));
    }
    {
        double worst = 0.0;
        const auto q = qubit_sigma_x(std::numbers::pi / 4.0);
        for (double gm : {0.1, 1.0, 5.0}) {
            const auto cfg = CouplingConfig::from_gamma(gm);
            const double dx = evaluate_shifts(q.observable, q.selection, coherent_r3, cfg, sum_opts).delta_x;
            worst = std::max(worst, std::abs(dx + cfg.g));
        }
        out.push_back(detail::bound_check("theta=pi/4: dx = -g", worst, 1e-10));
    }
    {
        double worst = 0.0;
        const cplx b = std::polar(1.0, std::numbers::pi / 6.0);
        const double th = 0.01;
        const auto q = qubit_sigma_x(th);
        const auto ptr = make_coherent(b, 64);
        for (double gm : {0.0, 0.5, 1.0, 2.0, 3.0, 5.0}) {
            const auto cfg = CouplingConfig::from_gamma(gm);
            const auto fin = evolve_postselect_oracle(q.observable, q.selection, ptr, cfg);
            const auto spec = default_qfunc_grid(b, gm, 41);
            const auto oracle = q_grid(fin.state, spec, 1);
            const auto closed = q_grid(spec, [&](cplx a) { return q_final_closed_form(th, b, cfg, a); }, 1);
            for (std::size_t i = 0; i < oracle.values.size(); ++i) {
                worst = std::max(worst, std::abs(oracle.values[i] - closed.values[i]));
            }
        }
        out.push_back(detail::bound_check("Q closed form vs oracle state", worst, 1e-9));
    }
    {
        const auto grid = q_grid(make_squeezed_coherent({0.5, 0.2}, 0.6, 0.3, 128),
                                 GridSpec{{-7.0, 7.0, 281}, {-7.0, 7.0, 281}}, 1);
        out.push_back(detail::bound_check("Q quadrature normalization", std::abs(grid.integral() - 1.0), 1e-3));
    }
    if (opts.qubit_theta) {
        const double th = *opts.qubit_theta;
        const auto q = qubit_sigma_x(th);
        const cplx w = weak_value(q.observable, q.selection);
        const double c = conditional_expectation(q.observable, q.selection);
        std::ostringstream os;
        os.precision(10);
        os << "theta=" << th << " weak=" << w.real() << " conditional=" << c
           << " overlap=" << std::abs(q.selection.overlap());
        if (std::abs(w.real() - c) < 1e-3) os << " (weak and conditional values agree)";
        out.push_back(CheckResult{"qubit sigma_x readouts", std::isfinite(w.real()) && std::isfinite(c), os.str()});
    }
    return out;
}

}  // namespace pointershift
