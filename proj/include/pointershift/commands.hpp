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

// Command implementations behind the pointer_shift executable. Each returns the
// process exit status and writes data to `out`, diagnostics to `err`.

#pragma once

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pointershift/config.hpp"
#include "pointershift/errors.hpp"
#include "pointershift/phase_space.hpp"
#include "pointershift/transition.hpp"
#include "pointershift/verify.hpp"

namespace pointershift {

enum ExitCode : int {
    kExitOk = 0,
    kExitInvariantFailure = 1,
    kExitConfigError = 2,
    kExitNumericFailure = 3,
};

struct ShiftScanOptions {
    bool strict = false;
    bool with_ratio = false;         // append delta_x / g
    bool check_convergence = false;  // rerun at 2 * dim, require moves < 1e-9
    std::size_t threads = thread_cap();
};

inline const char *kShiftScanHeader = "gamma,theta,delta_x,delta_p,postselect_prob,tail_mass";

inline int run_shift_scan(const ScenarioConfig &cfg, const ShiftScanOptions &opts, std::ostream &out,
                          std::ostream &err) {
    const FockVector pointer = cfg.make_pointer_state();
    std::vector<double> gammas = cfg.gammas;
    if (gammas.empty()) gammas.push_back(cfg.coupling().gamma);
    std::vector<double> thetas = cfg.thetas;
    if (cfg.qubit_sigma_x && thetas.empty()) thetas.push_back(cfg.theta);

    auto scenario_for = [&](const FockVector &p) {
        ScanScenario sc{std::nullopt, std::nullopt, p, cfg.sigma, {}};
        if (!cfg.qubit_sigma_x) {
            auto [obs, sel] = cfg.measurement();
            sc.observable = std::move(obs);
            sc.selection = std::move(sel);
        }
        return sc;
    };
    const auto rows = shift_scan(scenario_for(pointer), gammas, thetas, opts.threads);

    bool numeric_failure = false;
    for (const auto &r : rows) {
        if (!r.ok()) {
            numeric_failure = true;
            err << "warning: gamma=" << r.gamma << " theta=" << r.theta << ": " << r.error << '\n';
        }
    }
    if (pointer.tail_mass() > kTailWarning) {
        err << "warning: pointer tail mass " << pointer.tail_mass() << " exceeds 1e-10 at dim "
            << pointer.dim() << '\n';
    }
    if (opts.check_convergence) {
        ScenarioConfig doubled = cfg;
        doubled.dim = 2 * pointer.dim();
        const auto again = shift_scan(scenario_for(doubled.make_pointer_state()), gammas, thetas, opts.threads);
        double worst = 0.0;
        for (std::size_t k = 0; k < rows.size(); ++k) {
            if (rows[k].ok() && again[k].ok()) {
                worst = std::max({worst, std::abs(rows[k].delta_x - again[k].delta_x),
                                  std::abs(rows[k].delta_p - again[k].delta_p)});
            }
        }
        if (worst >= 1e-9) {
            numeric_failure = true;
            err << "warning: doubling dim moved shifts by " << worst << " (limit 1e-9)\n";
        } else {
            err << "convergence: doubling dim moved shifts by " << worst << '\n';
        }
    }

    out << kShiftScanHeader;
    if (opts.with_ratio) out << ",delta_x_over_g";
    out << '\n' << std::setprecision(17);
    for (const auto &r : rows) {
        out << r.gamma << ',' << r.theta << ',' << r.delta_x << ',' << r.delta_p << ','
            << r.postselect_prob << ',' << r.tail_mass;
        if (opts.with_ratio) {
            const double g = r.gamma * cfg.sigma;
            out << ',' << (g != 0.0 ? r.delta_x / g : std::numeric_limits<double>::quiet_NaN());
        }
        out << '\n';
    }
    return numeric_failure && opts.strict ? kExitNumericFailure : kExitOk;
}

enum class GridFormat { csv, json };

struct QfuncOptions {
    bool closed_form = false;
    GridFormat format = GridFormat::csv;
    std::size_t threads = thread_cap();
};

/// Q function of the postselected pointer at the configured coupling, either
/// from the oracle state or (qubit scenario with coherent pointer) the closed form.
inline int run_qfunc(const ScenarioConfig &cfg, const QfuncOptions &opts, std::ostream &out,
                     std::ostream &err) {
    const auto coupling = cfg.coupling();
    const FockVector pointer = cfg.make_pointer_state();
    const auto [obs, sel] = cfg.measurement();
    const cplx centre = moments_a(pointer).first;
    double spread = 0.0;
    for (double a : obs.eigenvalues()) spread = std::max(spread, std::abs(coupling.gamma * a));
    const GridSpec spec = cfg.grid.value_or(default_qfunc_grid(centre, spread));

    PhaseGrid grid;
    if (opts.closed_form) {
        if (!cfg.qubit_sigma_x || cfg.pointer.family != PointerFamily::coherent) {
            throw ConfigError("--closed-form needs the qubit_sigma_x selection and a coherent pointer");
        }
        const cplx beta = cfg.pointer.alpha;
        const double th = cfg.theta;
        grid = q_grid(spec, [&](cplx a) { return q_final_closed_form(th, beta, coupling, a); }, opts.threads);
    } else {
        const auto fin = evolve_postselect_oracle(obs, sel, pointer, coupling);
        if (fin.state.tail_mass() > kTailWarning) {
            err << "warning: final state tail mass " << fin.state.tail_mass() << '\n';
        }
        grid = q_grid(fin.state, spec, opts.threads);
    }

    if (opts.format == GridFormat::csv) {
        write_grid_csv(out, grid);
    } else {
        json meta{{"gamma", coupling.gamma},
                  {"g", coupling.g},
                  {"sigma", coupling.sigma},
                  {"mode", opts.closed_form ? "closed_form" : "oracle"}};
        if (cfg.qubit_sigma_x) meta["theta"] = cfg.theta;
        meta["beta"] = json::array({cfg.pointer.alpha.real(), cfg.pointer.alpha.imag()});
        out << grid_to_json(grid, std::move(meta)).dump(1) << '\n';
    }
    return kExitOk;
}

/// Readout values and weak/strong closed-form shifts for the configured scenario.
inline int run_limits(const ScenarioConfig &cfg, std::ostream &out) {
    const auto coupling = cfg.coupling();
    const FockVector pointer = cfg.make_pointer_state();
    const auto [obs, sel] = cfg.measurement();
    const auto [a1, a2] = moments_a(pointer);
    out << std::setprecision(17);
    out << "gamma " << coupling.gamma << "\ng " << coupling.g << "\nsigma " << coupling.sigma << '\n';
    out << "overlap_abs " << std::abs(sel.overlap()) << '\n';
    out << "expectation " << expectation_value(obs, sel.pre()) << '\n';
    try {
        out << "conditional " << conditional_expectation(obs, sel) << '\n';
        out << "delta_x_strong " << position_shift_strong_limit(obs, sel, coupling) << '\n';
    } catch (const SelectionError &e) {
        out << "conditional undefined (" << e.what() << ")\n";
    }
    out << "delta_p_strong " << momentum_shift_strong_limit() << '\n';
    out << "pointer_a " << a1.real() << ' ' << a1.imag() << '\n';
    out << "pointer_a2 " << a2.real() << ' ' << a2.imag() << '\n';
    out << "pointer_var_p " << momentum_variance(pointer, coupling.sigma) << '\n';
    try {
        const cplx w = weak_value(obs, sel);
        out << "weak_value " << w.real() << ' ' << w.imag() << '\n';
        out << "delta_x_weak " << position_shift_weak_limit(obs, sel, pointer, coupling) << '\n';
        out << "delta_p_weak " << momentum_shift_weak_limit(obs, sel, pointer, coupling) << '\n';
    } catch (const SelectionError &e) {
        out << "weak_value undefined (" << e.what() << ")\n";
    }
    return kExitOk;
}

inline int run_verify(const VerifyOptions &opts, std::ostream &out) {
    const auto results = run_invariant_suite(opts);
    bool all = true;
    for (const auto &r : results) {
        out << (r.pass ? "PASS  " : "FAIL  ") << std::left << std::setw(52) << r.name << r.detail << '\n';
        all = all && r.pass;
    }
    out << (all ? "all invariants hold\n" : "invariant failure\n");
    return all ? kExitOk : kExitInvariantFailure;
}

/// Plotting recipe for shift-scan output.
inline std::string gnuplot_hint(const std::string &csv_path) {
    std::ostringstream os;
    os << "set datafile separator ','; set key autotitle columnhead; "
       << "set xlabel 'theta'; set ylabel 'delta_x / g'; "
       << "plot for [G in system(\"awk -F, 'NR>1{print $1}' " << csv_path
       << " | sort -gu | tr '\\n' ' '\")] '" << csv_path
       << "' using ($1==G ? $2 : NaN):($3/G) with lines title sprintf('Gamma=%s', G)";
    return os.str();
}

}  // namespace pointershift
