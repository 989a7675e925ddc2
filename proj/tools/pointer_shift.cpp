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

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pointershift/commands.hpp"
#include "pointershift/config.hpp"

namespace ps = pointershift;

namespace {

// Flag overrides applied on top of the (optional) config file.
struct Overrides {
    std::string config_path;
    std::string scenario;
    std::optional<double> theta;
    std::optional<double> gamma;
    std::optional<double> g;
    std::optional<double> sigma;
    std::optional<std::size_t> dim;
    std::string pointer;
    std::optional<double> alpha_abs;
    std::optional<double> alpha_arg;
    std::optional<double> squeeze_r;
    std::optional<double> squeeze_phi;
    std::optional<std::size_t> fock_n;
    std::vector<double> gammas;
    std::vector<double> thetas;

    void attach(CLI::App *cmd) {
        cmd->add_option("-c,--config", config_path, "Scenario JSON file");
        cmd->add_option("--scenario", scenario, "Shorthand scenario (qubit-sigma-x)")
            ->check(CLI::IsMember({"qubit-sigma-x"}));
        cmd->add_option("--theta", theta, "Postselection angle for qubit-sigma-x");
        cmd->add_option("--gamma", gamma, "Coupling strength Gamma = g / sigma");
        cmd->add_option("--g", g, "Coupling g");
        cmd->add_option("--sigma", sigma, "Pointer width");
        cmd->add_option("--dim", dim, "Fock truncation");
        cmd->add_option("--pointer", pointer, "Pointer family")
            ->check(CLI::IsMember({"fock", "coherent", "squeezed_coherent", "spac"}));
        cmd->add_option("--alpha-abs", alpha_abs, "Pointer amplitude modulus");
        cmd->add_option("--alpha-arg", alpha_arg, "Pointer amplitude phase");
        cmd->add_option("--squeeze-r", squeeze_r, "Squeeze magnitude");
        cmd->add_option("--squeeze-phi", squeeze_phi, "Squeeze phase");
        cmd->add_option("--fock-n", fock_n, "Fock level");
        cmd->add_option("--gammas", gammas, "Gamma sweep values")->delimiter(',');
        cmd->add_option("--thetas", thetas, "Theta sweep values")->delimiter(',');
    }

    ps::ScenarioConfig resolve() const {
        ps::ScenarioConfig c;
        if (!config_path.empty()) c = ps::load_config(config_path);
        if (scenario == "qubit-sigma-x") {
            c.qubit_sigma_x = true;
            c.eigenvalues.clear();
            c.labels.clear();
            c.pre.clear();
            c.post.clear();
        }
        if (theta) c.theta = *theta;
        if (sigma) c.sigma = *sigma;
        if (g) {
            c.g = *g;
            if (!gamma) c.gamma.reset();
        }
        if (gamma) {
            c.gamma = *gamma;
            if (!g) c.g.reset();
        }
        if (dim) c.dim = *dim;
        if (!pointer.empty()) c.pointer.family = ps::pointer_family_from_string(pointer);
        if (alpha_abs || alpha_arg) {
            c.pointer.alpha = std::polar(alpha_abs.value_or(std::abs(c.pointer.alpha)),
                                         alpha_arg.value_or(std::arg(c.pointer.alpha)));
        }
        if (squeeze_r) c.pointer.r = *squeeze_r;
        if (squeeze_phi) c.pointer.phi_xi = *squeeze_phi;
        if (fock_n) c.pointer.n = *fock_n;
        if (!gammas.empty()) c.gammas = gammas;
        if (!thetas.empty()) c.thetas = thetas;
        if (!c.qubit_sigma_x && c.eigenvalues.empty()) {
            throw ps::ConfigError("no measured system: give --config or --scenario qubit-sigma-x");
        }
        c.validate();
        return c;
    }
};

// Writes to the file at `path`, or stdout when empty or "-".
class Output {
  public:
    explicit Output(const std::string &path) {
        if (!path.empty() && path != "-") {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw ps::ConfigError("cannot open output file '" + path + "'");
        }
    }
    std::ostream &stream() { return file_ ? *file_ : std::cout; }

  private:
    std::unique_ptr<std::ofstream> file_;
};

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Postselected von Neumann measurement with Fock-state pointers"};
    app.require_subcommand(1);

    Overrides scan_ov;
    std::string scan_out;
    ps::ShiftScanOptions scan_opts;
    bool hint = false;
    auto *scan = app.add_subcommand("shift-scan", "Position/momentum shifts over a (Gamma, theta) grid");
    scan_ov.attach(scan);
    scan->add_option("-o,--output", scan_out, "CSV output path (default stdout)");
    scan->add_flag("--strict", scan_opts.strict, "Exit 3 when any grid point fails");
    scan->add_flag("--ratio", scan_opts.with_ratio, "Append a delta_x_over_g column");
    scan->add_flag("--check-convergence", scan_opts.check_convergence, "Rerun at twice the truncation");
    scan->add_flag("--gnuplot-hint", hint, "Print a gnuplot recipe for the output");

    Overrides q_ov;
    std::string q_out;
    std::string q_format = "csv";
    ps::QfuncOptions q_opts;
    auto *qfunc = app.add_subcommand("qfunc", "Husimi Q function of the postselected pointer on a grid");
    q_ov.attach(qfunc);
    qfunc->add_option("-o,--output", q_out, "Output path (default stdout)");
    qfunc->add_option("--format", q_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    qfunc->add_flag("--closed-form", q_opts.closed_form, "Use the coherent-pointer closed form");

    Overrides lim_ov;
    auto *limits = app.add_subcommand("limits", "Weak and strong closed-form values for a scenario");
    lim_ov.attach(limits);

    ps::VerifyOptions v_opts;
    std::string v_scenario;
    std::optional<double> v_theta;
    auto *verify = app.add_subcommand("verify", "Run the invariant suite");
    verify->add_option("--perturb", v_opts.perturb, "Perturb displacement elements by this relative amount");
    verify->add_option("--scenario", v_scenario, "Add readouts for a scenario")
        ->check(CLI::IsMember({"qubit-sigma-x"}));
    verify->add_option("--theta", v_theta, "Angle for --scenario qubit-sigma-x");
    verify->add_option("--trials", v_opts.oracle_trials, "Random oracle-equivalence trials");
    verify->add_option("--seed", v_opts.seed, "Random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : ps::kExitConfigError;
    }

    try {
        if (*scan) {
            const auto cfg = scan_ov.resolve();
            Output out(scan_out);
            const int rc = ps::run_shift_scan(cfg, scan_opts, out.stream(), std::cerr);
            if (hint) std::cerr << ps::gnuplot_hint(scan_out.empty() ? "scan.csv" : scan_out) << '\n';
            return rc;
        }
        if (*qfunc) {
            const auto cfg = q_ov.resolve();
            q_opts.format = q_format == "json" ? ps::GridFormat::json : ps::GridFormat::csv;
            Output out(q_out);
            return ps::run_qfunc(cfg, q_opts, out.stream(), std::cerr);
        }
        if (*limits) {
            return ps::run_limits(lim_ov.resolve(), std::cout);
        }
        if (*verify) {
            if (!v_scenario.empty()) v_opts.qubit_theta = v_theta.value_or(0.7853981633974483);
            return ps::run_verify(v_opts, std::cout);
        }
    } catch (const ps::ConfigError &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return ps::kExitConfigError;
    } catch (const ps::Error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return ps::kExitNumericFailure;
    }
    return ps::kExitOk;
}
