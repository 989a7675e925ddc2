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

// Scenario configuration: a JSON document describing observable, selection,
// pointer, coupling, truncation, sweeps and an optional phase-space window.
//
//   {
//     "observable": {"eigenvalues": [1, -1], "labels": ["+", "-"]},
//     "selection":  {"qubit_sigma_x": true, "theta": 0.3}
//                   | {"pre": [[re, im], ...], "post": [[re, im], ...]},
//     "pointer":    {"family": "coherent", "alpha": [re, im] | {"abs": r, "arg": phi},
//                    "r": 0, "phi_xi": 0, "n": 0},
//     "coupling":   {"g": 1, "sigma": 1} | {"gamma": 1, "sigma": 1},
//     "dim": 128,
//     "sweep":      {"gammas": [...] | {"start": a, "stop": b, "count": n},
//                    "thetas": [...] | {"start": a, "stop": b, "count": n}},
//     "grid":       {"re": {"min": a, "max": b, "count": n}, "im": {...}}
//   }

#pragma once

#include <cmath>
#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pointershift/errors.hpp"
#include "pointershift/fock.hpp"
#include "pointershift/measured_system.hpp"
#include "pointershift/phase_space.hpp"
#include "pointershift/pointer_states.hpp"

#include "json.hpp"

namespace pointershift {

using nlohmann::json;

struct ScenarioConfig {
    // Measured system. With qubit_sigma_x the observable and selection are
    // built from theta and the explicit fields stay empty.
    std::vector<double> eigenvalues;
    std::vector<std::string> labels;
    bool qubit_sigma_x = false;
    double theta = 0.0;
    std::vector<cplx> pre;
    std::vector<cplx> post;

    PointerSpec pointer;

    std::optional<double> g;
    std::optional<double> gamma;
    double sigma = 1.0;

    std::optional<std::size_t> dim;
    std::vector<double> gammas;
    std::vector<double> thetas;
    std::optional<GridSpec> grid;

    /// Coupling with g = gamma * sigma when only gamma is given; zero coupling
    /// when neither is.
    CouplingConfig coupling() const {
        if (g) return CouplingConfig::from_g_sigma(*g, sigma);
        return CouplingConfig::from_gamma(gamma.value_or(0.0), sigma);
    }

    /// Observable and selection; theta overrides the configured angle for the
    /// qubit shorthand.
    std::pair<Observable, SelectionPair> measurement(std::optional<double> theta_override = {}) const {
        if (qubit_sigma_x) {
            auto q = pointershift::qubit_sigma_x(theta_override.value_or(theta));
            return {std::move(q.observable), std::move(q.selection)};
        }
        return {Observable(eigenvalues, labels), SelectionPair(pre, post)};
    }

    /// Pointer at the configured dim, or at the smallest power-of-two multiple of
    /// default_dim(pointer extent) that keeps the truncated mass below 1e-10.
    FockVector make_pointer_state() const {
        if (dim) return make_pointer(pointer, *dim);
        std::size_t d = default_dim(pointer.extent());
        for (;;) {
            try {
                return make_pointer(pointer, d);
            } catch (const TruncationError &) {
                if (d > (std::size_t{1} << 15)) throw;
                d *= 2;
            }
        }
    }

    /// Throws ConfigError when fields are missing or inconsistent.
    void validate() const {
        if (!(sigma > 0.0) || !std::isfinite(sigma)) {
            throw ConfigError("coupling.sigma must be positive");
        }
        if (g && gamma && std::abs(*gamma - *g / sigma) > 1e-12) {
            throw ConfigError("coupling: gamma disagrees with g / sigma");
        }
        if (qubit_sigma_x) {
            if (!pre.empty() || !post.empty() || !eigenvalues.empty()) {
                throw ConfigError("selection: qubit_sigma_x excludes explicit observable/pre/post");
            }
        } else {
            if (!thetas.empty()) {
                throw ConfigError("sweep.thetas requires the qubit_sigma_x selection");
            }
            try {
                (void)measurement();
            } catch (const Error &e) {
                throw ConfigError(std::string("measured system: ") + e.what());
            }
        }
        if (dim && *dim == 0) {
            throw ConfigError("dim must be positive");
        }
        if (pointer.family == PointerFamily::squeezed_coherent &&
            (!(pointer.r >= 0.0) || pointer.r > kMaxSqueeze)) {
            throw ConfigError("pointer.r must lie in [0, 20]");
        }
    }
};

namespace detail {

inline cplx complex_from_json(const json &j, const char *what) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
    if (j.is_object() && j.contains("abs")) {
        return std::polar(j.at("abs").get<double>(), j.value("arg", 0.0));
    }
    if (j.is_object() && j.contains("re")) {
        return {j.at("re").get<double>(), j.value("im", 0.0)};
    }
    throw ConfigError(std::string(what) + ": expected number, [re, im], {re, im} or {abs, arg}");
}

inline std::vector<cplx> complex_list_from_json(const json &j, const char *what) {
    if (!j.is_array()) throw ConfigError(std::string(what) + ": expected an array");
    std::vector<cplx> out;
    for (const auto &e : j) out.push_back(complex_from_json(e, what));
    return out;
}

inline json complex_to_json(cplx c) { return json::array({c.real(), c.imag()}); }

inline std::vector<double> sweep_from_json(const json &j, const char *what) {
    if (j.is_array()) return j.get<std::vector<double>>();
    if (j.is_number()) return {j.get<double>()};
    if (j.is_object()) {
        const double a = j.at("start").get<double>();
        const double b = j.at("stop").get<double>();
        const auto n = j.at("count").get<std::size_t>();
        if (n == 0) throw ConfigError(std::string(what) + ": count must be positive");
        std::vector<double> out(n);
        for (std::size_t k = 0; k < n; ++k) {
            out[k] = n == 1 ? a : a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1);
        }
        return out;
    }
    throw ConfigError(std::string(what) + ": expected list or {start, stop, count}");
}

inline GridAxis axis_from_json(const json &j) {
    return GridAxis{j.at("min").get<double>(), j.at("max").get<double>(),
                    j.at("count").get<std::size_t>()};
}

inline json axis_to_json(const GridAxis &a) {
    return json{{"min", a.min}, {"max", a.max}, {"count", a.count}};
}

}  // namespace detail

inline ScenarioConfig config_from_json(const json &j) {
    ScenarioConfig c;
    try {
        if (j.contains("observable")) {
            const auto &o = j.at("observable");
            c.eigenvalues = o.at("eigenvalues").get<std::vector<double>>();
            if (o.contains("labels")) c.labels = o.at("labels").get<std::vector<std::string>>();
        }
        if (j.contains("selection")) {
            const auto &s = j.at("selection");
            c.qubit_sigma_x = s.value("qubit_sigma_x", false);
            c.theta = s.value("theta", 0.0);
            if (s.contains("pre")) c.pre = detail::complex_list_from_json(s.at("pre"), "selection.pre");
            if (s.contains("post")) c.post = detail::complex_list_from_json(s.at("post"), "selection.post");
        }
        if (j.contains("pointer")) {
            const auto &p = j.at("pointer");
            c.pointer.family = pointer_family_from_string(p.value("family", std::string("coherent")));
            if (p.contains("alpha")) c.pointer.alpha = detail::complex_from_json(p.at("alpha"), "pointer.alpha");
            c.pointer.r = p.value("r", 0.0);
            c.pointer.phi_xi = p.value("phi_xi", 0.0);
            c.pointer.n = p.value("n", std::size_t{0});
        }
        if (j.contains("coupling")) {
            const auto &k = j.at("coupling");
            if (k.contains("g")) c.g = k.at("g").get<double>();
            if (k.contains("gamma")) c.gamma = k.at("gamma").get<double>();
            c.sigma = k.value("sigma", 1.0);
        }
        if (j.contains("dim")) c.dim = j.at("dim").get<std::size_t>();
        if (j.contains("sweep")) {
            const auto &s = j.at("sweep");
            if (s.contains("gammas")) c.gammas = detail::sweep_from_json(s.at("gammas"), "sweep.gammas");
            if (s.contains("thetas")) c.thetas = detail::sweep_from_json(s.at("thetas"), "sweep.thetas");
        }
        if (j.contains("grid")) {
            const auto &g = j.at("grid");
            c.grid = GridSpec{detail::axis_from_json(g.at("re")), detail::axis_from_json(g.at("im"))};
        }
    } catch (const json::exception &e) {
        throw ConfigError(std::string("config: ") + e.what());
    } catch (const InvalidArgument &e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

/// Canonical form: complex values as [re, im], sweeps as explicit lists.
inline json config_to_json(const ScenarioConfig &c) {
    json j;
    if (c.qubit_sigma_x) {
        j["selection"] = json{{"qubit_sigma_x", true}, {"theta", c.theta}};
    } else {
        j["observable"] = json{{"eigenvalues", c.eigenvalues}, {"labels", c.labels}};
        json pre = json::array();
        json post = json::array();
        for (auto v : c.pre) pre.push_back(detail::complex_to_json(v));
        for (auto v : c.post) post.push_back(detail::complex_to_json(v));
        j["selection"] = json{{"pre", pre}, {"post", post}};
    }
    j["pointer"] = json{{"family", to_string(c.pointer.family)},
                        {"alpha", detail::complex_to_json(c.pointer.alpha)},
                        {"r", c.pointer.r},
                        {"phi_xi", c.pointer.phi_xi},
                        {"n", c.pointer.n}};
    json k{{"sigma", c.sigma}};
    if (c.g) k["g"] = *c.g;
    if (c.gamma) k["gamma"] = *c.gamma;
    j["coupling"] = k;
    if (c.dim) j["dim"] = *c.dim;
    if (!c.gammas.empty() || !c.thetas.empty()) {
        json s = json::object();
        if (!c.gammas.empty()) s["gammas"] = c.gammas;
        if (!c.thetas.empty()) s["thetas"] = c.thetas;
        j["sweep"] = s;
    }
    if (c.grid) {
        j["grid"] = json{{"re", detail::axis_to_json(c.grid->re)},
                         {"im", detail::axis_to_json(c.grid->im)}};
    }
    return j;
}

inline ScenarioConfig config_from_string(const std::string &text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception &e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return config_from_json(j);
}

inline ScenarioConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_string(ss.str());
}

}  // namespace pointershift
