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

#include "pointershift/config.hpp"

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"

using namespace pointershift;

namespace {

const std::string kDir = POINTERSHIFT_CONFIG_DIR;

}  // namespace

TEST(Config, LoadsShippedConfigs) {
    for (const char* name : {"transition_r3.json", "transition_r0.json", "momentum_r3.json", "qfunc_gamma0.json",
                             "qfunc_gamma0p5.json", "qfunc_gamma1.json", "qfunc_gamma2.json", "qfunc_gamma3.json",
                             "qfunc_gamma5.json", "complex_weak_value.json"}) {
        EXPECT_NO_THROW(load_config(kDir + "/" + name)) << name;
    }
}

TEST(Config, TransitionSweep) {
    const auto c = load_config(kDir + "/transition_r3.json");
    EXPECT_TRUE(c.qubit_sigma_x);
    ASSERT_EQ(c.thetas.size(), 100u);
    EXPECT_DOUBLE_EQ(c.thetas.front(), 0.02);
    EXPECT_DOUBLE_EQ(c.thetas.back(), std::numbers::pi / 2);
    EXPECT_EQ(c.gammas, (std::vector<double>{0.1, 1.0, 2.0, 5.0}));
    EXPECT_NEAR(std::abs(c.pointer.alpha - std::polar(3.0, std::numbers::pi / 6)), 0.0, 1e-15);
    EXPECT_EQ(c.coupling().g, 1.0);
}

TEST(Config, RoundTripIsLossless) {
    for (const char* name : {"transition_r3.json", "complex_weak_value.json", "qfunc_gamma2.json"}) {
        const auto a = load_config(kDir + "/" + name);
        const auto j = config_to_json(a);
        const auto b = config_from_string(j.dump());
        EXPECT_EQ(config_to_json(b), j) << name;
        EXPECT_EQ(b.thetas, a.thetas);
        EXPECT_EQ(b.pre, a.pre);
        EXPECT_EQ(b.pointer.alpha, a.pointer.alpha);
        EXPECT_EQ(b.pointer.family, a.pointer.family);
    }
}

TEST(Config, ComplexForms) {
    const auto c = config_from_string(R"({
        "selection": {"qubit_sigma_x": true, "theta": 0.2},
        "pointer": {"family": "spac", "alpha": {"re": 0.5, "im": -1}},
        "coupling": {"g": 0.6, "sigma": 2.0}})");
    EXPECT_EQ(c.pointer.alpha, cplx(0.5, -1.0));
    EXPECT_DOUBLE_EQ(c.coupling().gamma, 0.3);
    const auto d = config_from_string(R"({"selection": {"qubit_sigma_x": true}, "pointer": {"alpha": 2}})");
    EXPECT_EQ(d.pointer.alpha, cplx(2.0));
    EXPECT_EQ(d.coupling().gamma, 0.0);
}

TEST(Config, RejectsInconsistentCoupling) {
    EXPECT_THROW(config_from_string(R"({"selection": {"qubit_sigma_x": true},
        "coupling": {"g": 1.0, "gamma": 3.0, "sigma": 1.0}})"),
                 ConfigError);
    EXPECT_NO_THROW(config_from_string(R"({"selection": {"qubit_sigma_x": true},
        "coupling": {"g": 1.0, "gamma": 2.0, "sigma": 0.5}})"));
}

TEST(Config, RejectsMalformedInput) {
    EXPECT_THROW(config_from_string("not json"), ConfigError);
    EXPECT_THROW(config_from_string(R"({"pointer": {"family": "thermal"}, "selection": {"qubit_sigma_x": true}})"),
                 ConfigError);
    EXPECT_THROW(config_from_string(R"({"observable": {"eigenvalues": [1, -1]},
        "selection": {"pre": [1, 1], "post": [1, 0]}})"),
                 ConfigError);
    EXPECT_THROW(config_from_string(R"({"observable": {"eigenvalues": [1, -1]},
        "selection": {"pre": [1, 0], "post": [1, 0]}, "sweep": {"thetas": [0.1]}})"),
                 ConfigError);
    EXPECT_THROW(config_from_string(R"({"selection": {"qubit_sigma_x": true}, "coupling": {"sigma": 0}})"),
                 ConfigError);
    EXPECT_THROW(config_from_string(R"({"selection": {"qubit_sigma_x": true}, "pointer": {"alpha": "x"}})"),
                 ConfigError);
    EXPECT_THROW(load_config(kDir + "/missing.json"), ConfigError);
}

TEST(Config, MeasurementAndPointer) {
    const auto c = load_config(kDir + "/complex_weak_value.json");
    const auto [obs, sel] = c.measurement();
    EXPECT_EQ(obs.labels()[1], "mid");
    EXPECT_GT(std::abs(weak_value(obs, sel).imag()), 0.1);
    const auto ptr = c.make_pointer_state();
    EXPECT_LT(ptr.tail_mass(), 1e-10);
    EXPECT_GE(ptr.dim(), 64u);

    auto q = load_config(kDir + "/transition_r3.json");
    const auto [qo, qs] = q.measurement(0.7);
    EXPECT_NEAR(weak_value(qo, qs).real(), -1.0 / std::tan(0.7), 1e-12);
}

TEST(Config, AutoDimGrowsForLargeSqueeze) {
    auto c = config_from_string(R"({"selection": {"qubit_sigma_x": true},
        "pointer": {"family": "squeezed_coherent", "alpha": 0, "r": 3.0, "phi_xi": 0.5}})");
    const auto ptr = c.make_pointer_state();
    EXPECT_LT(ptr.tail_mass(), 1e-10);
    c.dim = 64;
    EXPECT_THROW(c.make_pointer_state(), TruncationError);
}
