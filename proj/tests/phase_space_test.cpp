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

#include "pointershift/phase_space.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "gtest/gtest.h"
#include "pointershift/pointer_states.hpp"

using namespace pointershift;

namespace {

const cplx kBeta = std::polar(1.0, std::numbers::pi / 6);
constexpr double kTheta = 0.01;
const double kInvPi = 1.0 / std::numbers::pi;

}  // namespace

TEST(QFunction, CoherentExamples) {
    const auto b = make_coherent(kBeta, 64);
    EXPECT_NEAR(q_function(b, kBeta), kInvPi, 1e-14);
    for (cplx a : {cplx(0.0), cplx(1.5, -0.3), cplx(-2.0, 2.0)}) {
        EXPECT_NEAR(q_function(b, a), kInvPi * std::exp(-std::norm(a - kBeta)), 1e-14);
    }
}

TEST(QFunction, SinglePhoton) {
    const auto one = FockVector::basis(1, 8);
    for (cplx a : {cplx(0.0), cplx(0.4, 0.9), cplx(-2.2, 0.1)}) {
        EXPECT_NEAR(q_function(one, a), kInvPi * std::norm(a) * std::exp(-std::norm(a)), 1e-15);
    }
}

TEST(QFunction, BoundedOnRandomStates) {
    std::mt19937_64 rng(41);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int t = 0; t < 50; ++t) {
        std::vector<cplx> amps(24);
        for (auto& c : amps) c = cplx(g(rng), g(rng));
        const FockVector psi(amps);
        for (int k = 0; k < 40; ++k) {
            const double q = q_function(psi, cplx(u(rng), u(rng)));
            EXPECT_GE(q, 0.0);
            EXPECT_LE(q, kInvPi * (1.0 + 1e-12));
        }
    }
}

TEST(QFunction, QuadratureNormalization) {
    const GridSpec spec{{-9.0, 9.0, 181}, {-9.0, 9.0, 181}};
    for (const auto& psi : {make_coherent(cplx(1.0, -0.5), 96), make_squeezed_coherent(cplx(0.5, 0.5), 1.0, 0.7, 160),
                            make_spac(cplx(-1.2, 0.3), 96)}) {
        EXPECT_NEAR(q_grid(psi, spec).integral(), 1.0, 1e-3);
    }
}

TEST(ClosedFormQ, ZeroCouplingIsInitialPointer) {
    const auto cfg = CouplingConfig::from_gamma(0.0, 1.0);
    for (cplx a : {cplx(0.0), kBeta, cplx(2.0, -1.0)}) {
        EXPECT_NEAR(q_final_closed_form(kTheta, kBeta, cfg, a), kInvPi * std::exp(-std::norm(a - kBeta)), 1e-14);
    }
}

TEST(ClosedFormQ, MatchesOracleStateAcrossCouplings) {
    const auto q = qubit_sigma_x(kTheta);
    const auto ptr = make_coherent(kBeta, 64);
    for (double gamma : {0.0, 0.5, 1.0, 2.0, 3.0, 5.0}) {
        const auto cfg = CouplingConfig::from_gamma(gamma, 1.0);
        const auto fin = evolve_postselect_oracle(q.observable, q.selection, ptr, cfg);
        const auto spec = default_qfunc_grid(kBeta, gamma, 41);
        const auto oracle = q_grid(fin.state, spec);
        const auto closed = q_grid(spec, [&](cplx a) { return q_final_closed_form(kTheta, kBeta, cfg, a); });
        double worst = 0.0;
        for (std::size_t k = 0; k < oracle.values.size(); ++k) {
            worst = std::max(worst, std::abs(oracle.values[k] - closed.values[k]));
        }
        EXPECT_LT(worst, 1e-9) << "gamma " << gamma;
    }
}

TEST(ClosedFormQ, InterferenceLowersMidline) {
    const auto cfg = CouplingConfig::from_gamma(1.0, 1.0);
    const double d = coherent_denominator(kTheta, kBeta, 1.0);
    const double s = std::sin(0.25 * std::numbers::pi - kTheta), c = std::cos(0.25 * std::numbers::pi - kTheta);
    bool below = false;
    for (int k = -40; k <= 40; ++k) {
        const cplx a(kBeta.real(), kBeta.imag() + 0.1 * k);
        const double gaussians = (s * s * std::exp(-std::norm(a - kBeta - 0.5)) + c * c * std::exp(-std::norm(a - kBeta + 0.5))) /
                                 (std::numbers::pi * d);
        below = below || q_final_closed_form(kTheta, kBeta, cfg, a) < gaussians - 1e-6;
    }
    EXPECT_TRUE(below);
}

TEST(Grid, VacuumPeak) {
    const auto grid = q_grid(make_coherent(0.0, 16), GridSpec{{-3.0, 3.0, 61}, {-3.0, 3.0, 61}});
    EXPECT_EQ(grid.peak(), cplx(0.0));
    EXPECT_NEAR(grid.max_value(), kInvPi, 1e-15);
}

TEST(Grid, LobeGeometry) {
    const auto q = qubit_sigma_x(kTheta);
    const auto ptr = make_coherent(kBeta, 64);
    auto lobes = [&](double gamma) {
        const auto cfg = CouplingConfig::from_gamma(gamma, 1.0);
        return q_grid(evolve_postselect_oracle(q.observable, q.selection, ptr, cfg).state, default_qfunc_grid(kBeta, gamma));
    };
    const auto a = lobes(0.0);
    const double step = a.spec.re.step();
    EXPECT_LE(std::abs(a.peak().real() - std::sqrt(3.0) / 2), step);
    EXPECT_LE(std::abs(a.peak().imag() - 0.5), step);
    EXPECT_EQ(count_regions_above(a, one_over_e_level()), 1u);
    EXPECT_EQ(count_regions_above(lobes(5.0), one_over_e_level()), 2u);
}

TEST(Grid, RejectsEmpty) {
    EXPECT_THROW(q_grid(make_coherent(0.0, 16), GridSpec{{0.0, 1.0, 0}, {0.0, 1.0, 3}}), InvalidArgument);
}

TEST(Grid, DeterministicAcrossThreadCounts) {
    const auto psi = make_spac(cplx(0.8, -0.3), 64);
    const GridSpec spec{{-2.0, 2.0, 33}, {-2.0, 2.0, 17}};
    EXPECT_EQ(q_grid(psi, spec, 1).values, q_grid(psi, spec, 4).values);
}

TEST(Grid, RowMajorLayoutAndCsv) {
    const GridSpec spec{{0.0, 1.0, 3}, {-1.0, 1.0, 2}};
    const auto grid = q_grid(spec, [](cplx a) { return a.real() + 10.0 * a.imag(); });
    EXPECT_EQ(grid.at(1, 2), 11.0);
    std::ostringstream os;
    write_grid_csv(os, grid);
    const std::string csv = os.str();
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "alpha_r,alpha_i,q");
    EXPECT_NE(csv.find("\n0.5,-1,-9.5\n"), std::string::npos);
    const auto j = grid_to_json(grid, {{"gamma", 2.0}});
    EXPECT_EQ(j["re_range"]["count"], 3);
    EXPECT_EQ(j["values"].size(), 6u);
    EXPECT_DOUBLE_EQ(j["metadata"]["level_1_over_e"].get<double>(), one_over_e_level());
    EXPECT_EQ(j["metadata"]["gamma"], 2.0);
}

TEST(Grid, RegionCount) {
    const GridSpec spec{{0.0, 4.0, 5}, {0.0, 0.0, 1}};
    const auto grid = q_grid(spec, [](cplx a) { return a.real() == 2.0 ? 0.0 : 1.0; });
    EXPECT_EQ(count_regions_above(grid, 0.5), 2u);
    EXPECT_EQ(count_regions_above(grid, 2.0), 0u);
}
