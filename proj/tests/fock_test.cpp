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

#include "pointershift/fock.hpp"
#include "pointershift/verify.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "gtest/gtest.h"

using namespace pointershift;

namespace {

// <m|e^{-|a|^2/2} e^{a a^dagger} e^{-a^* a}|n>, independent of Laguerre polynomials.
cplx displacement_by_normal_order(int m, int n, cplx alpha) {
    using lc = std::complex<long double>;
    const lc a(alpha.real(), alpha.imag());
    auto lfact = [](int k) { return std::lgamma(static_cast<long double>(k) + 1.0L); };
    lc total = 0.0L;
    for (int k = 0; k <= std::min(m, n); ++k) {
        const long double c =
            std::exp(0.5L * (lfact(m) + lfact(n)) - lfact(k) - lfact(m - k) - lfact(n - k));
        total += c * std::pow(a, m - k) * std::pow(-std::conj(a), n - k);
    }
    total *= std::exp(-0.5L * std::norm(a));
    return {static_cast<double>(total.real()), static_cast<double>(total.imag())};
}

}  // namespace

TEST(Laguerre, SmallOrderValues) {
    EXPECT_EQ(laguerre_general(0, 3.7, -2.0), 1.0);
    EXPECT_EQ(laguerre_general(0, 0.0, 11.0), 1.0);
    EXPECT_NEAR(laguerre_general(1, 0.0, 2.0), -1.0, 1e-15);
    EXPECT_NEAR(laguerre_general(2, 0.0, 1.0), -0.5, 1e-15);
}

TEST(Laguerre, RecurrenceMatchesSeries) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> eta_dist(0.0, 10.0), x_dist(0.0, 20.0);
    double worst = 0.0;
    for (int trial = 0; trial < 400; ++trial) {
        const double eta = trial % 4 == 0 ? std::floor(eta_dist(rng)) : eta_dist(rng);
        const double x = x_dist(rng);
        for (int n = 0; n <= 15; ++n) {
            const double ref = laguerre_series(n, eta, x);
            const double got = laguerre_general(n, eta, x);
            worst = std::max(worst, static_cast<double>(std::abs((got - ref) / ref)));
        }
    }
    EXPECT_LT(worst, 1e-10);
}

TEST(Displacement, IdentityAtZero) {
    for (std::size_t n = 0; n < 40; ++n) {
        EXPECT_EQ(displacement_element(n, n, 0.0), cplx(1.0));
        EXPECT_EQ(displacement_element(n + 1, n, 0.0), cplx(0.0));
    }
}

TEST(Displacement, VacuumOverlap) {
    for (cplx a : {cplx(0.3, 0.0), cplx(-1.2, 0.8), cplx(0.0, 2.5)}) {
        EXPECT_NEAR(std::abs(displacement_element(0, 0, a) - std::exp(-0.5 * std::norm(a))), 0.0, 1e-15);
    }
}

TEST(Displacement, ColumnUnitarity) {
    double s = 0.0;
    for (std::size_t m = 0; m < 200; ++m) s += std::norm(displacement_element(m, 5, 1.3));
    EXPECT_NEAR(s, 1.0, 1e-10);
}

TEST(Displacement, LargeIndicesStayFinite) {
    // Raw factorials would overflow long before these indices.
    for (std::size_t n : {200, 300, 512}) {
        double s = 0.0;
        for (std::size_t m = 0; m < 1100; ++m) {
            const cplx d = displacement_element(m, n, cplx(2.5, 1.5));
            ASSERT_TRUE(std::isfinite(d.real()) && std::isfinite(d.imag())) << m << "," << n;
            s += std::norm(d);
        }
        EXPECT_NEAR(s, 1.0, 1e-10) << "column " << n;
    }
}

TEST(Displacement, BranchConsistency) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::size_t> idx(0, 64);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 2000; ++t) {
        const std::size_t m = idx(rng), n = idx(rng);
        const cplx a = std::polar(4.0 * u(rng), 2.0 * std::numbers::pi * u(rng));
        const cplx lhs = displacement_element(m, n, a);
        const cplx rhs = std::conj(displacement_element(n, m, -a));
        ASSERT_LT(std::abs(lhs - rhs), 1e-13) << m << " " << n << " " << a;
    }
}

TEST(Displacement, MatchesNormalOrderedProduct) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int t = 0; t < 10; ++t) {
        const cplx a(u(rng), u(rng));
        for (int m = 0; m <= 25; ++m) {
            for (int n = 0; n <= 25; ++n) {
                ASSERT_LT(std::abs(displacement_element(m, n, a) - displacement_by_normal_order(m, n, a)), 1e-12)
                    << m << " " << n << " " << a;
            }
        }
    }
}

TEST(Operators, PositionAndMomentumEntries) {
    const auto x = build_operator(OperatorKind::position, 2, 1.0);
    EXPECT_EQ(x(0, 1), cplx(1.0));
    EXPECT_EQ(x(1, 0), cplx(1.0));
    const auto p = build_operator(OperatorKind::momentum, 3, 0.5);
    EXPECT_NEAR(std::abs(p(1, 0) - cplx(0.0, 1.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(p(0, 1) - cplx(0.0, -1.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(p(2, 1) - cplx(0.0, std::sqrt(2.0))), 0.0, 1e-15);
}

TEST(Operators, LadderKindsRejectDimOne) {
    for (auto k : {OperatorKind::annihilate, OperatorKind::create, OperatorKind::position,
                   OperatorKind::momentum}) {
        EXPECT_THROW(build_operator(k, 1), DimensionError);
    }
    EXPECT_NO_THROW(build_operator(OperatorKind::number, 1));
}

TEST(Operators, Hermiticity) {
    for (std::size_t dim : {2, 3, 17, 128, 512}) {
        for (auto k : {OperatorKind::position, OperatorKind::momentum, OperatorKind::number}) {
            EXPECT_LT(build_operator(k, dim, 0.37).hermiticity_defect(), 1e-14);
        }
    }
}

TEST(Operators, CanonicalCommutatorAwayFromEdge) {
    const std::size_t dim = 64;
    const double sigma = 0.8;
    const auto x = build_operator(OperatorKind::position, dim, sigma);
    const auto p = build_operator(OperatorKind::momentum, dim, sigma);
    const auto c = x * p - p * x;
    for (std::size_t r = 0; r < 32; ++r) {
        for (std::size_t s = 0; s < 32; ++s) {
            const cplx expect = r == s ? cplx(0.0, 1.0) : cplx(0.0);
            ASSERT_LT(std::abs(c(r, s) - expect), 1e-12);
        }
    }
}

TEST(Operators, LadderProductIsNumber) {
    const auto a = build_operator(OperatorKind::annihilate, 10);
    const auto ad = build_operator(OperatorKind::create, 10);
    const auto n = build_operator(OperatorKind::number, 10);
    const auto diff = ad * a - n;
    for (std::size_t r = 0; r < 10; ++r)
        for (std::size_t s = 0; s < 10; ++s) EXPECT_LT(std::abs(diff(r, s)), 1e-14);
}

TEST(Operators, TruncatedDisplacementColumnsAwayFromEdge) {
    const std::size_t dim = 96;
    const cplx a(0.9, -0.6);
    const auto d = build_operator(OperatorKind::displacement, dim, 1.0, a);
    const auto edge = static_cast<std::size_t>(std::ceil(4.0 * std::abs(a) * std::sqrt(dim)));
    for (std::size_t n = 0; n + edge <= dim; ++n) {
        double s = 0.0;
        for (std::size_t m = 0; m < dim; ++m) s += std::norm(d(m, n));
        EXPECT_NEAR(s, 1.0, 1e-10) << "column " << n;
    }
}

TEST(Operators, DisplacementComposesToIdentity) {
    const cplx a(1.1, 0.4);
    const auto dim = static_cast<std::size_t>(std::ceil(8.0 * (1.0 + std::norm(a)))) + 40;
    const auto prod = build_operator(OperatorKind::displacement, dim, 1.0, a) *
                      build_operator(OperatorKind::displacement, dim, 1.0, -a);
    for (std::size_t r = 0; r < dim / 2; ++r) {
        for (std::size_t s = 0; s < dim / 2; ++s) {
            ASSERT_LT(std::abs(prod(r, s) - (r == s ? cplx(1.0) : cplx(0.0))), 1e-9) << r << "," << s;
        }
    }
}

TEST(Expectation, VacuumNumber) {
    const auto vac = FockVector::basis(0, 8);
    EXPECT_EQ(expectation(vac, build_operator(OperatorKind::number, 8)), cplx(0.0));
}

TEST(Expectation, CoherentPositionAndMomentum) {
    const double r = 1.7, phi = 0.9, sigma = 0.6;
    const std::size_t dim = 80;
    std::vector<cplx> amps(dim);
    // Coherent amplitudes assembled locally so the check does not lean on pointer_states.
    for (std::size_t n = 0; n < dim; ++n) {
        amps[n] = std::polar(std::exp(-0.5 * r * r + n * std::log(r) - 0.5 * std::lgamma(n + 1.0)), n * phi);
    }
    const FockVector beta(amps);
    const cplx x = expectation(beta, build_operator(OperatorKind::position, dim, sigma));
    const cplx p = expectation(beta, build_operator(OperatorKind::momentum, dim, sigma));
    EXPECT_NEAR(x.real(), 2.0 * sigma * r * std::cos(phi), 1e-12);
    EXPECT_NEAR(p.real(), r * std::sin(phi) / sigma, 1e-12);
    EXPECT_NEAR(x.imag(), 0.0, 1e-12);
    EXPECT_NEAR(p.imag(), 0.0, 1e-12);
    EXPECT_NEAR(mean_position(beta.amps(), sigma), x.real(), 1e-13);
    EXPECT_NEAR(mean_momentum(beta.amps(), sigma), p.real(), 1e-13);
    EXPECT_NEAR(momentum_variance(beta, sigma), 1.0 / (4.0 * sigma * sigma), 1e-12);
}

TEST(Expectation, DimensionMismatch) {
    EXPECT_THROW(expectation(FockVector::basis(0, 4), build_operator(OperatorKind::number, 5)),
                 DimensionError);
}

TEST(FockVectorTest, NormalizesAndRejectsBadInput) {
    const FockVector v({cplx(3.0, 0.0), cplx(0.0, 4.0)});
    EXPECT_NEAR(norm_squared(v.amps()), 1.0, 1e-15);
    EXPECT_THROW(FockVector({}), DimensionError);
    EXPECT_THROW(FockVector({0.0, 0.0}), InvalidArgument);
    EXPECT_THROW(FockVector({cplx(NAN, 0.0), 1.0}), InvalidArgument);
    EXPECT_THROW(FockVector::basis(4, 4), DimensionError);
}

TEST(FockVectorTest, TailMass) {
    std::vector<cplx> amps(10, 0.0);
    amps[0] = std::sqrt(0.9);
    amps[7] = std::sqrt(0.1);
    EXPECT_NEAR(FockVector(amps).tail_mass(), 0.1, 1e-15);
    EXPECT_NEAR(FockVector(amps).tail_mass(2), 0.0, 1e-15);
}

TEST(Coupling, GammaIsRatio) {
    const auto c = CouplingConfig::from_g_sigma(0.3, 0.7);
    EXPECT_EQ(c.gamma, 0.3 / 0.7);
    const auto d = CouplingConfig::from_gamma(2.0, 0.5);
    EXPECT_EQ(d.g, 1.0);
    EXPECT_THROW(CouplingConfig::from_g_sigma(1.0, 0.0), InvalidArgument);
    EXPECT_THROW(CouplingConfig::from_gamma(1.0, -1.0), InvalidArgument);
}

TEST(Truncation, DefaultDim) {
    EXPECT_EQ(default_dim(0.0), 64u);
    EXPECT_EQ(default_dim(3.0), 104u);
}
