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

// Pointer-state families expanded in the number basis.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "pointershift/errors.hpp"
#include "pointershift/fock.hpp"

namespace pointershift {

/// Maximum probability allowed outside the truncation before a constructor
/// refuses to build the state.
inline constexpr double kMaxTruncatedMass = 1e-10;
/// Squeeze magnitudes above this are rejected (cosh r would lose all precision).
inline constexpr double kMaxSqueeze = 20.0;

enum class PointerFamily { fock, coherent, squeezed_coherent, spac };

inline std::string to_string(PointerFamily f) {
    switch (f) {
        case PointerFamily::fock:
            return "fock";
        case PointerFamily::coherent:
            return "coherent";
        case PointerFamily::squeezed_coherent:
            return "squeezed_coherent";
        case PointerFamily::spac:
            return "spac";
    }
    return "unknown";
}

inline PointerFamily pointer_family_from_string(const std::string &name) {
    if (name == "fock") return PointerFamily::fock;
    if (name == "coherent") return PointerFamily::coherent;
    if (name == "squeezed_coherent" || name == "squeezed") return PointerFamily::squeezed_coherent;
    if (name == "spac") return PointerFamily::spac;
    throw InvalidArgument("unknown pointer family '" + name + "'");
}

/// Family plus parameters. Fields not used by a family are ignored.
struct PointerSpec {
    PointerFamily family = PointerFamily::coherent;
    std::size_t n = 0;   // fock level
    cplx alpha = 0.0;    // coherent amplitude (coherent, squeezed_coherent, spac)
    double r = 0.0;      // squeeze magnitude
    double phi_xi = 0.0; // squeeze phase

    /// Largest amplitude scale the state reaches; drives the default truncation.
    double extent() const {
        switch (family) {
            case PointerFamily::fock:
                return std::sqrt(static_cast<double>(n) + 1.0);
            case PointerFamily::coherent:
                return std::abs(alpha);
            case PointerFamily::spac:
                return std::abs(alpha) + 1.0;
            case PointerFamily::squeezed_coherent:
                return std::abs(alpha) + std::exp(r);
        }
        return 0.0;
    }
};

namespace detail {

// Amplitudes are analytically normalized over the infinite space, so the mass
// dropped by truncation is 1 - (retained mass).
inline FockVector finish_truncated(std::vector<cplx> amps, const char *what) {
    const double kept = norm_squared(amps);
    const double dropped = std::abs(1.0 - kept);
    if (dropped > kMaxTruncatedMass) {
        throw TruncationError(std::string(what) + ": dimension " + std::to_string(amps.size()) +
                              " drops probability " + std::to_string(dropped) +
                              " (limit 1e-10); increase dim");
    }
    return FockVector(std::move(amps));
}

inline std::vector<cplx> coherent_amplitudes(cplx alpha, std::size_t dim) {
    std::vector<cplx> c(dim);
    // Start in log space so large |alpha| does not underflow c_0.
    const double mag = std::abs(alpha);
    if (mag == 0.0) {
        std::fill(c.begin(), c.end(), 0.0);
        c[0] = 1.0;
        return c;
    }
    const double log_mag = std::log(mag);
    const double phase = std::arg(alpha);
    for (std::size_t n = 0; n < dim; ++n) {
        const double nd = static_cast<double>(n);
        const double lg = -0.5 * mag * mag + nd * log_mag - 0.5 * std::lgamma(nd + 1.0);
        c[n] = std::polar(std::exp(lg), nd * phase);
    }
    return c;
}

}  // namespace detail

/// |alpha> truncated to dim levels and renormalized.
inline FockVector make_coherent(cplx alpha, std::size_t dim) {
    if (dim == 0) {
        throw DimensionError("make_coherent: dim must be at least 1");
    }
    if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) {
        throw InvalidArgument("make_coherent: non-finite alpha");
    }
    return detail::finish_truncated(detail::coherent_amplitudes(alpha, dim), "make_coherent");
}

/// |alpha, xi> = D(alpha) S(xi)|0> with xi = r e^{i phi_xi} and
/// S(xi) = exp(xi^* a^2 / 2 - xi a^dagger^2 / 2).
///
/// c_n = (cosh r)^{-1/2} exp(-|alpha|^2/2 - alpha^*^2 e^{i phi} tanh(r) / 2)
///       (e^{i phi} tanh(r) / 2)^{n/2} / sqrt(n!) H_n(gamma (e^{i phi} sinh 2r)^{-1/2}),
/// gamma = alpha cosh r + alpha^* e^{i phi} sinh r.
///
/// With t = (e^{i phi} tanh r / 2)^{1/2} and s = (e^{i phi} sinh 2r)^{-1/2} only
/// t^2 and t s = 1 / (2 cosh r) enter the scaled recurrence
///   h_n = t^n H_n(gamma s) / sqrt(n!),
///   h_{n+1} = (gamma / cosh r * h_n - sqrt(n) e^{i phi} tanh r * h_{n-1}) / sqrt(n+1),
/// so no square-root branch has to be chosen and r = 0 is the coherent state.
inline FockVector make_squeezed_coherent(cplx alpha, double r, double phi_xi, std::size_t dim) {
    if (dim == 0) {
        throw DimensionError("make_squeezed_coherent: dim must be at least 1");
    }
    if (!(r >= 0.0) || r > kMaxSqueeze) {
        throw InvalidArgument("make_squeezed_coherent: squeeze r must lie in [0, 20]");
    }
    if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()) || !std::isfinite(phi_xi)) {
        throw InvalidArgument("make_squeezed_coherent: non-finite parameter");
    }
    const double ch = std::cosh(r);
    const double th = std::tanh(r);
    const cplx rot = std::polar(1.0, phi_xi);
    const cplx gamma = alpha * ch + std::conj(alpha) * rot * std::sinh(r);
    const cplx lead = gamma / ch;
    const cplx back = rot * th;
    const cplx prefactor =
        std::exp(-0.5 * std::norm(alpha) - 0.5 * std::conj(alpha) * std::conj(alpha) * back) /
        std::sqrt(ch);

    std::vector<cplx> c(dim);
    cplx h_prev = 0.0;
    cplx h = 1.0;
    for (std::size_t n = 0; n < dim; ++n) {
        c[n] = prefactor * h;
        const double nd = static_cast<double>(n);
        const cplx h_next = (lead * h - std::sqrt(nd) * back * h_prev) / std::sqrt(nd + 1.0);
        h_prev = h;
        h = h_next;
    }
    return detail::finish_truncated(std::move(c), "make_squeezed_coherent");
}

/// Single-photon-added coherent state a^dagger|alpha> / sqrt(1 + |alpha|^2):
/// amplitude on |n+1> is e^{-|alpha|^2/2} alpha^n sqrt(n+1) / sqrt(n! (1 + |alpha|^2)).
inline FockVector make_spac(cplx alpha, std::size_t dim) {
    if (dim < 2) {
        throw DimensionError("make_spac: dim must be at least 2");
    }
    if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) {
        throw InvalidArgument("make_spac: non-finite alpha");
    }
    const auto coh = detail::coherent_amplitudes(alpha, dim - 1);
    const double scale = 1.0 / std::sqrt(1.0 + std::norm(alpha));
    std::vector<cplx> c(dim, 0.0);
    for (std::size_t n = 0; n + 1 < dim; ++n) {
        c[n + 1] = coh[n] * std::sqrt(static_cast<double>(n + 1)) * scale;
    }
    return detail::finish_truncated(std::move(c), "make_spac");
}

inline FockVector make_pointer(const PointerSpec &spec, std::size_t dim) {
    switch (spec.family) {
        case PointerFamily::fock:
            return FockVector::basis(spec.n, dim);
        case PointerFamily::coherent:
            return make_coherent(spec.alpha, dim);
        case PointerFamily::squeezed_coherent:
            return make_squeezed_coherent(spec.alpha, spec.r, spec.phi_xi, dim);
        case PointerFamily::spac:
            return make_spac(spec.alpha, dim);
    }
    throw InvalidArgument("make_pointer: unknown family");
}

/// (<a>, <a^2>) from the amplitudes.
inline std::pair<cplx, cplx> moments_a(const FockVector &state) {
    const double n2 = norm_squared(state.amps());
    if (std::abs(n2 - 1.0) > 1e-8) {
        throw InvalidArgument("moments_a: state is not normalized");
    }
    return {mean_annihilation(state.amps()), mean_annihilation_sq(state.amps())};
}

}  // namespace pointershift
