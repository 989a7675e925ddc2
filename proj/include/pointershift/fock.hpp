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

// Truncated Fock-space linear algebra for a single oscillator mode (the
// pointer). Conventions, with hbar = 1:
//
//   X = sigma (a^dagger + a),   P = (i / 2 sigma) (a^dagger - a),   [X, P] = i
//
// Matrices are indexed (row, col) = (<m|, |n>) over the number states
// |0>, ..., |dim-1>.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pointershift/errors.hpp"

namespace pointershift {

using cplx = std::complex<double>;

/// Tolerance used by constructors when checking that a state is normalized.
inline constexpr double kNormTolerance = 1e-12;
/// Number of top retained levels summed by the tail-mass diagnostic.
inline constexpr std::size_t kTailLevels = 4;
/// Tail mass above which results are flagged as truncation-limited.
inline constexpr double kTailWarning = 1e-10;

/// Normalized pure state of the pointer over |0>, ..., |dim-1>.
class FockVector {
  public:
    /// Builds from raw amplitudes and rescales to unit norm. Throws on an empty,
    /// all-zero, or non-finite input.
    explicit FockVector(std::vector<cplx> amps) : amps_(std::move(amps)) {
        if (amps_.empty()) {
            throw DimensionError("FockVector: dimension must be at least 1");
        }
        double norm2 = 0.0;
        for (const auto &c : amps_) {
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
                throw InvalidArgument("FockVector: non-finite amplitude");
            }
            norm2 += std::norm(c);
        }
        if (!(norm2 > 0.0)) {
            throw InvalidArgument("FockVector: zero vector cannot be normalized");
        }
        const double inv = 1.0 / std::sqrt(norm2);
        for (auto &c : amps_) {
            c *= inv;
        }
    }

    /// Number state |n> in a space of dimension dim.
    static FockVector basis(std::size_t n, std::size_t dim) {
        if (n >= dim) {
            throw DimensionError("FockVector::basis: level " + std::to_string(n) +
                                 " outside dimension " + std::to_string(dim));
        }
        std::vector<cplx> amps(dim, 0.0);
        amps[n] = 1.0;
        return FockVector(std::move(amps));
    }

    std::size_t dim() const { return amps_.size(); }
    std::span<const cplx> amps() const { return amps_; }
    const cplx &operator[](std::size_t n) const { return amps_[n]; }

    /// Probability weight in the top `levels` retained number states.
    double tail_mass(std::size_t levels = kTailLevels) const {
        double t = 0.0;
        for (std::size_t n = dim() > levels ? dim() - levels : 0; n < dim(); ++n) {
            t += std::norm(amps_[n]);
        }
        return t;
    }

    /// Same state zero-padded (or checked-truncated) to a new dimension.
    FockVector resized(std::size_t new_dim) const {
        std::vector<cplx> out(new_dim, 0.0);
        std::copy_n(amps_.begin(), std::min(new_dim, dim()), out.begin());
        return FockVector(std::move(out));
    }

  private:
    std::vector<cplx> amps_;
};

inline double norm_squared(std::span<const cplx> v) {
    double s = 0.0;
    for (const auto &c : v) {
        s += std::norm(c);
    }
    return s;
}

/// <u|v> with the first argument conjugated.
inline cplx inner(std::span<const cplx> u, std::span<const cplx> v) {
    if (u.size() != v.size()) {
        throw DimensionError("inner: dimension mismatch");
    }
    cplx s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        s += std::conj(u[i]) * v[i];
    }
    return s;
}

/// Dense complex dim x dim matrix, row-major.
class OperatorMatrix {
  public:
    explicit OperatorMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim, 0.0) {
        if (dim == 0) {
            throw DimensionError("OperatorMatrix: dimension must be at least 1");
        }
    }

    static OperatorMatrix identity(std::size_t dim) {
        OperatorMatrix m(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            m(i, i) = 1.0;
        }
        return m;
    }

    std::size_t dim() const { return dim_; }
    cplx &operator()(std::size_t row, std::size_t col) { return entries_[row * dim_ + col]; }
    const cplx &operator()(std::size_t row, std::size_t col) const {
        return entries_[row * dim_ + col];
    }

    OperatorMatrix adjoint() const {
        OperatorMatrix out(dim_);
        for (std::size_t r = 0; r < dim_; ++r) {
            for (std::size_t c = 0; c < dim_; ++c) {
                out(c, r) = std::conj((*this)(r, c));
            }
        }
        return out;
    }

    std::vector<cplx> apply(std::span<const cplx> v) const {
        if (v.size() != dim_) {
            throw DimensionError("OperatorMatrix::apply: dimension mismatch");
        }
        std::vector<cplx> out(dim_, 0.0);
        for (std::size_t r = 0; r < dim_; ++r) {
            cplx s = 0.0;
            const cplx *row = &entries_[r * dim_];
            for (std::size_t c = 0; c < dim_; ++c) {
                s += row[c] * v[c];
            }
            out[r] = s;
        }
        return out;
    }

    friend OperatorMatrix operator*(const OperatorMatrix &a, const OperatorMatrix &b) {
        if (a.dim_ != b.dim_) {
            throw DimensionError("OperatorMatrix product: dimension mismatch");
        }
        OperatorMatrix out(a.dim_);
        for (std::size_t r = 0; r < a.dim_; ++r) {
            for (std::size_t k = 0; k < a.dim_; ++k) {
                const cplx ark = a(r, k);
                if (ark == cplx(0.0)) {
                    continue;
                }
                for (std::size_t c = 0; c < a.dim_; ++c) {
                    out(r, c) += ark * b(k, c);
                }
            }
        }
        return out;
    }

    friend OperatorMatrix operator-(const OperatorMatrix &a, const OperatorMatrix &b) {
        if (a.dim_ != b.dim_) {
            throw DimensionError("OperatorMatrix difference: dimension mismatch");
        }
        OperatorMatrix out(a.dim_);
        for (std::size_t i = 0; i < a.entries_.size(); ++i) {
            out.entries_[i] = a.entries_[i] - b.entries_[i];
        }
        return out;
    }

    /// max |M - M^dagger| over all entries.
    double hermiticity_defect() const {
        double worst = 0.0;
        for (std::size_t r = 0; r < dim_; ++r) {
            for (std::size_t c = r; c < dim_; ++c) {
                worst = std::max(worst, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
            }
        }
        return worst;
    }

  private:
    std::size_t dim_;
    std::vector<cplx> entries_;
};

/// Coupling between measured system and pointer. gamma = g / sigma is the
/// dimensionless measurement strength.
struct CouplingConfig {
    double g = 0.0;
    double sigma = 1.0;
    double gamma = 0.0;

    static CouplingConfig from_g_sigma(double g, double sigma = 1.0) {
        if (!(sigma > 0.0) || !std::isfinite(sigma)) {
            throw InvalidArgument("CouplingConfig: sigma must be positive and finite");
        }
        if (!std::isfinite(g)) {
            throw InvalidArgument("CouplingConfig: g must be finite");
        }
        return CouplingConfig{g, sigma, g / sigma};
    }

    /// g = gamma * sigma.
    static CouplingConfig from_gamma(double gamma, double sigma = 1.0) {
        if (!(sigma > 0.0) || !std::isfinite(sigma)) {
            throw InvalidArgument("CouplingConfig: sigma must be positive and finite");
        }
        if (!std::isfinite(gamma)) {
            throw InvalidArgument("CouplingConfig: gamma must be finite");
        }
        CouplingConfig c{gamma * sigma, sigma, gamma};
        return c;
    }
};

/// Default truncation for states displaced out to |target|:
/// max(64, ceil(8 (|target|^2 + 4))).
inline std::size_t default_dim(double displacement_target) {
    const double t = std::abs(displacement_target);
    return std::max<std::size_t>(64, static_cast<std::size_t>(std::ceil(8.0 * (t * t + 4.0))));
}

namespace detail {

/// Laguerre recurrence returning a mantissa and accumulating log(scale) so that
/// L = mantissa * exp(log_scale). Rescales whenever the iterate grows past 1e150.
inline long double laguerre_scaled(std::size_t n, double eta, double x, double& log_scale) {
    log_scale = 0.0;
    if (n == 0) {
        return 1.0L;
    }
    long double prev = 1.0L;
    long double cur = 1.0L + eta - x;
    for (std::size_t k = 1; k < n; ++k) {
        const long double kd = static_cast<long double>(k);
        const long double next = ((2.0L * kd + 1.0L + eta - x) * cur - (kd + eta) * prev) / (kd + 1.0L);
        prev = cur;
        cur = next;
        const long double big = std::fabs(cur);
        if (big > 1e150L) {
            prev /= big;
            cur /= big;
            log_scale += static_cast<double>(std::log(big));
        }
    }
    return cur;
}

}  // namespace detail

/// Generalized Laguerre polynomial L_n^{(eta)}(x) by upward three-term recurrence
///   (k+1) L_{k+1} = (2k + 1 + eta - x) L_k - (k + eta) L_{k-1}.
inline double laguerre_general(std::size_t n, double eta, double x) {
    double log_scale = 0.0;
    const long double mant = detail::laguerre_scaled(n, eta, x, log_scale);
    return static_cast<double>(mant * std::exp(static_cast<long double>(log_scale)));
}

/// <m| D(alpha) |n> with D(alpha) = exp(alpha a^dagger - alpha^* a):
///
///   m >= n:  e^{-|alpha|^2/2} sqrt(n!/m!) alpha^{m-n}      L_n^{(m-n)}(|alpha|^2)
///   m <  n:  e^{-|alpha|^2/2} sqrt(m!/n!) (-alpha^*)^{n-m} L_m^{(n-m)}(|alpha|^2)
///
/// Magnitudes are assembled in log space (log-gamma for the factorial ratio)
/// so the result neither overflows nor underflows prematurely for large m, n.
inline cplx displacement_element(std::size_t m, std::size_t n, cplx alpha) {
    const double mag = std::abs(alpha);
    if (mag == 0.0) {
        return m == n ? cplx(1.0) : cplx(0.0);
    }
    const std::size_t lo = std::min(m, n);
    const std::size_t k = m > n ? m - n : n - m;
    const double x = mag * mag;
    double log_scale = 0.0;
    const double lag = static_cast<double>(detail::laguerre_scaled(lo, static_cast<double>(k), x, log_scale));
    if (lag == 0.0) {
        return 0.0;
    }
    const double log_mag = -0.5 * x +
                           0.5 * (std::lgamma(static_cast<double>(lo) + 1.0) -
                                  std::lgamma(static_cast<double>(lo + k) + 1.0)) +
                           static_cast<double>(k) * std::log(mag) + std::log(std::abs(lag)) + log_scale;
    const double base_arg = m >= n ? std::arg(alpha) : std::arg(-std::conj(alpha));
    const double sign = lag < 0.0 ? -1.0 : 1.0;
    return std::polar(sign * std::exp(log_mag), static_cast<double>(k) * base_arg);
}

enum class OperatorKind { annihilate, create, number, position, momentum, displacement };

/// Matrix of a pointer operator truncated to dim levels. `alpha` is used only
/// for OperatorKind::displacement; `sigma` only for position and momentum.
inline OperatorMatrix build_operator(OperatorKind kind, std::size_t dim, double sigma = 1.0,
                                     cplx alpha = 0.0) {
    const bool ladder = kind == OperatorKind::annihilate || kind == OperatorKind::create ||
                        kind == OperatorKind::position || kind == OperatorKind::momentum;
    if (ladder && dim < 2) {
        throw DimensionError("build_operator: ladder operators need dim >= 2");
    }
    if (dim == 0) {
        throw DimensionError("build_operator: dim must be at least 1");
    }
    if ((kind == OperatorKind::position || kind == OperatorKind::momentum) &&
        (!(sigma > 0.0) || !std::isfinite(sigma))) {
        throw InvalidArgument("build_operator: sigma must be positive");
    }
    OperatorMatrix m(dim);
    switch (kind) {
        case OperatorKind::annihilate:
            for (std::size_t n = 0; n + 1 < dim; ++n) {
                m(n, n + 1) = std::sqrt(static_cast<double>(n + 1));
            }
            break;
        case OperatorKind::create:
            for (std::size_t n = 0; n + 1 < dim; ++n) {
                m(n + 1, n) = std::sqrt(static_cast<double>(n + 1));
            }
            break;
        case OperatorKind::number:
            for (std::size_t n = 0; n < dim; ++n) {
                m(n, n) = static_cast<double>(n);
            }
            break;
        case OperatorKind::position:
            for (std::size_t n = 0; n + 1 < dim; ++n) {
                const double s = sigma * std::sqrt(static_cast<double>(n + 1));
                m(n + 1, n) = s;
                m(n, n + 1) = s;
            }
            break;
        case OperatorKind::momentum:
            for (std::size_t n = 0; n + 1 < dim; ++n) {
                const double s = std::sqrt(static_cast<double>(n + 1)) / (2.0 * sigma);
                m(n + 1, n) = cplx(0.0, s);
                m(n, n + 1) = cplx(0.0, -s);
            }
            break;
        case OperatorKind::displacement:
            for (std::size_t r = 0; r < dim; ++r) {
                for (std::size_t c = 0; c < dim; ++c) {
                    m(r, c) = displacement_element(r, c, alpha);
                }
            }
            break;
    }
    return m;
}

/// <phi| M |phi>.
inline cplx expectation(const FockVector &state, const OperatorMatrix &op) {
    if (state.dim() != op.dim()) {
        throw DimensionError("expectation: state dim " + std::to_string(state.dim()) +
                             " != operator dim " + std::to_string(op.dim()));
    }
    return inner(state.amps(), op.apply(state.amps()));
}

// Matrix-free ladder sums over a truncated amplitude vector. They agree exactly
// with the truncated matrices above.

/// <a> = sum_n sqrt(n+1) conj(c_n) c_{n+1}.
inline cplx mean_annihilation(std::span<const cplx> c) {
    cplx s = 0.0;
    for (std::size_t n = 0; n + 1 < c.size(); ++n) {
        s += std::sqrt(static_cast<double>(n + 1)) * std::conj(c[n]) * c[n + 1];
    }
    return s;
}

/// <a^2> = sum_n sqrt((n+1)(n+2)) conj(c_n) c_{n+2}.
inline cplx mean_annihilation_sq(std::span<const cplx> c) {
    cplx s = 0.0;
    for (std::size_t n = 0; n + 2 < c.size(); ++n) {
        s += std::sqrt(static_cast<double>((n + 1) * (n + 2))) * std::conj(c[n]) * c[n + 2];
    }
    return s;
}

/// <a^dagger a>.
inline double mean_number(std::span<const cplx> c) {
    double s = 0.0;
    for (std::size_t n = 1; n < c.size(); ++n) {
        s += static_cast<double>(n) * std::norm(c[n]);
    }
    return s;
}

/// <X> = 2 sigma Re<a> for a normalized amplitude vector.
inline double mean_position(std::span<const cplx> c, double sigma) {
    return 2.0 * sigma * mean_annihilation(c).real();
}

/// <P> = Im<a> / sigma for a normalized amplitude vector.
inline double mean_momentum(std::span<const cplx> c, double sigma) {
    return mean_annihilation(c).imag() / sigma;
}

/// Var(P) = ||P phi||^2 - <P>^2 with the truncated momentum matrix.
inline double momentum_variance(const FockVector &state, double sigma) {
    const auto p = build_operator(OperatorKind::momentum, std::max<std::size_t>(2, state.dim()),
                                  sigma);
    const FockVector s = state.dim() < 2 ? state.resized(2) : state;
    const auto pv = p.apply(s.amps());
    const double p2 = norm_squared(pv);
    const double p1 = inner(s.amps(), pv).real();
    return p2 - p1 * p1;
}

}  // namespace pointershift
