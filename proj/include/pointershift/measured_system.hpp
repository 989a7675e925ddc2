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

// Finite-dimensional measured system: observable spectral data, pre- and
// post-selected states in the observable eigenbasis, and the three readout
// values (expectation, conditional expectation, weak value).

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "pointershift/errors.hpp"
#include "pointershift/fock.hpp"

namespace pointershift {

/// Below this |<psi_f|psi_i>| the weak value is treated as divergent.
inline constexpr double kOverlapEpsilon = 1e-10;
/// Below this sum_j |alpha_j beta_j^*|^2 the conditional value is undefined.
inline constexpr double kConditionalFloor = 1e-30;

/// Observable A = sum_j a_j |a_j><a_j|. Repeated eigenvalues are allowed.
class Observable {
  public:
    explicit Observable(std::vector<double> eigenvalues, std::vector<std::string> labels = {})
        : eigenvalues_(std::move(eigenvalues)), labels_(std::move(labels)) {
        if (eigenvalues_.size() < 2) {
            throw DimensionError("Observable: need at least 2 eigenvalues");
        }
        for (double a : eigenvalues_) {
            if (!std::isfinite(a)) {
                throw InvalidArgument("Observable: non-finite eigenvalue");
            }
        }
        if (labels_.empty()) {
            for (std::size_t j = 0; j < eigenvalues_.size(); ++j) {
                labels_.push_back("a" + std::to_string(j));
            }
        } else if (labels_.size() != eigenvalues_.size()) {
            throw DimensionError("Observable: label count does not match eigenvalue count");
        }
    }

    std::size_t size() const { return eigenvalues_.size(); }
    std::span<const double> eigenvalues() const { return eigenvalues_; }
    const std::vector<std::string> &labels() const { return labels_; }
    double min() const { return *std::min_element(eigenvalues_.begin(), eigenvalues_.end()); }
    double max() const { return *std::max_element(eigenvalues_.begin(), eigenvalues_.end()); }

  private:
    std::vector<double> eigenvalues_;
    std::vector<std::string> labels_;
};

namespace detail {

inline void require_normalized(std::span<const cplx> v, const char *what) {
    for (const auto &c : v) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
            throw InvalidArgument(std::string(what) + ": non-finite amplitude");
        }
    }
    const double n2 = norm_squared(v);
    if (std::abs(n2 - 1.0) > 1e-10) {
        throw InvalidArgument(std::string(what) + ": amplitudes not normalized (sum |c|^2 = " +
                              std::to_string(n2) + ")");
    }
}

inline std::vector<cplx> rescaled(std::vector<cplx> v) {
    const double inv = 1.0 / std::sqrt(norm_squared(v));
    for (auto &c : v) {
        c *= inv;
    }
    return v;
}

}  // namespace detail

/// Pre-selection amplitudes alpha_j = <a_j|psi_i> and post-selection amplitudes
/// beta_j = <a_j|psi_f>. Inputs must already be normalized to 1e-10; they are
/// then rescaled to unit norm at machine precision.
class SelectionPair {
  public:
    SelectionPair(std::vector<cplx> pre, std::vector<cplx> post) {
        if (pre.size() != post.size()) {
            throw DimensionError("SelectionPair: pre and post have different lengths");
        }
        if (pre.size() < 2) {
            throw DimensionError("SelectionPair: need at least 2 amplitudes");
        }
        detail::require_normalized(pre, "SelectionPair pre");
        detail::require_normalized(post, "SelectionPair post");
        pre_ = detail::rescaled(std::move(pre));
        post_ = detail::rescaled(std::move(post));
    }

    /// Normalizes arbitrary nonzero vectors first.
    static SelectionPair normalized(std::vector<cplx> pre, std::vector<cplx> post) {
        if (!(norm_squared(pre) > 0.0) || !(norm_squared(post) > 0.0)) {
            throw InvalidArgument("SelectionPair::normalized: zero vector");
        }
        return SelectionPair(detail::rescaled(std::move(pre)), detail::rescaled(std::move(post)));
    }

    std::size_t size() const { return pre_.size(); }
    std::span<const cplx> pre() const { return pre_; }
    std::span<const cplx> post() const { return post_; }

    /// Branch weight w_j = alpha_j beta_j^* carried by eigenvalue a_j.
    cplx weight(std::size_t j) const { return pre_[j] * std::conj(post_[j]); }

    /// <psi_f|psi_i> = sum_j alpha_j beta_j^*.
    cplx overlap() const {
        cplx s = 0.0;
        for (std::size_t j = 0; j < size(); ++j) {
            s += weight(j);
        }
        return s;
    }

  private:
    std::vector<cplx> pre_;
    std::vector<cplx> post_;
};

inline void check_sizes(const Observable &obs, std::size_t n, const char *what) {
    if (obs.size() != n) {
        throw DimensionError(std::string(what) + ": observable has " + std::to_string(obs.size()) +
                             " eigenvalues but selection has " + std::to_string(n));
    }
}

/// <A> = sum_j a_j |alpha_j|^2.
inline double expectation_value(const Observable &obs, std::span<const cplx> pre) {
    check_sizes(obs, pre.size(), "expectation_value");
    detail::require_normalized(pre, "expectation_value");
    double s = 0.0;
    for (std::size_t j = 0; j < pre.size(); ++j) {
        s += obs.eigenvalues()[j] * std::norm(pre[j]);
    }
    return s / norm_squared(pre);
}

/// <A>_c = sum_j a_j |alpha_j beta_j^*|^2 / sum_j |alpha_j beta_j^*|^2.
inline double conditional_expectation(const Observable &obs, const SelectionPair &sel) {
    check_sizes(obs, sel.size(), "conditional_expectation");
    double num = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < sel.size(); ++j) {
        const double p = std::norm(sel.weight(j));
        num += obs.eigenvalues()[j] * p;
        den += p;
    }
    if (!(den > kConditionalFloor)) {
        throw SelectionError("conditional_expectation: pre/post selection has no common support");
    }
    return num / den;
}

/// <A>_w = sum_j a_j alpha_j beta_j^* / sum_j alpha_j beta_j^*.
inline cplx weak_value(const Observable &obs, const SelectionPair &sel,
                       double epsilon = kOverlapEpsilon) {
    check_sizes(obs, sel.size(), "weak_value");
    cplx num = 0.0;
    for (std::size_t j = 0; j < sel.size(); ++j) {
        num += obs.eigenvalues()[j] * sel.weight(j);
    }
    const cplx ov = sel.overlap();
    if (!(std::abs(ov) > epsilon)) {
        throw SelectionError("weak_value: |<psi_f|psi_i>| = " + std::to_string(std::abs(ov)) +
                             " below " + std::to_string(epsilon) + "; weak value diverges");
    }
    return num / ov;
}

/// Pauli-x with eigenvalues (+1, -1) on |+>, |->, pre-selected in |down> and
/// post-selected in cos(theta)|up> - sin(theta)|down>. Amplitudes are in the
/// (|+>, |->) eigenbasis, |up/down> = (|+> +/- |->) / sqrt 2.
struct QubitScenario {
    Observable observable;
    SelectionPair selection;
};

inline QubitScenario qubit_sigma_x(double theta) {
    const double h = 1.0 / std::numbers::sqrt2;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return QubitScenario{
        Observable({1.0, -1.0}, {"+", "-"}),
        SelectionPair::normalized({h, -h}, {(c - s) * h, (c + s) * h}),
    };
}

}  // namespace pointershift
