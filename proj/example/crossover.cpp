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

// Prints the position shift across the weak-to-strong crossover for a coherent
// pointer, next to the two limiting readouts.

#include <cmath>
#include <cstdio>
#include <numbers>

#include "pointershift/pointer_states.hpp"
#include "pointershift/transition.hpp"

int main() {
    namespace ps = pointershift;
    const double theta = 0.3;
    const auto q = ps::qubit_sigma_x(theta);
    const auto pointer = ps::make_coherent(std::polar(3.0, std::numbers::pi / 6), 128);

    std::printf("weak readout   %+.6f\n", ps::weak_value(q.observable, q.selection).real());
    std::printf("strong readout %+.6f\n", ps::conditional_expectation(q.observable, q.selection));
    std::printf("%8s %12s %12s %12s\n", "gamma", "dx/g", "dp", "p_success");
    for (double gamma : {0.01, 0.1, 0.5, 1.0, 2.0, 3.0, 5.0}) {
        const auto cfg = ps::CouplingConfig::from_gamma(gamma, 1.0);
        const auto r = ps::evaluate_shifts(q.observable, q.selection, pointer, cfg);
        std::printf("%8.2f %12.6f %12.6f %12.6f\n", gamma, r.delta_x / cfg.g, r.delta_p, r.postselect_prob);
    }
}
