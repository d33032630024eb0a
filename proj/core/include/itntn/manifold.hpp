// SPDX-License-Identifier: Apache-2.0
//
// itntn-lab: dual-aerial active-RIS NOMA network optimization laboratory
// Copyright (C) 2026 The itntn-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef ITNTN_MANIFOLD_HPP
#define ITNTN_MANIFOLD_HPP

#include "itntn/types.hpp"

#include <vector>

namespace itntn
{
    // f(theta) = theta^H Q theta - 2 Re{theta^H q}
    struct QuadraticObjective
    {
        cmat Q;
        cvec q;

        double value(const cvec &theta) const;
        // Throws ConfigError unless Q is square, Hermitian and matches q.
        void validate() const;
    };

    // Real inner product Re{a^H b}.
    double real_inner(const cvec &a, const cvec &b);

    cvec euclid_grad(const QuadraticObjective &obj, const cvec &theta);
    cvec project_tangent(const cvec &g, const cvec &theta);
    cvec transport(const cvec &zeta, const cvec &theta_new);
    cvec retract(const cvec &theta, const cvec &step);

    struct ArmijoResult
    {
        double step = 0.0;
        cvec direction;      // the direction actually searched
        bool reset = false;  // direction replaced by the negative gradient
        bool stagnated = false;
    };

    ArmijoResult armijo_step(const QuadraticObjective &obj, const cvec &theta, const cvec &zeta, double xi0,
                             double c1 = 1e-4, double shrink = 0.5);

    struct RcgOptions
    {
        double grad_tol = -1.0; // < 0: 1e-6 (1 + |f(theta0)|)
        int max_iter = 200;
        double c1 = 1e-4;
        double shrink = 0.5;
        // Initial trial step in radians of the largest element move.
        double step_rad = 1.0;
    };

    struct RcgResult
    {
        cvec theta;
        std::vector<double> trace; // f per accepted iterate, starting at theta0
        int iterations = 0;
        bool converged = false;
        double grad_norm = 0.0;
    };

    RcgResult rcg_minimize(const QuadraticObjective &obj, const cvec &theta0, const RcgOptions &opt = {});
}

#endif
