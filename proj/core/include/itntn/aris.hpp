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

#ifndef ITNTN_ARIS_HPP
#define ITNTN_ARIS_HPP

#include "itntn/manifold.hpp"
#include "itntn/wmmse.hpp"

#include <vector>

namespace itntn
{
    // Surface-dependent part of the slot's weighted-MSE objective,
    // f(phi) = phi^H Q phi - 2 Re{phi^H q}, and its power form phi^H diag(upsilon) phi.
    struct ArisQuadratic
    {
        cmat Q;
        cvec q;
        rvec upsilon;
        double budget = 0.0;
        double rho_max = 1.0;

        Eigen::Index size() const { return q.size(); }
        double f(const cvec &phi) const;
        double g(const rvec &rho) const { return upsilon.dot(rho); }
    };

    ArisQuadratic build_quadratic(const Scenario &s, const ChannelSet &ch, const NetworkState &st,
                                  const WmmseState &wm, const DecodingPlan &plan, Platform p, int slot);

    // sqrt(rho) .* theta
    cvec compose(const rvec &rho, const cvec &theta);

    RcgResult optimize_phases(const ArisQuadratic &quad, const rvec &rho, const cvec &theta0,
                              const RcgOptions &opt = {});

    struct AmpGradients
    {
        rvec grad_f;
        rvec grad_g;
        double f = 0.0;
        double g = 0.0;
    };

    constexpr double kRhoFloor = 1e-8;

    AmpGradients amp_gradients(const ArisQuadratic &quad, const cvec &theta, const rvec &rho);

    struct AmpLp
    {
        rvec rho;
        bool infeasible = false;
    };

    // Minimizes grad_f . rho over 0 <= rho <= rho_max and
    // grad_g . (rho - rho_t) <= budget - g_t.
    AmpLp solve_amp_lp(const rvec &grad_f, const rvec &grad_g, const rvec &rho_t, double rho_max, double budget,
                       double g_t);

    struct AmpOptions
    {
        double tol = 1e-9; // relative change of f
        int max_iter = 50;
        double min_alpha = 1e-6;
    };

    struct AmpResult
    {
        rvec rho;
        std::vector<double> trace;
        int iterations = 0;
        bool stagnated = false;
    };

    AmpResult optimize_amplitudes(const ArisQuadratic &quad, const cvec &theta, const rvec &rho0,
                                  const AmpOptions &opt = {});

    struct ArisOptions
    {
        bool phases = true;
        bool amplitudes = true;
        int outer_iter = 10;
        double outer_tol = 1e-7; // relative change of f
        RcgOptions rcg;
        AmpOptions amp;
    };

    struct ArisResult
    {
        ArisVector coeffs;
        std::vector<double> trace; // f per outer iteration, starting value first
    };

    ArisResult optimize_aris(const ArisQuadratic &quad, const ArisVector &start, const ArisOptions &opt = {});
    ArisResult optimize_aris(const Scenario &s, const ChannelSet &ch, const NetworkState &st, const WmmseState &wm,
                             const DecodingPlan &plan, Platform p, int slot, const ArisOptions &opt = {});

    // Phases in [0, 2pi) of unit-modulus entries.
    rvec phases_of(const cvec &theta);
}

#endif
