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

#ifndef ITNTN_WMMSE_HPP
#define ITNTN_WMMSE_HPP

#include "itntn/ratemodel.hpp"

#include <vector>

namespace itntn
{
    // Receive equalizers, MSE weights and interference terms per slot.
    struct WmmseState
    {
        std::vector<cvec> u_terr, u_sat;
        std::vector<rvec> w_terr, w_sat;
        std::vector<rvec> e_terr, e_sat;
        std::vector<rvec> t_terr, t_sat;
        std::vector<double> lambda_tbs, lambda_sat;
        double objective = 0.0; // (1/N) sum (w e - ln w)

        void resize(int n_slots, int K, int L);
    };

    // Received power of every stream still present while decoding `user`,
    // its own stream included, plus cross-tier power and noise.
    double interference_T(const SlotLinks &lk, const cmat &beams_tbs, const cmat &beams_sat,
                          const DecodingPlan &plan, int slot, Tier tier, int user);

    // |u|^2 T - 2 Re{conj(u) hv} + 1
    double mse(cplx u, double T, cplx hv);

    // u = hv / T and the resulting MSE for every user of the slot.
    void update_equalizers(const SlotLinks &lk, const cmat &beams_tbs, const cmat &beams_sat,
                           const DecodingPlan &plan, int slot, WmmseState &wm);

    // w = 1 / e.
    void update_weights(WmmseState &wm, int slot);

    // Equalizers, weights and objective at the current beams.
    WmmseState wmmse_statistics(const Scenario &s, const std::vector<ChannelSet> &ch, const NetworkState &st,
                                const DecodingPlan &plan);

    struct BeamUpdate
    {
        cmat beams;
        double lambda = 0.0;
    };

    // v_m = (A_m + lambda I)^+ b_m with one multiplier for the whole transmitter:
    // lambda = 0 if that meets the budget, else the bisection root of
    // sum ||v_m||^2 = power.
    BeamUpdate solve_beams(const std::vector<cmat> &A, const cmat &B, double power);

    // Total transmit power of solve_beams at a fixed multiplier.
    double beam_power(const std::vector<cmat> &A, const cmat &B, double lambda);

    // Assembles A_m, b_m for one transmitter from the slot's equalizers and weights.
    void beam_system(const SlotLinks &lk, const DecodingPlan &plan, int slot, const WmmseState &wm, Tier tier,
                     std::vector<cmat> &A, cmat &B);

    BeamUpdate update_beams(const SlotLinks &lk, const DecodingPlan &plan, int slot, const WmmseState &wm,
                            Tier tier, double power);

    struct WmmseOptions
    {
        double tol = 1e-5;
        int max_iter = 2000;
        // Keep the surface power budgets satisfied by damping beam moves.
        bool aris_guard = true;
        // Stretch each slot's update along its own direction while the slot
        // sum-rate keeps rising; 0 disables.
        int max_stretch = 12;
    };

    struct WmmseResult
    {
        WmmseState state;
        std::vector<double> objective_trace;
        int iterations = 0;
    };

    // Alternates equalizer, weight and beam updates on every slot; updates st beams in place.
    WmmseResult wmmse_solve(const Scenario &s, const std::vector<ChannelSet> &ch, NetworkState &st,
                            const DecodingPlan &plan, const WmmseOptions &opt = {});

    // Largest alpha in [0, 1] keeping the surface power of v0 + alpha (v1 - v0) within budget.
    double feasible_fraction(const cvec &phi, const cmat &bs_ris, const cmat &v0, const cmat &v1, double sigma2,
                             double budget);
}

#endif
