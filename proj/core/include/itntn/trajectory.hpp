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

#ifndef ITNTN_TRAJECTORY_HPP
#define ITNTN_TRAJECTORY_HPP

#include "itntn/ratemodel.hpp"

#include <functional>
#include <vector>

namespace itntn
{
    // Affine form coef . q + constant.
    struct AffineForm
    {
        Vec3 coef = Vec3::Zero();
        double constant = 0.0;

        double operator()(const Vec3 &q) const { return coef.dot(q) + constant; }
    };

    // Supporting-hyperplane lower bound of ||q - anchor||, tight at q_t.
    AffineForm linear_distance_bound(const Vec3 &anchor, const Vec3 &q_t);

    // h(d1, d2) = d1^-eta1 d2^-eta2 and its partial derivatives.
    double cascade_h(double d1, double d2, double eta1, double eta2);
    double cascade_h_d1(double d1, double d2, double eta1, double eta2);
    double cascade_h_d2(double d1, double d2, double eta1, double eta2);

    // Reflected-link power model of one user in one slot.
    struct TrajectorySurrogate
    {
        bool enabled = false;
        double C = 0.0;
        double eta1 = 2.0, eta2 = 2.0;
        double d1 = 0.0, d2 = 0.0; // expansion distances
        Vec3 anchor1 = Vec3::Zero(); // transmitter
        Vec3 anchor2 = Vec3::Zero(); // user
        Vec3 q_t = Vec3::Zero();
        double interference = 0.0; // frozen interference plus noise
        double p_cur = 0.0;

        double true_power(const Vec3 &q) const;
        AffineForm power_form() const;
    };

    // Cascade-only received power of an own-tier user's stream.
    double cascade_power(const ChannelSet &ch, const NetworkState &st, Platform p, int slot, int user);

    // p_cur d1^eta1 d2^eta2 at the current geometry; disabled when p_cur == 0.
    TrajectorySurrogate cascade_constant(const Scenario &s, const Deployment &dep, const ChannelSet &ch,
                                         const NetworkState &st, Platform p, int slot, int user);

    // C (h_t + dh/dd1 (d1_hat(q) - d1_t) + dh/dd2 (d2_hat(q) - d2_t)).
    double power_surrogate(const Vec3 &q, const TrajectorySurrogate &ts);

    constexpr double kPowerFloor = 1e-30;

    // Surrogates for every (slot, user) of a platform, [slot][user].
    using SurrogateTable = std::vector<std::vector<TrajectorySurrogate>>;

    SurrogateTable build_surrogates(const Scenario &s, const Deployment &dep, const std::vector<ChannelSet> &ch,
                                    const NetworkState &st, const DecodingPlan &plan, Platform p);

    // (1/N) sum_n sum_users log2(1 + max(p_hat, floor) / I).
    double surrogate_objective(const Path &path, const SurrogateTable &table);

    // Gradient of surrogate_objective per slot.
    std::vector<Vec3> surrogate_gradient(const Path &path, const SurrogateTable &table);

    // Altitude clamp, endpoint pinning and speed-ball sweeps; falls back to
    // blending with the straight line if the sweeps do not converge.
    Path project_path(const Path &path, const PathLimits &lim, int sweeps = 10);

    struct SubproblemResult
    {
        Path path;
        double value_start = 0.0;
        double value_end = 0.0;
        int iterations = 0;
    };

    // Projected gradient ascent with backtracking on one platform's surrogate.
    SubproblemResult solve_trajectory_subproblem(const Path &path_t, const SurrogateTable &table,
                                                 const PathLimits &lim, int step_iters = 30);

    struct TrajectoryOptions
    {
        int sca_iters = 5;
        int step_iters = 30;
        int max_halvings = 10;
        bool move_uav = true;
        bool move_hap = true;
        bool aris_guard = true; // keep the surface power budgets satisfied
    };

    struct TrajectoryStep
    {
        double rate_before = 0.0;
        double rate_after = 0.0;
        double tightness = 0.0; // largest relative surrogate gap at the expansion point
        int halvings = 0;
        bool accepted = false;
    };

    struct TrajectoryResult
    {
        std::vector<TrajectoryStep> steps;
        double rate = 0.0;
    };

    // Safeguarded SCA over both paths; updates st paths and ch in place.
    TrajectoryResult optimize_trajectories(const Scenario &s, const Deployment &dep, const FadingRealization &real,
                                           const DecodingPlan &plan, NetworkState &st, std::vector<ChannelSet> &ch,
                                           const TrajectoryOptions &opt = {});
}

#endif
