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

#include "itntn/trajectory.hpp"

#include "itntn/wmmse.hpp"

#include <cmath>
#include <numbers>

namespace itntn
{
    namespace
    {
        constexpr double kStepShrink = 1.0 - 1e-12;

        // Pull `q` into the ball of radius r around `c`.
        void pull(Vec3 &q, const Vec3 &c, double r)
        {
            const Vec3 d = q - c;
            const double n = d.norm();
            if (n > r)
                q = c + d * (r * kStepShrink / n);
        }

        bool aris_feasible(const Scenario &s, const std::vector<ChannelSet> &ch, const NetworkState &st)
        {
            for (int n = 0; n < st.n_slots(); ++n)
                for (Platform p : {Platform::uav, Platform::hap})
                    if (aris_output_power(s, ch[static_cast<std::size_t>(n)], st, p, n) > s.aerial(p).power_budget)
                        return false;
            return true;
        }

        Path blend(const Path &a, const Path &b, double t)
        {
            Path out = a;
            for (std::size_t n = 0; n < a.size(); ++n)
                out[n] = a[n] + t * (b[n] - a[n]);
            if (a.size() > 0)
            {
                out[0] = a[0];
                out[a.size() - 1] = a[a.size() - 1];
            }
            return out;
        }
    }

    AffineForm linear_distance_bound(const Vec3 &anchor, const Vec3 &q_t)
    {
        const Vec3 diff = q_t - anchor;
        const double d = diff.norm();
        if (!(d > 0.0))
            throw ConfigError("linear_distance_bound: expansion point coincides with the anchor");
        AffineForm f;
        f.coef = diff / d;
        f.constant = d - f.coef.dot(q_t);
        return f;
    }

    double cascade_h(double d1, double d2, double eta1, double eta2) { return std::pow(d1, -eta1) * std::pow(d2, -eta2); }

    double cascade_h_d1(double d1, double d2, double eta1, double eta2)
    {
        return -eta1 * std::pow(d1, -eta1 - 1.0) * std::pow(d2, -eta2);
    }

    double cascade_h_d2(double d1, double d2, double eta1, double eta2)
    {
        return -eta2 * std::pow(d1, -eta1) * std::pow(d2, -eta2 - 1.0);
    }

    double TrajectorySurrogate::true_power(const Vec3 &q) const
    {
        return C * cascade_h((q - anchor1).norm(), (q - anchor2).norm(), eta1, eta2);
    }

    AffineForm TrajectorySurrogate::power_form() const
    {
        const AffineForm b1 = linear_distance_bound(anchor1, q_t);
        const AffineForm b2 = linear_distance_bound(anchor2, q_t);
        const double h = cascade_h(d1, d2, eta1, eta2);
        const double g1 = cascade_h_d1(d1, d2, eta1, eta2);
        const double g2 = cascade_h_d2(d1, d2, eta1, eta2);
        AffineForm f;
        f.coef = C * (g1 * b1.coef + g2 * b2.coef);
        f.constant = C * (h + g1 * (b1.constant - d1) + g2 * (b2.constant - d2));
        return f;
    }

    double cascade_power(const ChannelSet &ch, const NetworkState &st, Platform p, int slot, int user)
    {
        const std::size_t n = static_cast<std::size_t>(slot);
        const cvec phi = st.aris(p, slot).coeffs();
        const bool uav = p == Platform::uav;
        const cvec h = (uav ? ch.uav_terr : ch.hap_sat).col(user);
        const cmat &bs_ris = uav ? ch.tbs_uav : ch.sat_hap;
        const cvec v = (uav ? st.beams_tbs[n] : st.beams_sat[n]).col(user);
        const crow cascade = h.conjugate().cwiseProduct(phi).transpose() * bs_ris;
        return std::norm((cascade * v).value());
    }

    TrajectorySurrogate cascade_constant(const Scenario &s, const Deployment &dep, const ChannelSet &ch,
                                         const NetworkState &st, Platform p, int slot, int user)
    {
        const bool uav = p == Platform::uav;
        TrajectorySurrogate ts;
        ts.q_t = st.path(p)[static_cast<std::size_t>(slot)];
        ts.anchor1 = uav ? s.tbs_position : s.sat_position;
        ts.anchor2 = (uav ? dep.terrestrial : dep.satellite)[static_cast<std::size_t>(user)];
        ts.eta1 = uav ? s.eta_tbs_uav : 2.0;
        ts.eta2 = uav ? s.eta_uav_terr : 2.0;
        ts.d1 = (ts.q_t - ts.anchor1).norm();
        ts.d2 = (ts.q_t - ts.anchor2).norm();
        ts.p_cur = cascade_power(ch, st, p, slot, user);
        ts.enabled = ts.p_cur > kPowerFloor && ts.d1 > 0.0 && ts.d2 > 0.0;
        if (ts.enabled)
            ts.C = ts.p_cur / cascade_h(ts.d1, ts.d2, ts.eta1, ts.eta2);
        return ts;
    }

    double power_surrogate(const Vec3 &q, const TrajectorySurrogate &ts)
    {
        if (!ts.enabled)
            return 0.0;
        return ts.power_form()(q);
    }

    SurrogateTable build_surrogates(const Scenario &s, const Deployment &dep, const std::vector<ChannelSet> &ch,
                                    const NetworkState &st, const DecodingPlan &plan, Platform p)
    {
        const WmmseState wm = wmmse_statistics(s, ch, st, plan);
        const bool uav = p == Platform::uav;
        SurrogateTable table(ch.size());
        for (int n = 0; n < static_cast<int>(ch.size()); ++n)
        {
            const std::size_t i = static_cast<std::size_t>(n);
            const rvec &e = uav ? wm.e_terr[i] : wm.e_sat[i];
            const rvec &T = uav ? wm.t_terr[i] : wm.t_sat[i];
            for (Eigen::Index k = 0; k < e.size(); ++k)
            {
                TrajectorySurrogate ts = cascade_constant(s, dep, ch[i], st, p, n, static_cast<int>(k));
                ts.interference = e(k) * T(k);
                table[i].push_back(ts);
            }
        }
        return table;
    }

    double surrogate_objective(const Path &path, const SurrogateTable &table)
    {
        double acc = 0.0;
        for (std::size_t n = 0; n < table.size(); ++n)
            for (const TrajectorySurrogate &ts : table[n])
            {
                if (!ts.enabled)
                    continue;
                const double p = std::max(power_surrogate(path[n], ts), kPowerFloor);
                acc += std::log2(1.0 + p / ts.interference);
            }
        return acc / static_cast<double>(table.size());
    }

    std::vector<Vec3> surrogate_gradient(const Path &path, const SurrogateTable &table)
    {
        std::vector<Vec3> g(table.size(), Vec3::Zero());
        const double scale = 1.0 / (std::numbers::ln2 * static_cast<double>(table.size()));
        for (std::size_t n = 0; n < table.size(); ++n)
            for (const TrajectorySurrogate &ts : table[n])
            {
                if (!ts.enabled)
                    continue;
                const AffineForm f = ts.power_form();
                const double p = f(path[n]);
                if (p <= kPowerFloor)
                    continue;
                g[n] += scale * f.coef / (ts.interference + p);
            }
        return g;
    }

    Path project_path(const Path &path, const PathLimits &lim, int sweeps)
    {
        const std::size_t N = path.size();
        if (N == 0)
            throw ConfigError("project_path: empty path");
        if (check_path(straight_path(lim, static_cast<int>(N)), lim).size() != 0)
            throw NumericalFault("project_path: endpoints infeasible");
        if (check_path(path, lim, 0.0).empty())
            return path;
        Path q = path;
        for (std::size_t n = 0; n < N; ++n)
            q[n](2) = std::clamp(q[n](2), lim.z_min, lim.z_max);
        q[0] = lim.init;
        q[N - 1] = lim.final;
        for (int s = 0; s < sweeps; ++s)
        {
            for (std::size_t n = 1; n + 1 < N; ++n)
                pull(q[n], q[n - 1], lim.max_step);
            for (std::size_t n = N - 2; n >= 1 && n + 1 < N; --n)
                pull(q[n], q[n + 1], lim.max_step);
            if (check_path(q, lim, 0.0).empty())
                return q;
        }
        // Convex feasible set: blend toward the straight line until feasible.
        const Path line = straight_path(lim, static_cast<int>(N));
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 60; ++it)
        {
            const double mid = 0.5 * (lo + hi);
            if (check_path(blend(q, line, mid), lim, 0.0).empty())
                hi = mid;
            else
                lo = mid;
        }
        return blend(q, line, hi);
    }

    SubproblemResult solve_trajectory_subproblem(const Path &path_t, const SurrogateTable &table,
                                                 const PathLimits &lim, int step_iters)
    {
        SubproblemResult res;
        res.path = path_t;
        res.value_start = res.value_end = surrogate_objective(path_t, table);
        const std::size_t N = path_t.size();
        if (N < 3)
            return res;
        for (int it = 0; it < step_iters; ++it)
        {
            const std::vector<Vec3> g = surrogate_gradient(res.path, table);
            double gmax = 0.0;
            for (std::size_t n = 1; n + 1 < N; ++n)
                gmax = std::max(gmax, g[n].norm());
            if (!(gmax > 0.0))
                break;
            double step = lim.max_step / gmax;
            bool moved = false;
            for (int bt = 0; bt < 40; ++bt, step *= 0.5)
            {
                Path cand = res.path;
                for (std::size_t n = 1; n + 1 < N; ++n)
                    cand[n] += step * g[n];
                cand = project_path(cand, lim);
                const double v = surrogate_objective(cand, table);
                if (v > res.value_end)
                {
                    res.path = cand;
                    res.value_end = v;
                    moved = true;
                    break;
                }
            }
            res.iterations = it + 1;
            if (!moved)
                break;
        }
        return res;
    }

    TrajectoryResult optimize_trajectories(const Scenario &s, const Deployment &dep, const FadingRealization &real,
                                           const DecodingPlan &plan, NetworkState &st, std::vector<ChannelSet> &ch,
                                           const TrajectoryOptions &opt)
    {
        TrajectoryResult res;
        res.rate = evaluate_rates(s, ch, st, plan).average;
        if (!opt.move_uav && !opt.move_hap)
            return res;
        const PathLimits lim_u = path_limits(s, dep, Platform::uav);
        const PathLimits lim_h = path_limits(s, dep, Platform::hap);
        for (int it = 0; it < opt.sca_iters; ++it)
        {
            TrajectoryStep step;
            step.rate_before = res.rate;
            Path target_u = st.uav_path, target_h = st.hap_path;
            for (Platform p : {Platform::uav, Platform::hap})
            {
                if ((p == Platform::uav && !opt.move_uav) || (p == Platform::hap && !opt.move_hap))
                    continue;
                const SurrogateTable table = build_surrogates(s, dep, ch, st, plan, p);
                for (std::size_t n = 0; n < table.size(); ++n)
                    for (const TrajectorySurrogate &ts : table[n])
                        if (ts.enabled)
                            step.tightness = std::max(step.tightness, std::abs(power_surrogate(ts.q_t, ts) - ts.p_cur) /
                                                                          ts.p_cur);
                const SubproblemResult sub =
                    solve_trajectory_subproblem(st.path(p), table, p == Platform::uav ? lim_u : lim_h, opt.step_iters);
                (p == Platform::uav ? target_u : target_h) = sub.path;
            }
            if (target_u == st.uav_path && target_h == st.hap_path)
            {
                step.rate_after = res.rate;
                res.steps.push_back(step);
                break;
            }
            double t = 1.0;
            for (int h = 0; h <= opt.max_halvings; ++h, t *= 0.5)
            {
                NetworkState cand = st;
                cand.uav_path = h == 0 ? target_u : blend(st.uav_path, target_u, t);
                cand.hap_path = h == 0 ? target_h : blend(st.hap_path, target_h, t);
                std::vector<ChannelSet> cch = assemble_frame(s, dep, cand.uav_path, cand.hap_path, real);
                if (opt.aris_guard && !aris_feasible(s, cch, cand))
                    continue;
                const double r = evaluate_rates(s, cch, cand, plan).average;
                if (r >= res.rate)
                {
                    st = std::move(cand);
                    ch = std::move(cch);
                    res.rate = r;
                    step.accepted = true;
                    step.halvings = h;
                    break;
                }
            }
            step.rate_after = res.rate;
            res.steps.push_back(step);
            if (!step.accepted)
                break;
        }
        return res;
    }
}
