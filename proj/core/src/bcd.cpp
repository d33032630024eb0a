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

#include "itntn/bcd.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

namespace itntn
{
    namespace
    {
        using Clock = std::chrono::steady_clock;

        double seconds_since(Clock::time_point t0)
        {
            return std::chrono::duration<double>(Clock::now() - t0).count();
        }

        IterationRecord snapshot(int iter, const RateReport &rep, const NetworkState &st)
        {
            IterationRecord r;
            r.iter = iter;
            r.rate = rep.average;
            r.terr_rate = rep.terr_average;
            r.sat_rate = rep.sat_average;
            r.report = rep;
            r.uav_path = st.uav_path;
            r.hap_path = st.hap_path;
            return r;
        }

        double slot_sum(const Scenario &s, const ChannelSet &ch, const NetworkState &st, const DecodingPlan &plan,
                        int n)
        {
            const std::size_t i = static_cast<std::size_t>(n);
            const SlotLinks lk = slot_links(s, ch, st, n, plan.aris_noise);
            return slot_rates(lk, st.beams_tbs[i], st.beams_sat[i], plan, n).sum();
        }

        rvec wrap_phase(const rvec &x)
        {
            constexpr double two_pi = 2.0 * std::numbers::pi;
            return x.unaryExpr([](double a) {
                const double r = std::fmod(a, two_pi);
                return r < 0.0 ? r + two_pi : r;
            });
        }

        // Extrapolates the surface update old -> current of one slot while its
        // true sum-rate keeps rising and the surface constraints hold.
        void stretch_aris(const Scenario &s, const ChannelSet &ch, NetworkState &st, const DecodingPlan &plan,
                          Platform p, int n, const ArisVector &old, int max_stretch, bool active)
        {
            ArisVector &cur = st.aris(p, n);
            const rvec dth = (cur.theta - old.theta).unaryExpr([](double a) { return std::remainder(a, 2.0 * std::numbers::pi); });
            const rvec drho = cur.rho - old.rho;
            const AerialSpec &spec = s.aerial(p);
            double best = slot_sum(s, ch, st, plan, n);
            double t = 2.0;
            for (int k = 0; k < max_stretch; ++k, t *= 2.0)
            {
                ArisVector keep = cur;
                cur.theta = wrap_phase(old.theta + t * dth);
                cur.rho = (old.rho + t * drho).cwiseMax(0.0).cwiseMin(spec.rho_max);
                bool ok = !active || aris_output_power(s, ch, st, p, n) <= spec.power_budget;
                const double r = ok ? slot_sum(s, ch, st, plan, n) : 0.0;
                if (!ok || !(r > best))
                {
                    cur = std::move(keep);
                    break;
                }
                best = r;
            }
        }

        template <class F>
        void guarded(const char *block, F &&body)
        {
            try
            {
                body();
            }
            catch (const BlockFault &)
            {
                throw;
            }
            catch (const std::exception &e)
            {
                throw BlockFault(block, e.what());
            }
        }
    }

    const char *to_string(SchemeTag t)
    {
        switch (t)
        {
        case SchemeTag::proposed_active: return "proposed_active";
        case SchemeTag::passive_ris: return "passive_ris";
        case SchemeTag::random_ris: return "random_ris";
        case SchemeTag::no_ris: return "no_ris";
        case SchemeTag::fixed_trajectory: return "fixed_trajectory";
        case SchemeTag::sdma_active: return "sdma_active";
        }
        return "unknown";
    }

    Scheme Scheme::of(SchemeTag tag)
    {
        Scheme s;
        s.tag = tag;
        switch (tag)
        {
        case SchemeTag::proposed_active: break;
        case SchemeTag::passive_ris:
            s.mode = RisMode::passive;
            s.optimize_amplitudes = false;
            break;
        case SchemeTag::random_ris:
            s.mode = RisMode::passive;
            s.optimize_phases = false;
            s.optimize_amplitudes = false;
            break;
        case SchemeTag::no_ris:
            s.mode = RisMode::off;
            s.optimize_phases = false;
            s.optimize_amplitudes = false;
            s.move_paths = false;
            break;
        case SchemeTag::fixed_trajectory: s.move_paths = false; break;
        case SchemeTag::sdma_active: s.access = Access::sdma; break;
        }
        return s;
    }

    Scheme Scheme::parse(const std::string &name)
    {
        for (const Scheme &s : all())
            if (name == s.name())
                return s;
        throw ConfigError("unknown scheme '" + name + "'");
    }

    std::vector<Scheme> Scheme::all()
    {
        return {of(SchemeTag::proposed_active), of(SchemeTag::passive_ris), of(SchemeTag::random_ris),
                of(SchemeTag::no_ris), of(SchemeTag::fixed_trajectory), of(SchemeTag::sdma_active)};
    }

    const char *Scheme::name() const { return to_string(tag); }

    std::vector<double> RunResult::trace() const
    {
        std::vector<double> t;
        for (const IterationRecord &r : iterations)
            t.push_back(r.rate);
        return t;
    }

    RunResult bcd_solve(const Scenario &s, const Scheme &scheme, std::uint64_t seed, const BcdOptions &opt)
    {
        RunResult res;
        res.scheme = scheme.tag;
        res.seed = seed;
        res.deployment = deploy_users(s, seed);
        const FadingRealization real = FadingRealization::generate(s, seed);
        res.initial_paths = init_paths(s, res.deployment);
        std::vector<ChannelSet> ch =
            assemble_frame(s, res.deployment, res.initial_paths.uav, res.initial_paths.hap, real);
        NetworkState st = init_state(s, ch, res.initial_paths, seed, scheme.mode);
        const bool active = scheme.mode == RisMode::active;
        res.plan = plan_decoding(s, ch, st, scheme.access, active);
        const DecodingPlan &plan = res.plan;

        RateReport rep = evaluate_rates(s, ch, st, plan);
        res.iterations.push_back(snapshot(0, rep, st));
        res.min_block_gain = std::numeric_limits<double>::infinity();
        double rate = rep.average;

        // Keeps a block's result only if the true objective did not drop.
        std::array<double, 4> gains{};
        auto credit = [&](int block, double r) {
            gains[static_cast<std::size_t>(block)] = r - rate;
            res.min_block_gain = std::min(res.min_block_gain, r - rate);
            rate = r;
        };
        auto settle = [&](int block, NetworkState &backup) {
            const double r = evaluate_rates(s, ch, st, plan).average;
            if (r < rate)
            {
                st = std::move(backup);
                credit(block, rate);
                return;
            }
            credit(block, r);
        };

        WmmseOptions wopt = opt.wmmse;
        wopt.aris_guard = active;
        ArisOptions aopt = opt.aris;
        aopt.phases = scheme.optimize_phases;
        aopt.amplitudes = scheme.optimize_amplitudes && active;
        TrajectoryOptions topt = opt.trajectory;
        topt.move_uav = topt.move_uav && scheme.move_paths;
        topt.move_hap = topt.move_hap && scheme.move_paths;
        topt.aris_guard = active;

        for (int t = 1; t <= opt.t_max; ++t)
        {
            const double start_rate = rate;
            gains.fill(0.0);
            auto t0 = Clock::now();
            guarded("wmmse", [&] {
                NetworkState backup = st;
                wmmse_solve(s, ch, st, plan, wopt);
                settle(0, backup);
            });
            res.wall.wmmse += seconds_since(t0);

            for (Platform p : {Platform::uav, Platform::hap})
            {
                if (!aopt.phases && !aopt.amplitudes)
                    break;
                t0 = Clock::now();
                guarded(p == Platform::uav ? "uav-aris" : "hap-aris", [&] {
                    NetworkState backup = st;
                    double before = rate;
                    for (int pass = 0; pass < std::max(1, opt.aris_passes); ++pass)
                    {
                        const WmmseState wm = wmmse_statistics(s, ch, st, plan);
                        for (int n = 0; n < s.n_slots; ++n)
                        {
                            const ArisQuadratic quad =
                                build_quadratic(s, ch[static_cast<std::size_t>(n)], st, wm, plan, p, n);
                            const ArisVector prior = st.aris(p, n);
                            const ArisResult ar = optimize_aris(quad, prior, aopt);
                            for (std::size_t i = 1; i < ar.trace.size(); ++i)
                                if (ar.trace[i] > ar.trace[i - 1])
                                    ++res.amp_violations;
                            st.aris(p, n) = ar.coeffs;
                            if (opt.aris_stretch && opt.wmmse.max_stretch > 0)
                                stretch_aris(s, ch[static_cast<std::size_t>(n)], st, plan, p, n, prior,
                                             opt.wmmse.max_stretch, active);
                        }
                        const double r = evaluate_rates(s, ch, st, plan).average;
                        if (r < before)
                        {
                            st = backup;
                            break;
                        }
                        backup = st;
                        const bool small = r - before < 0.1 * opt.eps;
                        before = r;
                        if (small)
                            break;
                    }
                    settle(p == Platform::uav ? 1 : 2, backup);
                });
                (p == Platform::uav ? res.wall.uav_aris : res.wall.hap_aris) += seconds_since(t0);
            }

            if (topt.move_uav || topt.move_hap)
            {
                t0 = Clock::now();
                guarded("trajectory", [&] {
                    const TrajectoryResult tr = optimize_trajectories(s, res.deployment, real, plan, st, ch, topt);
                    for (const TrajectoryStep &step : tr.steps)
                    {
                        res.max_tightness_gap = std::max(res.max_tightness_gap, step.tightness);
                        if (step.accepted && step.rate_after < step.rate_before)
                            ++res.amp_violations;
                    }
                    credit(3, tr.rate);
                });
                res.wall.trajectory += seconds_since(t0);
            }

            rep = evaluate_rates(s, ch, st, plan);
            res.iterations.push_back(snapshot(t, rep, st));
            res.iterations.back().block_gain = gains;
            if (std::abs(rate - start_rate) <= opt.eps)
            {
                res.converged = true;
                break;
            }
        }
        if (opt.t_max == 0)
            res.converged = true;
        if (!std::isfinite(res.min_block_gain))
            res.min_block_gain = 0.0;
        res.final_state = std::move(st);
        res.final_channels = std::move(ch);
        return res;
    }

    std::vector<RunResult> run_scheme_suite(const Scenario &s, const std::vector<Scheme> &schemes, std::uint64_t seed,
                                            const BcdOptions &opt)
    {
        std::vector<RunResult> out;
        out.reserve(schemes.size());
        for (const Scheme &sc : schemes)
            out.push_back(bcd_solve(s, sc, seed, opt));
        return out;
    }

    MonteCarloTable monte_carlo(const Scenario &s, const std::vector<Scheme> &schemes, int n_runs,
                                std::uint64_t base_seed, int workers, const BcdOptions &opt)
    {
        if (n_runs < 1)
            throw ConfigError("runs must be ≥1");
        if (schemes.empty())
            throw ConfigError("at least one scheme is required");
        MonteCarloTable table;
        const std::size_t jobs = static_cast<std::size_t>(n_runs) * schemes.size();
        table.runs.resize(jobs);
        for (std::size_t j = 0; j < jobs; ++j)
        {
            MonteCarloRun &r = table.runs[j];
            r.run = static_cast<int>(j / schemes.size());
            r.seed = base_seed + static_cast<std::uint64_t>(r.run);
            r.scheme = schemes[j % schemes.size()].tag;
        }

        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t j = next++; j < jobs; j = next++)
            {
                MonteCarloRun &r = table.runs[j];
                try
                {
                    r.result = bcd_solve(s, schemes[j % schemes.size()], r.seed, opt);
                }
                catch (const std::exception &e)
                {
                    r.failed = true;
                    r.error = e.what();
                }
            }
        };
        const int nw = std::max(1, std::min<int>(workers, static_cast<int>(jobs)));
        if (nw == 1)
            worker();
        else
        {
            std::vector<std::thread> pool;
            for (int w = 0; w < nw; ++w)
                pool.emplace_back(worker);
            for (std::thread &t : pool)
                t.join();
        }

        for (std::size_t k = 0; k < schemes.size(); ++k)
        {
            SchemeAggregate a;
            a.scheme = schemes[k].tag;
            std::vector<double> finals;
            for (std::size_t j = k; j < jobs; j += schemes.size())
            {
                if (table.runs[j].failed)
                    ++a.n_failed;
                else
                    finals.push_back(table.runs[j].result.final_rate());
            }
            a.n_runs = static_cast<int>(finals.size());
            if (!finals.empty())
            {
                double sum = 0.0;
                for (double f : finals)
                    sum += f;
                a.mean = sum / static_cast<double>(finals.size());
                if (finals.size() > 1)
                {
                    double ss = 0.0;
                    for (double f : finals)
                        ss += (f - a.mean) * (f - a.mean);
                    const double var = ss / static_cast<double>(finals.size() - 1);
                    a.std_error = std::sqrt(var / static_cast<double>(finals.size()));
                }
            }
            else
            {
                a.mean = std::numeric_limits<double>::quiet_NaN();
                a.std_error = std::numeric_limits<double>::quiet_NaN();
            }
            table.aggregates.push_back(a);
        }
        return table;
    }
}
