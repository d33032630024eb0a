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

#include "itntn/wmmse.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace itntn
{
    namespace
    {
        constexpr int kMaxDoublings = 60;
        constexpr int kBisections = 60;
        constexpr double kNullRel = 1e-12;

        // Eigen-coordinates of one user's system.
        struct Spectral
        {
            cmat U;
            rvec d;
            cvec c; // U^H b
            double floor;
        };

        std::vector<Spectral> decompose(const std::vector<cmat> &A, const cmat &B)
        {
            std::vector<Spectral> out;
            out.reserve(A.size());
            for (std::size_t m = 0; m < A.size(); ++m)
            {
                const cmat H = 0.5 * (A[m] + A[m].adjoint());
                Eigen::SelfAdjointEigenSolver<cmat> es(H);
                if (es.info() != Eigen::Success)
                    throw NumericalFault("eigen-decomposition of the beamforming matrix failed");
                Spectral sp;
                sp.U = es.eigenvectors();
                sp.d = es.eigenvalues().cwiseMax(0.0);
                sp.c = sp.U.adjoint() * B.col(static_cast<Eigen::Index>(m));
                sp.floor = kNullRel * std::max(sp.d.maxCoeff(), 0.0);
                out.push_back(std::move(sp));
            }
            return out;
        }

        double spectral_power(const std::vector<Spectral> &sys, double lambda)
        {
            double p = 0.0;
            for (const Spectral &sp : sys)
                for (Eigen::Index i = 0; i < sp.d.size(); ++i)
                {
                    const double den = sp.d(i) + lambda;
                    if (lambda == 0.0 && sp.d(i) <= sp.floor)
                        continue;
                    p += std::norm(sp.c(i)) / (den * den);
                }
            return p;
        }

        cmat spectral_beams(const std::vector<Spectral> &sys, double lambda, Eigen::Index rows)
        {
            cmat V = cmat::Zero(rows, static_cast<Eigen::Index>(sys.size()));
            for (std::size_t m = 0; m < sys.size(); ++m)
            {
                const Spectral &sp = sys[m];
                cvec y = cvec::Zero(sp.d.size());
                for (Eigen::Index i = 0; i < sp.d.size(); ++i)
                {
                    if (lambda == 0.0 && sp.d(i) <= sp.floor)
                        continue;
                    y(i) = sp.c(i) / (sp.d(i) + lambda);
                }
                V.col(static_cast<Eigen::Index>(m)) = sp.U * y;
            }
            return V;
        }

        const cmat &own_links(const SlotLinks &lk, Tier t) { return t == Tier::terrestrial ? lk.terr_own : lk.sat_own; }
        const cmat &cross_into(const SlotLinks &lk, Tier t)
        {
            // channels from transmitter t toward the other tier's users
            return t == Tier::terrestrial ? lk.sat_cross : lk.terr_cross;
        }
    }

    void WmmseState::resize(int n_slots, int K, int L)
    {
        const std::size_t N = static_cast<std::size_t>(n_slots);
        u_terr.assign(N, cvec::Zero(K));
        u_sat.assign(N, cvec::Zero(L));
        w_terr.assign(N, rvec::Ones(K));
        w_sat.assign(N, rvec::Ones(L));
        e_terr.assign(N, rvec::Ones(K));
        e_sat.assign(N, rvec::Ones(L));
        t_terr.assign(N, rvec::Zero(K));
        t_sat.assign(N, rvec::Zero(L));
        lambda_tbs.assign(N, 0.0);
        lambda_sat.assign(N, 0.0);
    }

    namespace
    {
        // Desired power and everything else in T for one receiver.
        std::pair<double, double> t_parts(const SlotLinks &lk, const cmat &beams_tbs, const cmat &beams_sat,
                                          const DecodingPlan &plan, int slot, Tier tier, int user)
        {
            const bool terr = tier == Tier::terrestrial;
            const cmat &own = terr ? lk.terr_own : lk.sat_own;
            const cmat &cross = terr ? lk.terr_cross : lk.sat_cross;
            const cmat &ob = terr ? beams_tbs : beams_sat;
            const cmat &xb = terr ? beams_sat : beams_tbs;
            const auto h = own.row(user);
            const double desired = std::norm((h * ob.col(user)).value());
            double rest =
                (terr ? lk.terr_aris_noise(user) : lk.sat_aris_noise(user)) + (terr ? lk.noise_terr : lk.noise_sat);
            for (Eigen::Index m = 0; m < ob.cols(); ++m)
                if (plan.interferes(tier, slot, static_cast<int>(m), user))
                    rest += std::norm((h * ob.col(m)).value());
            const auto hx = cross.row(user);
            for (Eigen::Index j = 0; j < xb.cols(); ++j)
                rest += std::norm((hx * xb.col(j)).value());
            return {desired, rest};
        }
    }

    double interference_T(const SlotLinks &lk, const cmat &beams_tbs, const cmat &beams_sat,
                          const DecodingPlan &plan, int slot, Tier tier, int user)
    {
        const auto [desired, rest] = t_parts(lk, beams_tbs, beams_sat, plan, slot, tier, user);
        return desired + rest;
    }

    double mse(cplx u, double T, cplx hv) { return std::norm(u) * T - 2.0 * (std::conj(u) * hv).real() + 1.0; }

    void update_equalizers(const SlotLinks &lk, const cmat &beams_tbs, const cmat &beams_sat,
                           const DecodingPlan &plan, int slot, WmmseState &wm)
    {
        const std::size_t n = static_cast<std::size_t>(slot);
        for (Tier t : {Tier::terrestrial, Tier::satellite})
        {
            const bool terr = t == Tier::terrestrial;
            const cmat &own = own_links(lk, t);
            const cmat &ob = terr ? beams_tbs : beams_sat;
            cvec &u = (terr ? wm.u_terr : wm.u_sat)[n];
            rvec &e = (terr ? wm.e_terr : wm.e_sat)[n];
            rvec &T = (terr ? wm.t_terr : wm.t_sat)[n];
            for (Eigen::Index k = 0; k < own.rows(); ++k)
            {
                const cplx hv = (own.row(k) * ob.col(k)).value();
                const auto [desired, rest] = t_parts(lk, beams_tbs, beams_sat, plan, slot, t, static_cast<int>(k));
                T(k) = desired + rest;
                u(k) = hv / T(k);
                // mse(u, T, hv) at this u, without cancellation
                e(k) = rest / T(k);
            }
        }
    }

    void update_weights(WmmseState &wm, int slot)
    {
        const std::size_t n = static_cast<std::size_t>(slot);
        for (auto *pair : {&wm.e_terr, &wm.e_sat})
        {
            const rvec &e = (*pair)[n];
            if ((e.array() <= 0.0).any() || !e.allFinite())
                throw NumericalFault("non-positive MSE in weight update");
        }
        wm.w_terr[n] = wm.e_terr[n].cwiseInverse();
        wm.w_sat[n] = wm.e_sat[n].cwiseInverse();
    }

    WmmseState wmmse_statistics(const Scenario &s, const std::vector<ChannelSet> &ch, const NetworkState &st,
                                const DecodingPlan &plan)
    {
        WmmseState wm;
        const int N = static_cast<int>(ch.size());
        wm.resize(N, s.n_terrestrial, s.n_satellite);
        double obj = 0.0;
        for (int n = 0; n < N; ++n)
        {
            const std::size_t i = static_cast<std::size_t>(n);
            const SlotLinks lk = slot_links(s, ch[i], st, n, plan.aris_noise);
            update_equalizers(lk, st.beams_tbs[i], st.beams_sat[i], plan, n, wm);
            update_weights(wm, n);
            obj += (wm.w_terr[i].cwiseProduct(wm.e_terr[i]) - wm.w_terr[i].array().log().matrix()).sum();
            obj += (wm.w_sat[i].cwiseProduct(wm.e_sat[i]) - wm.w_sat[i].array().log().matrix()).sum();
        }
        wm.objective = obj / static_cast<double>(N);
        return wm;
    }

    double beam_power(const std::vector<cmat> &A, const cmat &B, double lambda)
    {
        return spectral_power(decompose(A, B), lambda);
    }

    BeamUpdate solve_beams(const std::vector<cmat> &A, const cmat &B, double power)
    {
        if (static_cast<Eigen::Index>(A.size()) != B.cols())
            throw ConfigError("solve_beams: one system per beam column required");
        if (!(power > 0.0))
            throw ConfigError("solve_beams: power budget must be > 0");
        const auto sys = decompose(A, B);
        BeamUpdate out;
        if (spectral_power(sys, 0.0) <= power)
        {
            out.beams = spectral_beams(sys, 0.0, B.rows());
            return out;
        }
        double lo = 0.0, hi = 1.0;
        int doublings = 0;
        while (spectral_power(sys, hi) > power)
        {
            lo = hi;
            hi *= 2.0;
            if (++doublings > kMaxDoublings)
                throw NumericalFault("beam power bisection bracket not found");
        }
        for (int it = 0; it < kBisections; ++it)
        {
            const double mid = 0.5 * (lo + hi);
            if (spectral_power(sys, mid) > power)
                lo = mid;
            else
                hi = mid;
        }
        out.lambda = hi;
        out.beams = spectral_beams(sys, hi, B.rows());
        return out;
    }

    void beam_system(const SlotLinks &lk, const DecodingPlan &plan, int slot, const WmmseState &wm, Tier tier,
                     std::vector<cmat> &A, cmat &B)
    {
        const std::size_t n = static_cast<std::size_t>(slot);
        const bool terr = tier == Tier::terrestrial;
        const cmat &own = own_links(lk, tier);
        const cmat &cross = cross_into(lk, tier);
        const cvec &u = (terr ? wm.u_terr : wm.u_sat)[n];
        const rvec &w = (terr ? wm.w_terr : wm.w_sat)[n];
        const cvec &ux = (terr ? wm.u_sat : wm.u_terr)[n];
        const rvec &wx = (terr ? wm.w_sat : wm.w_terr)[n];
        const Eigen::Index M = own.cols(), users = own.rows();

        cmat shared = cmat::Zero(M, M);
        for (Eigen::Index j = 0; j < cross.rows(); ++j)
            shared += wx(j) * std::norm(ux(j)) * cross.row(j).adjoint() * cross.row(j);

        A.assign(static_cast<std::size_t>(users), shared);
        B.resize(M, users);
        for (Eigen::Index m = 0; m < users; ++m)
        {
            cmat &Am = A[static_cast<std::size_t>(m)];
            for (Eigen::Index k = 0; k < users; ++k)
                if (k == m || plan.interferes(tier, slot, static_cast<int>(m), static_cast<int>(k)))
                    Am += w(k) * std::norm(u(k)) * own.row(k).adjoint() * own.row(k);
            B.col(m) = w(m) * u(m) * own.row(m).adjoint();
        }
    }

    BeamUpdate update_beams(const SlotLinks &lk, const DecodingPlan &plan, int slot, const WmmseState &wm,
                            Tier tier, double power)
    {
        std::vector<cmat> A;
        cmat B;
        beam_system(lk, plan, slot, wm, tier, A, B);
        return solve_beams(A, B, power);
    }

    double feasible_fraction(const cvec &phi, const cmat &bs_ris, const cmat &v0, const cmat &v1, double sigma2,
                             double budget)
    {
        const rvec w = phi.cwiseAbs2();
        const cmat x0 = bs_ris * v0;
        const cmat dx = bs_ris * (v1 - v0);
        double a = 0.0, b = 0.0, c = sigma2 * w.sum();
        for (Eigen::Index r = 0; r < x0.rows(); ++r)
        {
            a += w(r) * dx.row(r).squaredNorm();
            b += 2.0 * w(r) * (x0.row(r).conjugate().cwiseProduct(dx.row(r))).sum().real();
            c += w(r) * x0.row(r).squaredNorm();
        }
        auto value = [&](double t) { return (a * t + b) * t + c; };
        if (value(1.0) <= budget)
            return 1.0;
        if (c > budget)
            return 0.0;
        double t = 1.0;
        if (a > 0.0)
        {
            const double disc = std::max(0.0, b * b - 4.0 * a * (c - budget));
            t = std::clamp((-b + std::sqrt(disc)) / (2.0 * a), 0.0, 1.0);
        }
        else if (b > 0.0)
        {
            t = std::clamp((budget - c) / b, 0.0, 1.0);
        }
        while (t > 0.0 && value(t) > budget)
            t = t > 1e-300 ? t * (1.0 - 1e-9) - 1e-300 : 0.0;
        return std::max(t, 0.0);
    }

    namespace
    {
        void cap_power(cmat &v, double power)
        {
            const double p = v.squaredNorm();
            if (p > power)
                v *= std::sqrt(power / p);
        }

        // Extrapolates v_old + t (v_new - v_old) for t = 2, 4, ... and keeps the
        // best candidate that raises the slot sum-rate and stays feasible.
        void stretch_update(const Scenario &s, const ChannelSet &ch, const NetworkState &st, const SlotLinks &lk,
                            const DecodingPlan &plan, int n, cmat &vb, cmat &vs, const WmmseOptions &opt)
        {
            const std::size_t i = static_cast<std::size_t>(n);
            const cmat &ob = st.beams_tbs[i];
            const cmat &os = st.beams_sat[i];
            const cmat db = vb - ob;
            const cmat ds = vs - os;
            double best = slot_rates(lk, vb, vs, plan, n).sum();
            double t = 2.0;
            for (int k = 0; k < opt.max_stretch; ++k, t *= 2.0)
            {
                cmat cb = ob + t * db;
                cmat cs = os + t * ds;
                cap_power(cb, s.p_tbs);
                cap_power(cs, s.p_sat);
                if (opt.aris_guard &&
                    (aris_output_power(st.aris_uav[i].coeffs(), ch.tbs_uav, cb, s.uav.noise) > s.uav.power_budget ||
                     aris_output_power(st.aris_hap[i].coeffs(), ch.sat_hap, cs, s.hap.noise) > s.hap.power_budget))
                    break;
                const double r = slot_rates(lk, cb, cs, plan, n).sum();
                if (!(r > best))
                    break;
                best = r;
                vb = std::move(cb);
                vs = std::move(cs);
            }
        }
    }

    WmmseResult wmmse_solve(const Scenario &s, const std::vector<ChannelSet> &ch, NetworkState &st,
                            const DecodingPlan &plan, const WmmseOptions &opt)
    {
        const int N = static_cast<int>(ch.size());
        std::vector<SlotLinks> links;
        links.reserve(ch.size());
        for (int n = 0; n < N; ++n)
            links.push_back(slot_links(s, ch[static_cast<std::size_t>(n)], st, n, plan.aris_noise));

        WmmseResult res;
        res.state = wmmse_statistics(s, ch, st, plan);
        res.objective_trace.push_back(res.state.objective);
        for (int it = 0; it < opt.max_iter; ++it)
        {
            std::vector<double> lam_b(static_cast<std::size_t>(N)), lam_s(static_cast<std::size_t>(N));
            for (int n = 0; n < N; ++n)
            {
                const std::size_t i = static_cast<std::size_t>(n);
                BeamUpdate ub = update_beams(links[i], plan, n, res.state, Tier::terrestrial, s.p_tbs);
                BeamUpdate us = update_beams(links[i], plan, n, res.state, Tier::satellite, s.p_sat);
                if (opt.aris_guard)
                {
                    const double ab = feasible_fraction(st.aris_uav[i].coeffs(), ch[i].tbs_uav, st.beams_tbs[i],
                                                        ub.beams, s.uav.noise, s.uav.power_budget);
                    const double as = feasible_fraction(st.aris_hap[i].coeffs(), ch[i].sat_hap, st.beams_sat[i],
                                                        us.beams, s.hap.noise, s.hap.power_budget);
                    if (ab < 1.0)
                        ub.beams = st.beams_tbs[i] + ab * (ub.beams - st.beams_tbs[i]);
                    if (as < 1.0)
                        us.beams = st.beams_sat[i] + as * (us.beams - st.beams_sat[i]);
                }
                if (opt.max_stretch > 0)
                    stretch_update(s, ch[i], st, links[i], plan, n, ub.beams, us.beams, opt);
                st.beams_tbs[i] = ub.beams;
                st.beams_sat[i] = us.beams;
                lam_b[i] = ub.lambda;
                lam_s[i] = us.lambda;
            }
            const double prev = res.state.objective;
            res.state = wmmse_statistics(s, ch, st, plan);
            res.state.lambda_tbs = lam_b;
            res.state.lambda_sat = lam_s;
            res.objective_trace.push_back(res.state.objective);
            res.iterations = it + 1;
            if (std::abs(prev - res.state.objective) < opt.tol)
                break;
        }
        return res;
    }
}
