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

#include "itntn/aris.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace itntn
{
    double ArisQuadratic::f(const cvec &phi) const
    {
        return (phi.adjoint() * Q * phi).value().real() - 2.0 * (phi.adjoint() * q).value().real();
    }

    ArisQuadratic build_quadratic(const Scenario &s, const ChannelSet &ch, const NetworkState &st,
                                  const WmmseState &wm, const DecodingPlan &plan, Platform p, int slot)
    {
        const std::size_t n = static_cast<std::size_t>(slot);
        const bool uav = p == Platform::uav;
        const AerialSpec &spec = s.aerial(p);
        const Tier own_tier = uav ? Tier::terrestrial : Tier::satellite;

        const cmat &bs_ris = uav ? ch.tbs_uav : ch.sat_hap;
        const cmat &ris_own = uav ? ch.uav_terr : ch.hap_sat;   // columns per own-tier user
        const cmat &ris_other = uav ? ch.uav_sat : ch.hap_terr; // columns per other-tier user
        const cmat &direct_own = uav ? ch.tbs_terr : ch.sat_sat;
        const cmat &direct_other = uav ? ch.tbs_sat : ch.sat_terr;
        const cmat &beams = uav ? st.beams_tbs[n] : st.beams_sat[n];
        const cvec &u = uav ? wm.u_terr[n] : wm.u_sat[n];
        const rvec &w = uav ? wm.w_terr[n] : wm.w_sat[n];
        const cvec &ux = uav ? wm.u_sat[n] : wm.u_terr[n];
        const rvec &wx = uav ? wm.w_sat[n] : wm.w_terr[n];

        if (bs_ris.cols() != beams.rows() || ris_own.rows() != bs_ris.rows())
            throw ConfigError("build_quadratic: shape mismatch");

        const Eigen::Index N = bs_ris.rows();
        const cmat incident = bs_ris * beams; // column m: H v_m
        const double sigma2 = plan.aris_noise ? spec.noise : 0.0;

        ArisQuadratic quad;
        quad.Q = cmat::Zero(N, N);
        quad.q = cvec::Zero(N);
        quad.budget = spec.power_budget;
        quad.rho_max = spec.rho_max;
        quad.upsilon = incident.rowwise().squaredNorm() + rvec::Constant(N, spec.noise);

        for (Eigen::Index k = 0; k < ris_own.cols(); ++k)
        {
            const double a = w(k) * std::norm(u(k));
            const cvec h = ris_own.col(k);
            for (Eigen::Index m = 0; m < beams.cols(); ++m)
            {
                if (m != k && !plan.interferes(own_tier, slot, static_cast<int>(m), static_cast<int>(k)))
                    continue;
                const cvec g = h.cwiseProduct(incident.col(m).conjugate());
                const cplx c = (direct_own.row(k) * beams.col(m)).value();
                quad.Q += a * g * g.adjoint();
                quad.q -= a * c * g;
                if (m == k)
                    quad.q += w(k) * u(k) * g;
            }
            quad.Q.diagonal() += (a * sigma2 * h.cwiseAbs2()).cast<cplx>();
        }
        for (Eigen::Index l = 0; l < ris_other.cols(); ++l)
        {
            const double a = wx(l) * std::norm(ux(l));
            const cvec h = ris_other.col(l);
            for (Eigen::Index m = 0; m < beams.cols(); ++m)
            {
                const cvec g = h.cwiseProduct(incident.col(m).conjugate());
                const cplx c = (direct_other.row(l) * beams.col(m)).value();
                quad.Q += a * g * g.adjoint();
                quad.q -= a * c * g;
            }
        }
        quad.Q = 0.5 * (quad.Q + quad.Q.adjoint()).eval();
        return quad;
    }

    cvec compose(const rvec &rho, const cvec &theta)
    {
        return (rho.cwiseSqrt().cast<cplx>().array() * theta.array()).matrix();
    }

    RcgResult optimize_phases(const ArisQuadratic &quad, const rvec &rho, const cvec &theta0, const RcgOptions &opt)
    {
        if ((rho.array() <= 0.0).all())
        {
            RcgResult r;
            r.theta = theta0;
            r.trace.push_back(0.0);
            r.converged = true;
            return r;
        }
        const rvec sq = rho.cwiseSqrt();
        QuadraticObjective obj;
        obj.Q = sq.cast<cplx>().asDiagonal() * quad.Q * sq.cast<cplx>().asDiagonal();
        obj.Q = 0.5 * (obj.Q + obj.Q.adjoint()).eval();
        obj.q = sq.cast<cplx>().cwiseProduct(quad.q);
        return rcg_minimize(obj, theta0, opt);
    }

    AmpGradients amp_gradients(const ArisQuadratic &quad, const cvec &theta, const rvec &rho)
    {
        const rvec r = rho.cwiseMax(kRhoFloor);
        const cvec vt = compose(r, theta);
        const cvec qv = quad.Q * vt;
        const cvec yv = (quad.upsilon.cast<cplx>().array() * vt.array()).matrix();
        AmpGradients out;
        out.grad_f.resize(r.size());
        out.grad_g.resize(r.size());
        for (Eigen::Index i = 0; i < r.size(); ++i)
        {
            const double inv = 1.0 / std::sqrt(r(i));
            out.grad_f(i) = inv * (std::conj(theta(i)) * (qv(i) - quad.q(i))).real();
            out.grad_g(i) = inv * (std::conj(theta(i)) * yv(i)).real();
        }
        out.f = quad.f(vt);
        out.g = quad.g(r);
        return out;
    }

    AmpLp solve_amp_lp(const rvec &grad_f, const rvec &grad_g, const rvec &rho_t, double rho_max, double budget,
                       double g_t)
    {
        const Eigen::Index N = grad_f.size();
        AmpLp out;
        out.rho = rvec::Zero(N);
        // Remaining room of the affine constraint at rho = 0.
        double room = budget - g_t + grad_g.dot(rho_t);
        if (room < 0.0)
        {
            out.infeasible = true;
            return out;
        }
        std::vector<Eigen::Index> idx;
        for (Eigen::Index i = 0; i < N; ++i)
            if (grad_f(i) < 0.0)
                idx.push_back(i);
        std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
            return -grad_f(a) * grad_g(b) > -grad_f(b) * grad_g(a);
        });
        for (Eigen::Index i : idx)
        {
            if (grad_g(i) <= 0.0)
            {
                out.rho(i) = rho_max;
                continue;
            }
            const double take = std::min(rho_max, room / grad_g(i));
            out.rho(i) = std::max(0.0, take);
            room -= out.rho(i) * grad_g(i);
            if (room <= 0.0)
                break;
        }
        return out;
    }

    AmpResult optimize_amplitudes(const ArisQuadratic &quad, const cvec &theta, const rvec &rho0,
                                  const AmpOptions &opt)
    {
        AmpResult res;
        res.rho = rho0;
        double f = quad.f(compose(res.rho, theta));
        res.trace.push_back(f);
        for (int it = 0; it < opt.max_iter; ++it)
        {
            const AmpGradients gr = amp_gradients(quad, theta, res.rho);
            const AmpLp lp = solve_amp_lp(gr.grad_f, gr.grad_g, res.rho.cwiseMax(kRhoFloor), quad.rho_max,
                                          quad.budget, gr.g);
            const rvec target = lp.rho;
            bool accepted = false;
            double f_new = f;
            for (double alpha = 1.0; alpha >= opt.min_alpha; alpha *= 0.5)
            {
                const rvec cand = (res.rho + alpha * (target - res.rho)).cwiseMax(0.0).cwiseMin(quad.rho_max);
                const double fc = quad.f(compose(cand, theta));
                if (fc <= f && quad.g(cand) <= quad.budget)
                {
                    if (fc == f && cand == res.rho)
                        break;
                    res.rho = cand;
                    f_new = fc;
                    accepted = true;
                    break;
                }
            }
            res.iterations = it + 1;
            if (!accepted)
            {
                res.stagnated = true;
                break;
            }
            res.trace.push_back(f_new);
            const double change = std::abs(f - f_new);
            f = f_new;
            if (change <= opt.tol * (1.0 + std::abs(f)))
                break;
        }
        return res;
    }

    rvec phases_of(const cvec &theta)
    {
        rvec out(theta.size());
        for (Eigen::Index r = 0; r < theta.size(); ++r)
        {
            double a = std::arg(theta(r));
            if (a < 0.0)
                a += 2.0 * std::numbers::pi;
            if (a >= 2.0 * std::numbers::pi)
                a = 0.0;
            out(r) = a;
        }
        return out;
    }

    ArisResult optimize_aris(const ArisQuadratic &quad, const ArisVector &start, const ArisOptions &opt)
    {
        ArisResult res;
        res.coeffs = start;
        cvec theta = start.unit();
        rvec rho = start.rho;
        double f = quad.f(compose(rho, theta));
        res.trace.push_back(f);
        if (!opt.phases && !opt.amplitudes)
            return res;
        for (int t = 0; t < opt.outer_iter; ++t)
        {
            cvec th_new = theta;
            rvec rho_new = rho;
            if (opt.phases)
                th_new = optimize_phases(quad, rho_new, th_new, opt.rcg).theta;
            if (opt.amplitudes)
                rho_new = optimize_amplitudes(quad, th_new, rho_new, opt.amp).rho;
            // Round-trip through stored angles so the reported value is the stored one.
            ArisVector cand{phases_of(th_new), rho_new};
            const double fn = quad.f(cand.coeffs());
            if (!(fn <= f))
                break;
            const double change = f - fn;
            res.coeffs = cand;
            theta = cand.unit();
            rho = rho_new;
            f = fn;
            res.trace.push_back(f);
            if (change <= opt.outer_tol * (1.0 + std::abs(f)))
                break;
        }
        return res;
    }

    ArisResult optimize_aris(const Scenario &s, const ChannelSet &ch, const NetworkState &st, const WmmseState &wm,
                             const DecodingPlan &plan, Platform p, int slot, const ArisOptions &opt)
    {
        const ArisQuadratic quad = build_quadratic(s, ch, st, wm, plan, p, slot);
        return optimize_aris(quad, st.aris(p, slot), opt);
    }
}
