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

#include <doctest.h>

#include "fixtures.hpp"
#include "itntn/aris.hpp"

#include <cmath>
#include <numbers>

using namespace itntn;
using doctest::Approx;

namespace
{
    // Weighted MSE of every user in one slot at fixed equalizers and weights.
    double weighted_mse(const Scenario &s, const ChannelSet &ch, const NetworkState &st, const WmmseState &wm,
                        const DecodingPlan &plan, int n)
    {
        const SlotLinks lk = slot_links(s, ch, st, n, plan.aris_noise);
        const cmat &vb = st.beams_tbs[n];
        const cmat &vs = st.beams_sat[n];
        double acc = 0.0;
        for (int k = 0; k < s.n_terrestrial; ++k)
        {
            const double T = interference_T(lk, vb, vs, plan, n, Tier::terrestrial, k);
            const cplx hv = (lk.terr_own.row(k) * vb.col(k)).value();
            acc += wm.w_terr[n](k) * mse(wm.u_terr[n](k), T, hv);
        }
        for (int l = 0; l < s.n_satellite; ++l)
        {
            const double T = interference_T(lk, vb, vs, plan, n, Tier::satellite, l);
            const cplx hv = (lk.sat_own.row(l) * vs.col(l)).value();
            acc += wm.w_sat[n](l) * mse(wm.u_sat[n](l), T, hv);
        }
        return acc;
    }

    ArisQuadratic random_quadratic(int N, std::mt19937_64 &rng)
    {
        ArisQuadratic q;
        q.Q = fixtures::random_psd(N, rng);
        q.q = fixtures::random_cvec(N, rng) * 2.0;
        q.upsilon = rvec::Random(N).cwiseAbs() + rvec::Constant(N, 0.1);
        q.rho_max = 4.0;
        q.budget = 0.5 * q.upsilon.sum() * q.rho_max;
        return q;
    }
}

TEST_CASE("quadratic matches the weighted MSE up to a constant")
{
    const Scenario s = fixtures::desk();
    std::mt19937_64 rng(31);
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
    {
        const auto in = fixtures::make_instance(s, seed);
        const WmmseState wm = wmmse_statistics(s, in.ch, in.st, in.plan);
        for (Platform p : {Platform::uav, Platform::hap})
            for (int n : {0, 3})
            {
                const ArisQuadratic quad = build_quadratic(s, in.ch[n], in.st, wm, in.plan, p, n);
                const Eigen::SelfAdjointEigenSolver<cmat> eig(quad.Q);
                CHECK(eig.eigenvalues().minCoeff() >= -1e-9 * std::max(1e-300, eig.eigenvalues().maxCoeff()));
                CHECK((quad.upsilon.array() >= s.aerial(p).noise).all());

                NetworkState a = in.st, b = in.st;
                const int N = s.aerial(p).elements();
                a.aris(p, n) = ArisVector{rvec::Random(N).cwiseAbs() * 3.0, rvec::Random(N).cwiseAbs() * 2.0};
                b.aris(p, n) = ArisVector{rvec::Random(N).cwiseAbs() * 3.0, rvec::Random(N).cwiseAbs() * 2.0};
                const double dq = quad.f(a.aris(p, n).coeffs()) - quad.f(b.aris(p, n).coeffs());
                const double dm = weighted_mse(s, in.ch[n], a, wm, in.plan, n) -
                                  weighted_mse(s, in.ch[n], b, wm, in.plan, n);
                const double scale = std::max(std::abs(weighted_mse(s, in.ch[n], a, wm, in.plan, n)), 1.0);
                CHECK(std::abs(dq - dm) <= 1e-9 * scale);
            }
    }
    (void)rng;
}

TEST_CASE("single-element quadratic by hand")
{
    Scenario s = fixtures::desk();
    s.n_terrestrial = 1;
    s.n_satellite = 1;
    s.uav.nx = s.uav.ny = 1;
    s.uav.noise = 0.3;

    const cplx h(0.4, -0.7), H(1.2, 0.5), v(0.9, 0.2), d(0.1, 0.6);
    ChannelSet ch;
    ch.tbs_uav = cmat::Constant(1, 1, H);
    ch.uav_terr = cmat::Constant(1, 1, h);
    ch.tbs_terr = cmat::Constant(1, 1, d);
    ch.uav_sat = cmat::Zero(1, 1);
    ch.tbs_sat = cmat::Zero(1, 1);

    NetworkState st;
    st.beams_tbs = {cmat::Constant(1, 1, v)};
    st.beams_sat = {cmat::Zero(1, 1)};
    DecodingPlan plan;
    plan.terr_rank = {{0}};
    plan.sat_rank = {{0}};
    WmmseState wm;
    wm.resize(1, 1, 1);
    const cplx u(0.3, 0.8);
    const double w = 2.5;
    wm.u_terr[0](0) = u;
    wm.w_terr[0](0) = w;
    wm.w_sat[0](0) = 0.0;

    const ArisQuadratic q = build_quadratic(s, ch, st, wm, plan, Platform::uav, 0);
    const double sig = s.uav.noise;
    const double hv2 = std::norm(H * v);
    CHECK(q.Q(0, 0).real() == Approx(w * std::norm(u) * (std::norm(h) * hv2 + sig * std::norm(h))).epsilon(1e-13));
    const cplx expect_q = -w * std::norm(u) * (d * v) * h * std::conj(H * v) + w * u * h * std::conj(H * v);
    CHECK(std::abs(q.q(0) - expect_q) < 1e-13);
    CHECK(q.upsilon(0) == Approx(hv2 + sig).epsilon(1e-14));

    SUBCASE("beam-free reduction")
    {
        st.beams_tbs = {cmat::Zero(1, 1)};
        const ArisQuadratic z = build_quadratic(s, ch, st, wm, plan, Platform::uav, 0);
        CHECK(z.Q(0, 0).real() == Approx(w * std::norm(u) * sig * std::norm(h)).epsilon(1e-14));
        CHECK(std::abs(z.q(0)) == 0.0);
        CHECK(z.upsilon(0) == Approx(sig));
    }
    SUBCASE("shape mismatch")
    {
        st.beams_tbs = {cmat::Zero(2, 1)};
        CHECK_THROWS_AS(build_quadratic(s, ch, st, wm, plan, Platform::uav, 0), ConfigError);
    }
}

TEST_CASE("phase stage")
{
    std::mt19937_64 rng(2);
    const ArisQuadratic quad = random_quadratic(3, rng);
    const cvec th0 = fixtures::random_unit(3, rng);
    CHECK(optimize_phases(quad, rvec::Zero(3), th0).theta == th0);

    ArisQuadratic one;
    one.Q = cmat::Zero(1, 1);
    one.q = (cvec(1) << cplx(-0.3, 0.4)).finished();
    const RcgResult r = optimize_phases(one, rvec::Constant(1, 2.0), fixtures::random_unit(1, rng));
    CHECK(std::abs(std::arg(r.theta(0)) - std::arg(one.q(0))) < 1e-4);

    // The phase problem is non-convex, so the check is local: no point of a
    // 0.1 degree grid within 3 degrees of the returned phases does better.
    for (int t = 0; t < 10; ++t)
    {
        const ArisQuadratic q2 = random_quadratic(2, rng);
        const rvec rho = (rvec(2) << 1.5, 0.7).finished();
        const cvec start = fixtures::random_unit(2, rng);
        const RcgResult res = optimize_phases(q2, rho, start);
        const double f = q2.f(compose(rho, res.theta));
        CHECK(f <= q2.f(compose(rho, start)));
        double best = std::numeric_limits<double>::infinity();
        for (int a = -30; a <= 30; ++a)
            for (int b = -30; b <= 30; ++b)
            {
                const double da = a * std::numbers::pi / 1800, db = b * std::numbers::pi / 1800;
                const cvec th = (cvec(2) << res.theta(0) * std::polar(1.0, da), res.theta(1) * std::polar(1.0, db))
                                    .finished();
                best = std::min(best, q2.f(compose(rho, th)));
            }
        CHECK(f <= best + 1e-9 * std::abs(best));
    }
}

TEST_CASE("amplitude gradients")
{
    std::mt19937_64 rng(3);
    SUBCASE("identity reductions")
    {
        ArisQuadratic q;
        q.Q = cmat::Identity(4, 4);
        q.q = cvec::Zero(4);
        q.upsilon = rvec::Ones(4);
        const rvec rho = (rvec(4) << 0.5, 1.0, 2.0, 3.5).finished();
        const AmpGradients g = amp_gradients(q, fixtures::random_unit(4, rng), rho);
        CHECK((g.grad_f.array() - 1.0).abs().maxCoeff() < 1e-14);
        CHECK((g.grad_g.array() - 1.0).abs().maxCoeff() < 1e-14);
        CHECK(g.f == Approx(rho.sum()));
        CHECK(g.g == Approx(rho.sum()));
    }
    SUBCASE("central differences")
    {
        for (int t = 0; t < 20; ++t)
        {
            const ArisQuadratic q = random_quadratic(6, rng);
            const cvec th = fixtures::random_unit(6, rng);
            const rvec rho = rvec::Random(6).cwiseAbs() * 3.0 + rvec::Constant(6, 0.2);
            const AmpGradients g = amp_gradients(q, th, rho);
            for (int i = 0; i < 6; ++i)
            {
                const double h = 1e-6 * rho(i);
                rvec rp = rho, rm = rho;
                rp(i) += h;
                rm(i) -= h;
                const double ff = (q.f(compose(rp, th)) - q.f(compose(rm, th))) / (2 * h);
                const double fg = (q.g(rp) - q.g(rm)) / (2 * h);
                CHECK(fixtures::rel_err(ff, g.grad_f(i)) <= 1e-5);
                CHECK(fixtures::rel_err(fg, g.grad_g(i)) <= 1e-5);
            }
        }
    }
}

TEST_CASE("linearized amplitude program")
{
    const rvec gg = (rvec(3) << 1.0, 2.0, 0.5).finished();
    const rvec rt = rvec::Ones(3);
    const AmpLp top = solve_amp_lp(-rvec::Ones(3), gg, rt, 4.0, 1e6, gg.dot(rt));
    CHECK((top.rho.array() == 4.0).all());
    const AmpLp zero = solve_amp_lp(rvec::Ones(3), gg, rt, 4.0, 1e6, gg.dot(rt));
    CHECK((zero.rho.array() == 0.0).all());
    const AmpLp bad = solve_amp_lp(-rvec::Ones(3), gg, rt, 4.0, 1.0, 10.0);
    CHECK(bad.infeasible);
    CHECK(bad.rho.isZero());

    std::mt19937_64 rng(4);
    std::normal_distribution<double> n01(0.0, 1.0);
    std::uniform_real_distribution<double> pos(0.2, 2.0);
    for (int t = 0; t < 10; ++t)
    {
        const rvec gf = (rvec(2) << n01(rng), n01(rng)).finished();
        const rvec g2 = (rvec(2) << pos(rng), pos(rng)).finished();
        const rvec r0 = (rvec(2) << 1.0, 2.0).finished();
        const double rmax = 4.0;
        const double gt = g2.dot(r0);
        const double budget = gt + 0.5;
        const AmpLp lp = solve_amp_lp(gf, g2, r0, rmax, budget, gt);
        CHECK(g2.dot(lp.rho - r0) <= budget - gt + 1e-12);
        CHECK((lp.rho.array() >= 0.0).all());
        CHECK((lp.rho.array() <= rmax).all());
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= 400; ++i)
            for (int j = 0; j <= 400; ++j)
            {
                const rvec r = (rvec(2) << i * rmax / 400, j * rmax / 400).finished();
                if (g2.dot(r - r0) <= budget - gt)
                    best = std::min(best, gf.dot(r));
            }
        CHECK(gf.dot(lp.rho) <= best + 1e-6);
    }
}

TEST_CASE("amplitude SCA")
{
    std::mt19937_64 rng(5);
    SUBCASE("stationary start")
    {
        ArisQuadratic q;
        q.Q = cmat::Identity(2, 2);
        q.q = cvec::Zero(2);
        q.upsilon = rvec::Ones(2);
        q.rho_max = 4.0;
        q.budget = 10.0;
        const AmpResult r = optimize_amplitudes(q, fixtures::random_unit(2, rng), rvec::Zero(2));
        CHECK(r.iterations == 1);
        CHECK(r.rho.isZero());
    }
    SUBCASE("single element versus a scan")
    {
        for (int t = 0; t < 10; ++t)
        {
            ArisQuadratic q = random_quadratic(1, rng);
            q.budget = q.upsilon(0) * (0.5 + t * 0.4);
            const cvec th = fixtures::random_unit(1, rng);
            const AmpResult r = optimize_amplitudes(q, th, rvec::Constant(1, 1e-3));
            const double cap = std::min(q.rho_max, q.budget / q.upsilon(0));
            double best = std::numeric_limits<double>::infinity();
            for (int i = 0; i <= 4000; ++i)
                best = std::min(best, q.f(compose(rvec::Constant(1, cap * i / 4000.0), th)));
            const double got = q.f(compose(r.rho, th));
            CHECK(got <= best + 0.01 * std::abs(best));
            CHECK(q.g(r.rho) <= q.budget * (1 + 1e-12));
            for (std::size_t i = 1; i < r.trace.size(); ++i)
                CHECK(r.trace[i] <= r.trace[i - 1]);
        }
    }
}

TEST_CASE("alternating surface optimization")
{
    SUBCASE("pure noise amplification is switched off")
    {
        const double sig = 0.2;
        ArisQuadratic q;
        q.Q = sig * cmat::Identity(3, 3);
        q.q = cvec::Zero(3);
        q.upsilon = rvec::Constant(3, sig);
        q.rho_max = 4.0;
        q.budget = 10.0;
        ArisVector start{rvec::Zero(3), rvec::Constant(3, 2.0)};
        const ArisResult r = optimize_aris(q, start);
        CHECK(r.coeffs.rho.maxCoeff() < 1e-7);
    }
    SUBCASE("passive mode leaves amplitudes alone")
    {
        std::mt19937_64 rng(6);
        const ArisQuadratic q = random_quadratic(4, rng);
        ArisOptions opt;
        opt.amplitudes = false;
        ArisVector start{rvec::Zero(4), rvec::Ones(4)};
        const ArisResult r = optimize_aris(q, start, opt);
        CHECK(r.coeffs.rho == rvec::Ones(4));
        CHECK(r.trace.back() <= r.trace.front());
    }
    SUBCASE("desk instances: monotone, feasible, never worse in weighted MSE")
    {
        const Scenario s = fixtures::desk();
        for (std::uint64_t seed = 1; seed <= 20; ++seed)
        {
            const auto in = fixtures::make_instance(s, seed);
            const WmmseState wm = wmmse_statistics(s, in.ch, in.st, in.plan);
            const int n = static_cast<int>(seed % s.n_slots);
            for (Platform p : {Platform::uav, Platform::hap})
            {
                const ArisResult r = optimize_aris(s, in.ch[n], in.st, wm, in.plan, p, n);
                for (std::size_t i = 1; i < r.trace.size(); ++i)
                    CHECK(r.trace[i] <= r.trace[i - 1]);
                NetworkState next = in.st;
                next.aris(p, n) = r.coeffs;
                const AerialSpec &spec = s.aerial(p);
                CHECK(r.coeffs.rho.maxCoeff() <= spec.rho_max * (1 + 1e-9));
                CHECK(r.coeffs.rho.minCoeff() >= 0.0);
                CHECK(aris_output_power(s, in.ch[n], next, p, n) <= spec.power_budget * (1 + 1e-9));
                const double before = weighted_mse(s, in.ch[n], in.st, wm, in.plan, n);
                const double after = weighted_mse(s, in.ch[n], next, wm, in.plan, n);
                CHECK(after <= before + 1e-12 * std::abs(before));
            }
        }
    }
}

TEST_CASE("stored phases")
{
    const cvec t = (cvec(3) << std::polar(1.0, -0.5), std::polar(1.0, 3.0), cplx(1, 0)).finished();
    const rvec p = phases_of(t);
    CHECK(p(0) == Approx(2 * std::numbers::pi - 0.5));
    CHECK(p(1) == Approx(3.0));
    CHECK(p(2) == 0.0);
    CHECK((p.array() >= 0.0).all());
    CHECK((p.array() < 2 * std::numbers::pi).all());
}
