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

#include "itntn/ratemodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace itntn
{
    namespace
    {
        // Shared SINR kernel for either tier.
        double sinr_kernel(const cmat &own, const cmat &cross, const cmat &own_beams, const cmat &cross_beams,
                           double aris_noise, double noise, const DecodingPlan &plan, Tier t, int slot, int k, int i)
        {
            const auto h = own.row(k);
            const double desired = std::norm((h * own_beams.col(i)).value());
            double den = aris_noise + noise;
            for (Eigen::Index m = 0; m < own_beams.cols(); ++m)
                if (plan.interferes(t, slot, static_cast<int>(m), i))
                    den += std::norm((h * own_beams.col(m)).value());
            const auto hx = cross.row(k);
            for (Eigen::Index j = 0; j < cross_beams.cols(); ++j)
                den += std::norm((hx * cross_beams.col(j)).value());
            return desired / den;
        }

        std::vector<int> ranks_of(const std::vector<int> &order)
        {
            std::vector<int> rank(order.size());
            for (std::size_t p = 0; p < order.size(); ++p)
                rank[static_cast<std::size_t>(order[p])] = static_cast<int>(p);
            return rank;
        }

        double rel_excess(double value, double cap)
        {
            return (value - cap) / std::max(cap, std::numeric_limits<double>::min());
        }
    }

    cvec ArisVector::unit() const
    {
        cvec out(theta.size());
        for (Eigen::Index r = 0; r < theta.size(); ++r)
            out(r) = std::polar(1.0, theta(r));
        return out;
    }

    cvec ArisVector::coeffs() const
    {
        cvec out(theta.size());
        for (Eigen::Index r = 0; r < theta.size(); ++r)
            out(r) = std::polar(std::sqrt(rho(r)), theta(r));
        return out;
    }

    const ArisVector &NetworkState::aris(Platform p, int n) const
    {
        return (p == Platform::uav ? aris_uav : aris_hap).at(static_cast<std::size_t>(n));
    }

    ArisVector &NetworkState::aris(Platform p, int n)
    {
        return (p == Platform::uav ? aris_uav : aris_hap).at(static_cast<std::size_t>(n));
    }

    std::vector<int> sic_order(const std::vector<double> &gains)
    {
        std::vector<int> order(gains.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return gains[static_cast<std::size_t>(a)] < gains[static_cast<std::size_t>(b)];
        });
        return order;
    }

    bool DecodingPlan::interferes(Tier t, int slot, int m, int i) const
    {
        if (m == i)
            return false;
        if (access == Access::sdma)
            return true;
        const auto &rank = (t == Tier::terrestrial ? terr_rank : sat_rank)[static_cast<std::size_t>(slot)];
        return rank[static_cast<std::size_t>(m)] > rank[static_cast<std::size_t>(i)];
    }

    SlotLinks slot_links(const Scenario &s, const ChannelSet &ch, const cvec &phi_uav, const cvec &phi_hap,
                         bool aris_noise)
    {
        const int K = s.n_terrestrial, L = s.n_satellite;
        SlotLinks lk;
        lk.noise_terr = s.noise_terr;
        lk.noise_sat = s.noise_sat;
        // rows of h^H diag(phi): conj(h) .* phi
        const cmat wu = (ch.uav_terr.conjugate().array().colwise() * phi_uav.array()).matrix();
        const cmat wh = (ch.hap_terr.conjugate().array().colwise() * phi_hap.array()).matrix();
        const cmat su = (ch.uav_sat.conjugate().array().colwise() * phi_uav.array()).matrix();
        const cmat sh = (ch.hap_sat.conjugate().array().colwise() * phi_hap.array()).matrix();
        lk.terr_own = ch.tbs_terr + wu.transpose() * ch.tbs_uav;
        lk.terr_cross = ch.sat_terr + wh.transpose() * ch.sat_hap;
        lk.sat_own = ch.sat_sat + sh.transpose() * ch.sat_hap;
        lk.sat_cross = ch.tbs_sat + su.transpose() * ch.tbs_uav;
        lk.terr_aris_noise = rvec::Zero(K);
        lk.sat_aris_noise = rvec::Zero(L);
        if (aris_noise)
        {
            for (int k = 0; k < K; ++k)
                lk.terr_aris_noise(k) = aris_noise_at_user(ch.uav_terr.col(k), phi_uav, s.uav.noise);
            for (int l = 0; l < L; ++l)
                lk.sat_aris_noise(l) = aris_noise_at_user(ch.hap_sat.col(l), phi_hap, s.hap.noise);
        }
        return lk;
    }

    SlotLinks slot_links(const Scenario &s, const ChannelSet &ch, const NetworkState &st, int slot, bool aris_noise)
    {
        return slot_links(s, ch, st.aris(Platform::uav, slot).coeffs(), st.aris(Platform::hap, slot).coeffs(),
                          aris_noise);
    }

    DecodingPlan plan_decoding(const Scenario &s, const std::vector<ChannelSet> &ch, const NetworkState &st,
                               Access access, bool aris_noise)
    {
        DecodingPlan plan;
        plan.access = access;
        plan.aris_noise = aris_noise;
        for (int n = 0; n < static_cast<int>(ch.size()); ++n)
        {
            const SlotLinks lk = slot_links(s, ch[static_cast<std::size_t>(n)], st, n, aris_noise);
            std::vector<double> gt(static_cast<std::size_t>(lk.terr_own.rows()));
            std::vector<double> gs(static_cast<std::size_t>(lk.sat_own.rows()));
            for (std::size_t k = 0; k < gt.size(); ++k)
                gt[k] = lk.terr_own.row(static_cast<Eigen::Index>(k)).squaredNorm();
            for (std::size_t l = 0; l < gs.size(); ++l)
                gs[l] = lk.sat_own.row(static_cast<Eigen::Index>(l)).squaredNorm();
            plan.terr_rank.push_back(ranks_of(sic_order(gt)));
            plan.sat_rank.push_back(ranks_of(sic_order(gs)));
        }
        return plan;
    }

    double aris_noise_at_user(const cvec &h_ris_user, const cvec &phi, double sigma2)
    {
        if (h_ris_user.size() != phi.size())
            throw ConfigError("aris_noise_at_user: shape mismatch");
        return sigma2 * (h_ris_user.array().abs2() * phi.array().abs2()).sum();
    }

    double aris_output_power(const cvec &phi, const cmat &bs_ris, const cmat &beams, double sigma2)
    {
        if (bs_ris.rows() != phi.size() || bs_ris.cols() != beams.rows())
            throw ConfigError("aris_output_power: shape mismatch");
        const rvec incident = (bs_ris * beams).rowwise().squaredNorm();
        return (phi.array().abs2() * (incident.array() + sigma2)).sum();
    }

    double aris_output_power(const Scenario &s, const ChannelSet &ch, const NetworkState &st, Platform p, int slot)
    {
        const std::size_t n = static_cast<std::size_t>(slot);
        const cvec phi = st.aris(p, slot).coeffs();
        return p == Platform::uav ? aris_output_power(phi, ch.tbs_uav, st.beams_tbs[n], s.uav.noise)
                                  : aris_output_power(phi, ch.sat_hap, st.beams_sat[n], s.hap.noise);
    }

    double sinr_terrestrial(const SlotLinks &lk, const cmat &beams_tbs, const cmat &beams_sat,
                            const DecodingPlan &plan, int slot, int k, int i)
    {
        return sinr_kernel(lk.terr_own, lk.terr_cross, beams_tbs, beams_sat, lk.terr_aris_noise(k), lk.noise_terr,
                           plan, Tier::terrestrial, slot, k, i);
    }

    double sinr_satellite(const SlotLinks &lk, const cmat &beams_tbs, const cmat &beams_sat,
                          const DecodingPlan &plan, int slot, int l, int j)
    {
        return sinr_kernel(lk.sat_own, lk.sat_cross, beams_sat, beams_tbs, lk.sat_aris_noise(l), lk.noise_sat, plan,
                           Tier::satellite, slot, l, j);
    }

    SlotReport slot_rates(const SlotLinks &lk, const cmat &beams_tbs, const cmat &beams_sat,
                          const DecodingPlan &plan, int slot)
    {
        const int K = static_cast<int>(lk.terr_own.rows());
        const int L = static_cast<int>(lk.sat_own.rows());
        const double nan = std::numeric_limits<double>::quiet_NaN();
        SlotReport r;
        r.sinr_terr.resize(K);
        r.sinr_sat.resize(L);
        r.sic_terr = Eigen::MatrixXd::Constant(K, K, nan);
        r.sic_sat = Eigen::MatrixXd::Constant(L, L, nan);
        for (int k = 0; k < K; ++k)
        {
            r.sinr_terr(k) = sinr_terrestrial(lk, beams_tbs, beams_sat, plan, slot, k, k);
            if (plan.access == Access::noma)
                for (int i = 0; i < K; ++i)
                    if (i != k && plan.interferes(Tier::terrestrial, slot, k, i))
                        r.sic_terr(k, i) = sinr_terrestrial(lk, beams_tbs, beams_sat, plan, slot, k, i);
        }
        for (int l = 0; l < L; ++l)
        {
            r.sinr_sat(l) = sinr_satellite(lk, beams_tbs, beams_sat, plan, slot, l, l);
            if (plan.access == Access::noma)
                for (int j = 0; j < L; ++j)
                    if (j != l && plan.interferes(Tier::satellite, slot, l, j))
                        r.sic_sat(l, j) = sinr_satellite(lk, beams_tbs, beams_sat, plan, slot, l, j);
        }
        r.rate_terr = r.sinr_terr.unaryExpr([](double g) { return std::log2(1.0 + g); });
        r.rate_sat = r.sinr_sat.unaryExpr([](double g) { return std::log2(1.0 + g); });
        return r;
    }

    double average_sum_rate(const std::vector<SlotReport> &slots)
    {
        if (slots.empty())
            throw ConfigError("average_sum_rate needs at least one slot");
        double acc = 0.0;
        for (const SlotReport &r : slots)
            acc += r.sum();
        return acc / static_cast<double>(slots.size());
    }

    RateReport evaluate_rates(const Scenario &s, const std::vector<ChannelSet> &ch, const NetworkState &st,
                              const DecodingPlan &plan)
    {
        RateReport rep;
        double terr = 0.0, sat = 0.0;
        for (int n = 0; n < static_cast<int>(ch.size()); ++n)
        {
            const std::size_t i = static_cast<std::size_t>(n);
            const SlotLinks lk = slot_links(s, ch[i], st, n, plan.aris_noise);
            rep.slots.push_back(slot_rates(lk, st.beams_tbs[i], st.beams_sat[i], plan, n));
            terr += rep.slots.back().terr_sum();
            sat += rep.slots.back().sat_sum();
        }
        rep.average = average_sum_rate(rep.slots);
        rep.terr_average = terr / static_cast<double>(ch.size());
        rep.sat_average = sat / static_cast<double>(ch.size());
        return rep;
    }

    RateReport sdma_rates(const Scenario &s, const std::vector<ChannelSet> &ch, const NetworkState &st,
                          const DecodingPlan &plan)
    {
        DecodingPlan sdma = plan;
        sdma.access = Access::sdma;
        return evaluate_rates(s, ch, st, sdma);
    }

    bool ConstraintAudit::ok(double rel_tol) const
    {
        return tbs_power <= rel_tol && sat_power <= rel_tol && uav_amplitude <= rel_tol &&
               hap_amplitude <= rel_tol && uav_power <= rel_tol && hap_power <= rel_tol && uav_path.empty() &&
               hap_path.empty();
    }

    ConstraintAudit audit_constraints(const Scenario &s, const Deployment &dep, const std::vector<ChannelSet> &ch,
                                      const NetworkState &st, RisMode mode)
    {
        ConstraintAudit a;
        a.tbs_power = a.sat_power = a.uav_amplitude = a.hap_amplitude = a.uav_power = a.hap_power =
            -std::numeric_limits<double>::infinity();
        for (int n = 0; n < st.n_slots(); ++n)
        {
            const std::size_t i = static_cast<std::size_t>(n);
            a.tbs_power = std::max(a.tbs_power, rel_excess(st.beams_tbs[i].squaredNorm(), s.p_tbs));
            a.sat_power = std::max(a.sat_power, rel_excess(st.beams_sat[i].squaredNorm(), s.p_sat));
            for (Platform p : {Platform::uav, Platform::hap})
            {
                const ArisVector &v = st.aris(p, n);
                const AerialSpec &spec = s.aerial(p);
                double amp = -v.rho.minCoeff();
                double pow = -std::numeric_limits<double>::infinity();
                if (mode == RisMode::active)
                {
                    amp = std::max(amp, rel_excess(v.rho.maxCoeff(), spec.rho_max));
                    pow = rel_excess(aris_output_power(s, ch[i], st, p, n), spec.power_budget);
                }
                else if (mode == RisMode::passive)
                {
                    amp = std::max(amp, (v.rho.array() - 1.0).abs().maxCoeff());
                }
                else
                {
                    amp = std::max(amp, v.rho.cwiseAbs().maxCoeff() > 0.0 ? 1.0 : 0.0);
                }
                (p == Platform::uav ? a.uav_amplitude : a.hap_amplitude) =
                    std::max(p == Platform::uav ? a.uav_amplitude : a.hap_amplitude, amp);
                (p == Platform::uav ? a.uav_power : a.hap_power) =
                    std::max(p == Platform::uav ? a.uav_power : a.hap_power, pow);
            }
        }
        a.uav_path = check_path(st.uav_path, path_limits(s, dep, Platform::uav));
        a.hap_path = check_path(st.hap_path, path_limits(s, dep, Platform::hap));
        return a;
    }
}
