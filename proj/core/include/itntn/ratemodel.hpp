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

#ifndef ITNTN_RATEMODEL_HPP
#define ITNTN_RATEMODEL_HPP

#include "itntn/channel.hpp"
#include "itntn/scene.hpp"
#include "itntn/types.hpp"

#include <vector>

namespace itntn
{
    enum class Access
    {
        noma, // fixed SIC order
        sdma  // every co-user interferes
    };

    // How the reflecting surfaces behave.
    enum class RisMode
    {
        active,  // amplifying, adds thermal noise, power-limited
        passive, // unit amplitude, noiseless, no power budget
        off      // removed (zero coefficients)
    };

    struct ArisVector
    {
        rvec theta; // rad
        rvec rho;   // amplification, >= 0

        Eigen::Index size() const { return theta.size(); }
        cvec unit() const;   // exp(i theta)
        cvec coeffs() const; // sqrt(rho) exp(i theta)
        bool operator==(const ArisVector &o) const { return theta == o.theta && rho == o.rho; }
    };

    struct NetworkState
    {
        std::vector<cmat> beams_tbs; // per slot, Mb x K, column per user
        std::vector<cmat> beams_sat; // per slot, Ms x L
        std::vector<ArisVector> aris_uav;
        std::vector<ArisVector> aris_hap;
        Path uav_path;
        Path hap_path;

        int n_slots() const { return static_cast<int>(beams_tbs.size()); }
        const ArisVector &aris(Platform p, int n) const;
        ArisVector &aris(Platform p, int n);
        const Path &path(Platform p) const { return p == Platform::uav ? uav_path : hap_path; }
        Path &path(Platform p) { return p == Platform::uav ? uav_path : hap_path; }
    };

    // Stable ascending sort permutation: order[p] is the user decoded p-th.
    std::vector<int> sic_order(const std::vector<double> &gains);

    // Per-slot decoding order and receiver model, frozen for a run.
    struct DecodingPlan
    {
        Access access = Access::noma;
        bool aris_noise = true;
        std::vector<std::vector<int>> terr_rank; // [slot][user] -> decoding position
        std::vector<std::vector<int>> sat_rank;

        // True when user m's stream is still present while decoding user i.
        bool interferes(Tier t, int slot, int m, int i) const;
    };

    // Effective channels and ARIS noise seen by every receiver in one slot.
    struct SlotLinks
    {
        cmat terr_own;   // K x Mb, TBS -> terrestrial users
        cmat terr_cross; // K x Ms, SAT -> terrestrial users
        rvec terr_aris_noise;
        cmat sat_own;   // L x Ms
        cmat sat_cross; // L x Mb
        rvec sat_aris_noise;
        double noise_terr = 0.0;
        double noise_sat = 0.0;
    };

    SlotLinks slot_links(const Scenario &s, const ChannelSet &ch, const cvec &phi_uav, const cvec &phi_hap,
                         bool aris_noise);
    SlotLinks slot_links(const Scenario &s, const ChannelSet &ch, const NetworkState &st, int slot,
                         bool aris_noise);

    DecodingPlan plan_decoding(const Scenario &s, const std::vector<ChannelSet> &ch, const NetworkState &st,
                               Access access, bool aris_noise);

    double aris_noise_at_user(const cvec &h_ris_user, const cvec &phi, double sigma2);

    // sum_k ||diag(phi) H v_k||^2 + sigma2 ||phi||^2
    double aris_output_power(const cvec &phi, const cmat &bs_ris, const cmat &beams, double sigma2);
    double aris_output_power(const Scenario &s, const ChannelSet &ch, const NetworkState &st, Platform p, int slot);

    // SINR of stream i at receiver k; i == k gives the user's own SINR.
    double sinr_terrestrial(const SlotLinks &lk, const cmat &beams_tbs, const cmat &beams_sat,
                            const DecodingPlan &plan, int slot, int k, int i);
    double sinr_satellite(const SlotLinks &lk, const cmat &beams_tbs, const cmat &beams_sat,
                          const DecodingPlan &plan, int slot, int l, int j);

    struct SlotReport
    {
        rvec sinr_terr, rate_terr;
        rvec sinr_sat, rate_sat;
        Eigen::MatrixXd sic_terr; // (k, i): receiver k decoding stream i, NaN if not decoded
        Eigen::MatrixXd sic_sat;

        double terr_sum() const { return rate_terr.sum(); }
        double sat_sum() const { return rate_sat.sum(); }
        double sum() const { return terr_sum() + sat_sum(); }
    };

    struct RateReport
    {
        std::vector<SlotReport> slots;
        double average = 0.0;
        double terr_average = 0.0;
        double sat_average = 0.0;
    };

    SlotReport slot_rates(const SlotLinks &lk, const cmat &beams_tbs, const cmat &beams_sat,
                          const DecodingPlan &plan, int slot);
    double average_sum_rate(const std::vector<SlotReport> &slots);

    RateReport evaluate_rates(const Scenario &s, const std::vector<ChannelSet> &ch, const NetworkState &st,
                              const DecodingPlan &plan);

    // Same state evaluated without SIC.
    RateReport sdma_rates(const Scenario &s, const std::vector<ChannelSet> &ch, const NetworkState &st,
                          const DecodingPlan &plan);

    // Largest relative violation of the per-slot power constraints (<= 0 when feasible).
    struct ConstraintAudit
    {
        double tbs_power = 0.0;
        double sat_power = 0.0;
        double uav_amplitude = 0.0;
        double hap_amplitude = 0.0;
        double uav_power = 0.0;
        double hap_power = 0.0;
        std::string uav_path;
        std::string hap_path;

        bool ok(double rel_tol) const;
    };

    ConstraintAudit audit_constraints(const Scenario &s, const Deployment &dep, const std::vector<ChannelSet> &ch,
                                      const NetworkState &st, RisMode mode);
}

#endif
