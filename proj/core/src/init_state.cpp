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

#include "itntn/init_state.hpp"

#include <cmath>
#include <numbers>

namespace itntn
{
    namespace
    {
        constexpr std::uint64_t kPhasePurpose = 0x7068617365000000ULL;
    }

    cmat matched_filter_beams(const cmat &direct, double power)
    {
        const Eigen::Index K = direct.rows();
        cmat v = cmat::Zero(direct.cols(), K);
        const double per_user = std::sqrt(power / static_cast<double>(K));
        for (Eigen::Index k = 0; k < K; ++k)
        {
            const double nrm = direct.row(k).norm();
            if (nrm > 0.0)
                v.col(k) = per_user * direct.row(k).adjoint() / nrm;
        }
        return v;
    }

    double uniform_amplitude(const cmat &bs_ris, const cmat &beams, double sigma2, double budget, double rho_max)
    {
        const double trace = (bs_ris * beams).squaredNorm() + sigma2 * static_cast<double>(bs_ris.rows());
        return std::min(rho_max, budget / trace);
    }

    NetworkState init_state(const Scenario &s, const std::vector<ChannelSet> &ch, const InitialPaths &paths,
                            std::uint64_t seed, RisMode mode)
    {
        NetworkState st;
        st.uav_path = paths.uav;
        st.hap_path = paths.hap;
        std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
        for (int n = 0; n < static_cast<int>(ch.size()); ++n)
        {
            const ChannelSet &c = ch[static_cast<std::size_t>(n)];
            st.beams_tbs.push_back(matched_filter_beams(c.tbs_terr, s.p_tbs));
            st.beams_sat.push_back(matched_filter_beams(c.sat_sat, s.p_sat));
            for (Platform p : {Platform::uav, Platform::hap})
            {
                const AerialSpec &spec = s.aerial(p);
                const int N = spec.elements();
                auto rng = make_stream(seed, kPhasePurpose, static_cast<std::uint64_t>(p),
                                       static_cast<std::uint64_t>(n));
                ArisVector a;
                a.theta.resize(N);
                for (int r = 0; r < N; ++r)
                    a.theta(r) = angle(rng);
                double rho = 0.0;
                if (mode == RisMode::passive)
                    rho = 1.0;
                else if (mode == RisMode::active)
                    rho = p == Platform::uav
                              ? uniform_amplitude(c.tbs_uav, st.beams_tbs.back(), spec.noise, spec.power_budget,
                                                  spec.rho_max)
                              : uniform_amplitude(c.sat_hap, st.beams_sat.back(), spec.noise, spec.power_budget,
                                                  spec.rho_max);
                a.rho = rvec::Constant(N, rho);
                (p == Platform::uav ? st.aris_uav : st.aris_hap).push_back(std::move(a));
            }
        }
        return st;
    }
}
