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

#ifndef ITNTN_INIT_STATE_HPP
#define ITNTN_INIT_STATE_HPP

#include "itntn/channel.hpp"
#include "itntn/ratemodel.hpp"

#include <cstdint>

namespace itntn
{
    // Matched filter sqrt(P/K) h^H / ||h|| per user row of `direct`.
    cmat matched_filter_beams(const cmat &direct, double power);

    // Largest uniform amplification meeting the surface power budget, capped.
    double uniform_amplitude(const cmat &bs_ris, const cmat &beams, double sigma2, double budget, double rho_max);

    // Starting point of a run: matched-filter beams on the direct links,
    // uniform random phases, amplitudes chosen by `mode`.
    NetworkState init_state(const Scenario &s, const std::vector<ChannelSet> &ch, const InitialPaths &paths,
                            std::uint64_t seed, RisMode mode);
}

#endif
