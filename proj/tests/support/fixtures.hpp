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

#pragma once

#include "itntn/bcd.hpp"
#include "itntn/init_state.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <vector>

namespace itntn::fixtures
{
    inline std::string config_path(const std::string &name) { return std::string(ITNTN_CONFIG_DIR) + "/" + name; }

    inline ConfigDoc desk_doc() { return ConfigDoc::from_file(config_path("desk.yaml")); }
    inline Scenario desk() { return desk_doc().to_scenario(); }

    // Everything bcd_solve builds before its first block.
    struct Instance
    {
        Scenario s;
        Deployment dep;
        FadingRealization real;
        InitialPaths paths;
        std::vector<ChannelSet> ch;
        NetworkState st;
        DecodingPlan plan;
    };

    inline Instance make_instance(const Scenario &s, std::uint64_t seed, RisMode mode = RisMode::active,
                                  Access access = Access::noma)
    {
        Instance in{s, deploy_users(s, seed), FadingRealization::generate(s, seed), {}, {}, {}, {}};
        in.paths = init_paths(s, in.dep);
        in.ch = assemble_frame(s, in.dep, in.paths.uav, in.paths.hap, in.real);
        in.st = init_state(s, in.ch, in.paths, seed, mode);
        in.plan = plan_decoding(s, in.ch, in.st, access, mode == RisMode::active);
        return in;
    }

    inline cplx cnormal(std::mt19937_64 &rng)
    {
        std::normal_distribution<double> g(0.0, 1.0);
        const double a = g(rng);
        const double b = g(rng);
        return {a, b};
    }

    inline cvec random_cvec(Eigen::Index n, std::mt19937_64 &rng)
    {
        cvec v(n);
        for (Eigen::Index i = 0; i < n; ++i)
            v(i) = cnormal(rng);
        return v;
    }

    inline cmat random_cmat(Eigen::Index r, Eigen::Index c, std::mt19937_64 &rng)
    {
        cmat m(r, c);
        for (Eigen::Index j = 0; j < c; ++j)
            for (Eigen::Index i = 0; i < r; ++i)
                m(i, j) = cnormal(rng);
        return m;
    }

    inline cmat random_psd(Eigen::Index n, std::mt19937_64 &rng)
    {
        const cmat a = random_cmat(n, n, rng);
        return a * a.adjoint();
    }

    inline cvec random_unit(Eigen::Index n, std::mt19937_64 &rng)
    {
        std::uniform_real_distribution<double> ang(0.0, 2.0 * std::acos(-1.0));
        cvec v(n);
        for (Eigen::Index i = 0; i < n; ++i)
            v(i) = std::polar(1.0, ang(rng));
        return v;
    }

    inline double rel_err(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }
}
