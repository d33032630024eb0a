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

#include <benchmark/benchmark.h>

#include <random>
#include <string>

using namespace itntn;

namespace
{
    Scenario desk()
    {
        return ConfigDoc::from_file(std::string(ITNTN_CONFIG_DIR) + "/desk.yaml").to_scenario();
    }

    struct Prepared
    {
        Scenario s;
        Deployment dep;
        std::vector<ChannelSet> ch;
        NetworkState st;
        DecodingPlan plan;
    };

    Prepared prepare(const Scenario &s, std::uint64_t seed)
    {
        Prepared p{s, deploy_users(s, seed), {}, {}, {}};
        const FadingRealization real = FadingRealization::generate(s, seed);
        const InitialPaths paths = init_paths(s, p.dep);
        p.ch = assemble_frame(s, p.dep, paths.uav, paths.hap, real);
        p.st = init_state(s, p.ch, paths, seed, RisMode::active);
        p.plan = plan_decoding(s, p.ch, p.st, Access::noma, true);
        return p;
    }

    cvec random_unit(int n, std::mt19937_64 &rng)
    {
        std::uniform_real_distribution<double> a(0.0, 6.283185307179586);
        cvec v(n);
        for (int i = 0; i < n; ++i)
            v(i) = std::polar(1.0, a(rng));
        return v;
    }
}

static void BM_WmmseSolve(benchmark::State &state)
{
    const Prepared base = prepare(desk(), 1);
    for (auto _ : state)
    {
        NetworkState st = base.st;
        const WmmseResult r = wmmse_solve(base.s, base.ch, st, base.plan);
        benchmark::DoNotOptimize(r.objective_trace.back());
    }
}
BENCHMARK(BM_WmmseSolve)->Unit(benchmark::kMillisecond);

static void BM_RcgMinimize(benchmark::State &state)
{
    const int n = static_cast<int>(state.range(0));
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    cmat a(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            a(i, j) = {g(rng), g(rng)};
    cvec q(n);
    for (int i = 0; i < n; ++i)
        q(i) = {g(rng), g(rng)};
    const QuadraticObjective obj{a * a.adjoint(), q};
    const cvec start = random_unit(n, rng);
    for (auto _ : state)
    {
        const RcgResult r = rcg_minimize(obj, start);
        benchmark::DoNotOptimize(r.theta.data());
    }
}
BENCHMARK(BM_RcgMinimize)->Arg(8)->Arg(36)->Arg(100);

static void BM_ArisBlock(benchmark::State &state)
{
    const Prepared base = prepare(desk(), 2);
    const WmmseState wm = wmmse_statistics(base.s, base.ch, base.st, base.plan);
    const Platform p = state.range(0) == 0 ? Platform::uav : Platform::hap;
    for (auto _ : state)
    {
        const ArisResult r = optimize_aris(base.s, base.ch[0], base.st, wm, base.plan, p, 0);
        benchmark::DoNotOptimize(r.trace.back());
    }
}
BENCHMARK(BM_ArisBlock)->Arg(0)->Arg(1);

static void BM_BcdRun(benchmark::State &state)
{
    const Scenario s = desk();
    BcdOptions opt;
    opt.t_max = static_cast<int>(state.range(0));
    for (auto _ : state)
    {
        const RunResult r = bcd_solve(s, Scheme::of(SchemeTag::proposed_active), 5, opt);
        benchmark::DoNotOptimize(r.final_rate());
    }
}
BENCHMARK(BM_BcdRun)->Arg(5)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
