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
#include "itntn/bcd.hpp"

#include <cmath>

using namespace itntn;
using doctest::Approx;

namespace
{
    BcdOptions short_run(int t_max = 3)
    {
        BcdOptions o;
        o.t_max = t_max;
        return o;
    }
}

TEST_CASE("scheme registry")
{
    CHECK(Scheme::all().size() == 6);
    for (const Scheme &sc : Scheme::all())
        CHECK(Scheme::parse(sc.name()).tag == sc.tag);
    CHECK_THROWS_WITH_AS(Scheme::parse("ghost"), "unknown scheme 'ghost'", ConfigError);

    const Scheme pas = Scheme::of(SchemeTag::passive_ris);
    CHECK(pas.mode == RisMode::passive);
    CHECK_FALSE(pas.optimize_amplitudes);
    CHECK(pas.optimize_phases);
    const Scheme rnd = Scheme::of(SchemeTag::random_ris);
    CHECK_FALSE(rnd.optimize_phases);
    CHECK_FALSE(rnd.optimize_amplitudes);
    const Scheme none = Scheme::of(SchemeTag::no_ris);
    CHECK(none.mode == RisMode::off);
    CHECK_FALSE(Scheme::of(SchemeTag::fixed_trajectory).move_paths);
    CHECK(Scheme::of(SchemeTag::sdma_active).access == Access::sdma);
    CHECK(Scheme::of(SchemeTag::proposed_active).mode == RisMode::active);
}

TEST_CASE("zero iterations report the initial state")
{
    const Scenario s = fixtures::desk();
    const RunResult r = bcd_solve(s, Scheme::of(SchemeTag::proposed_active), 3, short_run(0));
    REQUIRE(r.iterations.size() == 1);
    const auto in = fixtures::make_instance(s, 3);
    CHECK(r.final_rate() == Approx(evaluate_rates(s, in.ch, in.st, in.plan).average).epsilon(1e-14));
    CHECK(r.final_state.uav_path == in.paths.uav);
}

TEST_CASE("no surfaces with one user per tier is a pure beamforming run")
{
    ConfigDoc doc = fixtures::desk_doc();
    doc.set("users.terrestrial", 1.0);
    doc.set("users.satellite", 1.0);
    const Scenario s = doc.to_scenario();
    const RunResult r = bcd_solve(s, Scheme::of(SchemeTag::no_ris), 6, short_run(30));

    auto in = fixtures::make_instance(s, 6, RisMode::off);
    double prev = evaluate_rates(s, in.ch, in.st, in.plan).average;
    for (int t = 0; t < 30; ++t)
    {
        wmmse_solve(s, in.ch, in.st, in.plan);
        const double now = evaluate_rates(s, in.ch, in.st, in.plan).average;
        if (std::abs(now - prev) <= 1e-3)
        {
            prev = now;
            break;
        }
        prev = now;
    }
    CHECK(r.final_rate() == Approx(prev).epsilon(1e-12));
    for (const IterationRecord &it : r.iterations)
        for (int b = 1; b < 4; ++b)
            CHECK(it.block_gain[b] == 0.0);
}

TEST_CASE("a short run is monotone, feasible and reproducible")
{
    const Scenario s = fixtures::desk();
    const RunResult a = bcd_solve(s, Scheme::of(SchemeTag::proposed_active), 9, short_run());
    const RunResult b = bcd_solve(s, Scheme::of(SchemeTag::proposed_active), 9, short_run());
    const std::vector<double> tr = a.trace();
    for (std::size_t i = 1; i < tr.size(); ++i)
        CHECK(tr[i] >= tr[i - 1] - 1e-9);
    CHECK(tr == b.trace());
    CHECK(a.final_state.uav_path == b.final_state.uav_path);
    CHECK(a.final_state.aris_uav[2] == b.final_state.aris_uav[2]);
    CHECK(a.amp_violations == 0);
    CHECK(a.max_tightness_gap <= 1e-9);
    CHECK(a.min_block_gain >= -1e-9);
    CHECK(audit_constraints(s, a.deployment, a.final_channels, a.final_state, RisMode::active).ok(1e-9));
    CHECK(a.wall.wmmse > 0.0);
}

TEST_CASE("scheme toggles are inert")
{
    const Scenario s = fixtures::desk();
    const std::vector<Scheme> schemes{Scheme::of(SchemeTag::no_ris), Scheme::of(SchemeTag::fixed_trajectory),
                                      Scheme::of(SchemeTag::random_ris)};
    const std::vector<RunResult> runs = run_scheme_suite(s, schemes, 4, short_run(2));
    REQUIRE(runs.size() == 3);
    for (int n = 0; n < s.n_slots; ++n)
    {
        CHECK(runs[0].final_state.aris_uav[n].coeffs().isZero(0.0));
        CHECK(runs[0].final_state.aris_hap[n].coeffs().isZero(0.0));
        CHECK(aris_output_power(s, runs[0].final_channels[n], runs[0].final_state, Platform::uav, n) == 0.0);
    }
    CHECK(runs[1].final_state.uav_path == runs[1].initial_paths.uav);
    CHECK(runs[1].final_state.hap_path == runs[1].initial_paths.hap);
    const auto in = fixtures::make_instance(s, 4, RisMode::passive);
    CHECK(runs[2].final_state.aris_uav[1].theta == in.st.aris_uav[1].theta);
    // Paired comparison: the same fading draw for every scheme.
    CHECK(runs[0].deployment.terrestrial[0] == runs[1].deployment.terrestrial[0]);
}

TEST_CASE("monte carlo harness")
{
    const Scenario s = fixtures::desk();
    const std::vector<Scheme> schemes{Scheme::of(SchemeTag::proposed_active), Scheme::of(SchemeTag::no_ris)};
    const BcdOptions o = short_run(1);
    const MonteCarloTable one = monte_carlo(s, schemes, 1, 40, 1, o);
    const std::vector<RunResult> suite = run_scheme_suite(s, schemes, 40, o);
    REQUIRE(one.aggregates.size() == 2);
    CHECK(one.aggregates[0].mean == suite[0].final_rate());
    CHECK(one.aggregates[1].mean == suite[1].final_rate());
    CHECK(one.aggregates[0].n_runs == 1);

    const MonteCarloTable w1 = monte_carlo(s, schemes, 3, 50, 1, o);
    const MonteCarloTable w3 = monte_carlo(s, schemes, 3, 50, 3, o);
    REQUIRE(w1.runs.size() == 6);
    for (std::size_t i = 0; i < w1.runs.size(); ++i)
    {
        CHECK(w1.runs[i].seed == w3.runs[i].seed);
        CHECK(w1.runs[i].result.trace() == w3.runs[i].result.trace());
    }
    for (std::size_t i = 0; i < 2; ++i)
    {
        CHECK(w1.aggregates[i].mean == w3.aggregates[i].mean);
        CHECK(w1.aggregates[i].std_error == w3.aggregates[i].std_error);
    }
    CHECK(w1.runs[0].seed == 50);
    CHECK(w1.runs[2].seed == 51);
    CHECK(w1.runs[1].scheme == SchemeTag::no_ris);

    double m = 0.0, sq = 0.0;
    for (int r = 0; r < 3; ++r)
        m += w1.runs[2 * r].result.final_rate();
    m /= 3;
    for (int r = 0; r < 3; ++r)
        sq += std::pow(w1.runs[2 * r].result.final_rate() - m, 2);
    CHECK(w1.aggregates[0].mean == Approx(m).epsilon(1e-14));
    CHECK(w1.aggregates[0].std_error == Approx(std::sqrt(sq / 2.0) / std::sqrt(3.0)).epsilon(1e-12));

    CHECK_THROWS_AS(monte_carlo(s, schemes, 0, 1, 1, o), ConfigError);
    CHECK_THROWS_AS(monte_carlo(s, {}, 1, 1, 1, o), ConfigError);
}

TEST_CASE("failed runs are counted, not fatal")
{
    Scenario s = fixtures::desk();
    s.p_tbs = -1.0; // breaks the beam solve inside every run
    const MonteCarloTable t = monte_carlo(s, {Scheme::of(SchemeTag::proposed_active)}, 2, 1, 1, short_run(1));
    CHECK(t.aggregates[0].n_failed == 2);
    CHECK(t.aggregates[0].n_runs == 0);
    CHECK(std::isnan(t.aggregates[0].mean));
    CHECK_FALSE(t.runs[0].error.empty());
}
