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
#include "itntn/scene.hpp"

#include <cmath>

using namespace itntn;
using doctest::Approx;

TEST_CASE("power and gain conversions")
{
    CHECK(dbm_to_watts(0.0) == Approx(1e-3).epsilon(1e-14));
    CHECK(dbm_to_watts(30.0) == Approx(1.0).epsilon(1e-14));
    CHECK(dbm_to_watts(43.0) == Approx(19.9526231496888).epsilon(1e-12));
    CHECK(db_to_linear(0.0) == 1.0);
    CHECK(db_to_linear(30.0) == Approx(1000.0).epsilon(1e-14));
    CHECK(dbm_to_watts(-90.0) == Approx(1e-12).epsilon(1e-12));
    CHECK(watts_to_dbm(dbm_to_watts(17.5)) == Approx(17.5).epsilon(1e-14));
    CHECK(linear_to_db(db_to_linear(-3.0)) == Approx(-3.0).epsilon(1e-14));
}

TEST_CASE("near-square factorization")
{
    CHECK(near_square_factors(36) == std::pair{6, 6});
    CHECK(near_square_factors(8) == std::pair{2, 4});
    CHECK(near_square_factors(9) == std::pair{3, 3});
    CHECK(near_square_factors(7) == std::pair{1, 7});
    CHECK(near_square_factors(1) == std::pair{1, 1});
}

TEST_CASE("full-scale configuration loads with the published parameters")
{
    const Scenario s = ConfigDoc::from_file(fixtures::config_path("full.yaml")).to_scenario();
    CHECK(s.n_slots == 60);
    CHECK(s.slot_s == 1.0);
    CHECK(s.tbs_antennas == 8);
    CHECK(s.sat_antennas() == 32);
    CHECK(s.n_terrestrial == 3);
    CHECK(s.n_satellite == 4);
    CHECK(s.uav.elements() == 16);
    CHECK(s.hap.elements() == 36);
    CHECK(s.p_tbs == Approx(19.953).epsilon(1e-4));
    CHECK(s.p_sat == Approx(std::pow(10.0, 2.477)).epsilon(1e-12));
    CHECK(s.noise_terr == Approx(1e-12).epsilon(1e-12));
    CHECK(s.hap.noise == Approx(std::pow(10.0, -14.3)).epsilon(1e-12));
    CHECK(s.uav.power_budget == Approx(std::pow(10.0, -1.5)).epsilon(1e-12));
    CHECK(s.gain_sat == Approx(1000.0));
    CHECK(s.gain_hap == Approx(std::pow(10.0, 1.4)));
    CHECK(s.eta_tbs_terr == 3.5);
    CHECK(s.eta_uav_terr == 2.2);
    CHECK(s.kappa.tbs_uav == 8.0);
    CHECK(s.kappa.sat_hap == 6.0);
    CHECK(s.uav.speed_max == 30.0);
    CHECK(s.hap.speed_max == 5.0);
    CHECK(s.sat_position.z() == 600000.0);
}

TEST_CASE("validation rejects a config without terrestrial users")
{
    ConfigDoc doc = fixtures::desk_doc();
    doc.set("users.terrestrial", 0.0);
    CHECK_THROWS_WITH_AS(doc.to_scenario(), "n_terrestrial must be ≥1", ConfigError);
}

TEST_CASE("validation rejects endpoints out of reach")
{
    ConfigDoc doc = fixtures::desk_doc();
    // 6 slots x 10 s at 1000/60 m/s gives 1 km of reach for a 10 km leg.
    doc.set("hap.speed_max_mps", 1000.0 / 60.0);
    doc.set("hap.init_m", "[0, 800, 20000]");
    doc.set("hap.final_m", "[10000, 800, 20000]");
    CHECK_THROWS_WITH_AS(doc.to_scenario(), doctest::Contains("endpoints unreachable"), ConfigError);
}

TEST_CASE("unknown and malformed keys")
{
    ConfigDoc doc = fixtures::desk_doc();
    doc.set("frame.bogus", 1.0);
    CHECK_THROWS_WITH_AS(doc.to_scenario(), "unknown key 'frame.bogus'", ConfigError);

    ConfigDoc d2 = fixtures::desk_doc();
    CHECK_THROWS_AS(d2.apply_override("ris.bogus", 4.0), ConfigError);
    CHECK(ConfigDoc::is_known_key("power.tbs_dbm"));
    CHECK_FALSE(ConfigDoc::is_known_key("power.tbs"));

    ConfigDoc d3 = fixtures::desk_doc();
    d3.set("frame.slots", "six");
    CHECK_THROWS_AS(d3.to_scenario(), ConfigError);

    CHECK_THROWS_AS(load_scenario("- just\n- a list\n"), ConfigError);
}

TEST_CASE("sweep overrides replace derived keys")
{
    ConfigDoc doc = fixtures::desk_doc();
    doc.apply_override("frame.duration_s", 120.0);
    const Scenario s = doc.to_scenario();
    CHECK(s.slot_s == Approx(20.0));
    CHECK(s.frame_seconds() == Approx(120.0));

    ConfigDoc d2 = fixtures::desk_doc();
    d2.set("ris.uav_nx", 2.0);
    d2.apply_override("ris.n_uav", 16.0);
    const Scenario s2 = d2.to_scenario();
    CHECK(s2.uav.nx == 4);
    CHECK(s2.uav.ny == 4);
}

TEST_CASE("straight paths")
{
    PathLimits lim{Vec3(0, 0, 100), Vec3(200, 0, 100), 50.0, 150.0, 30.0 * 1.0};
    CHECK_THROWS_AS(straight_path(lim, 3), ConfigError);

    const Path p = straight_path(lim, 11);
    REQUIRE(p.size() == 11);
    for (std::size_t n = 0; n + 1 < p.size(); ++n)
        CHECK((p[n + 1] - p[n]).norm() == Approx(20.0).epsilon(1e-12));
    CHECK(check_path(p, lim).empty());

    PathLimits still{Vec3(5, 5, 100), Vec3(5, 5, 100), 50.0, 150.0, 30.0};
    const Path c = straight_path(still, 4);
    for (std::size_t n = 0; n < c.size(); ++n)
        CHECK(c[n] == Vec3(5, 5, 100));
}

TEST_CASE("path checks name the violated constraint")
{
    PathLimits lim{Vec3(0, 0, 100), Vec3(40, 0, 100), 50.0, 150.0, 100.0};
    Path p{{Vec3(0, 0, 100), Vec3(20, 0, 100), Vec3(40, 0, 100)}};
    CHECK(check_path(p, lim).empty());
    p[1] = Vec3(20, 0, 160);
    CHECK(check_path(p, lim) == "altitude outside box at slot 1");
    p[1] = Vec3(-70, 0, 100);
    CHECK(check_path(p, lim) == "speed cap exceeded at slot 1");
    p[1] = Vec3(20, 0, 100);
    p[2] = Vec3(41, 0, 100);
    CHECK(check_path(p, lim) == "last point differs from the final endpoint");
}

TEST_CASE("deployment is seeded and respects the user discs")
{
    const Scenario s = fixtures::desk();
    const Deployment a = deploy_users(s, 11);
    const Deployment b = deploy_users(s, 11);
    const Deployment c = deploy_users(s, 12);
    REQUIRE(a.terrestrial.size() == 2);
    REQUIRE(a.satellite.size() == 2);
    CHECK(a.terrestrial[0] == b.terrestrial[0]);
    CHECK(a.satellite[1] == b.satellite[1]);
    CHECK_FALSE(a.terrestrial[0] == c.terrestrial[0]);
    for (const Vec3 &u : a.terrestrial)
        CHECK((u.head<2>() - s.tbs_position.head<2>()).norm() <= s.terr_radius);
    for (const Vec3 &u : a.satellite)
        CHECK((u.head<2>() - s.sat_center).norm() <= s.sat_radius);

    // UAV ends above the terrestrial-user centroid at its initial altitude.
    const Vec3 centroid = 0.5 * (a.terrestrial[0] + a.terrestrial[1]);
    CHECK(a.uav_final.x() == Approx(centroid.x()));
    CHECK(a.uav_final.y() == Approx(centroid.y()));
    CHECK(a.uav_final.z() == s.uav.init.z());
}

TEST_CASE("initial paths satisfy every path constraint")
{
    const Scenario s = fixtures::desk();
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
    {
        const Deployment dep = deploy_users(s, seed);
        const InitialPaths ip = init_paths(s, dep);
        CHECK(ip.uav.size() == static_cast<std::size_t>(s.n_slots));
        CHECK(check_path(ip.uav, path_limits(s, dep, Platform::uav)).empty());
        CHECK(check_path(ip.hap, path_limits(s, dep, Platform::hap)).empty());
    }
}

TEST_CASE("initial state")
{
    SUBCASE("single-user matched filter at full power")
    {
        cmat h(1, 3);
        h << cplx(1, 2), cplx(-0.5, 0), cplx(0, 3);
        const cmat v = matched_filter_beams(h, 7.0);
        CHECK(v.squaredNorm() == Approx(7.0).epsilon(1e-13));
        const cvec dir = h.row(0).adjoint() / h.norm();
        CHECK((v.col(0) - std::sqrt(7.0) * dir).norm() < 1e-13);
    }
    SUBCASE("amplitude is capped when the budget is huge")
    {
        std::mt19937_64 rng(3);
        const cmat H = fixtures::random_cmat(4, 2, rng);
        const cmat V = fixtures::random_cmat(2, 2, rng);
        CHECK(uniform_amplitude(H, V, 1e-3, 1e9, 4.0) == 4.0);
    }
    SUBCASE("amplitude one exhausts a budget sized for it")
    {
        std::mt19937_64 rng(4);
        const cmat H = fixtures::random_cmat(5, 3, rng);
        const cmat V = fixtures::random_cmat(3, 2, rng);
        const double sigma2 = 0.25;
        double budget = 5 * sigma2;
        for (int r = 0; r < 5; ++r)
            for (int k = 0; k < 2; ++k)
                budget += std::norm((H.row(r) * V.col(k)).value());
        CHECK(uniform_amplitude(H, V, sigma2, budget, 4.0) == Approx(1.0).epsilon(1e-13));
    }
    SUBCASE("mode-specific amplitudes")
    {
        const Scenario s = fixtures::desk();
        const auto act = fixtures::make_instance(s, 2, RisMode::active);
        const auto pas = fixtures::make_instance(s, 2, RisMode::passive);
        const auto off = fixtures::make_instance(s, 2, RisMode::off);
        CHECK((pas.st.aris_uav[0].rho.array() == 1.0).all());
        CHECK((off.st.aris_hap[3].rho.array() == 0.0).all());
        CHECK(act.st.aris_uav[0].theta == pas.st.aris_uav[0].theta);
        const ConstraintAudit audit = audit_constraints(s, act.dep, act.ch, act.st, RisMode::active);
        CHECK(audit.ok(1e-9));
    }
}

TEST_CASE("random streams are independent per purpose")
{
    auto a = make_stream(1, 2, 3, 4);
    auto b = make_stream(1, 2, 3, 4);
    auto c = make_stream(1, 2, 3, 5);
    const auto x = a();
    CHECK(x == b());
    CHECK(x != c());
}
