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
#include "itntn/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

using namespace itntn;

TEST_CASE("real formatting round-trips")
{
    CHECK(format_real(0.1) == "0.10000000000000001");
    CHECK(format_real(2.0) == "2");
    CHECK(format_real(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(format_real(-std::numeric_limits<double>::infinity()) == "-inf");
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g(0.0, 1e3);
    for (int i = 0; i < 1000; ++i)
    {
        const double x = g(rng) * std::exp(g(rng) / 100.0);
        CHECK(std::strtod(format_real(x).c_str(), nullptr) == x);
    }
}

TEST_CASE("writer enforces the header width")
{
    std::ostringstream os;
    CsvWriter w(os, {"a", "b"});
    w.cell(1).cell(2.5);
    w.end_row();
    CHECK(os.str() == "a,b\n1,2.5\n");
    w.cell("x");
    CHECK_THROWS_AS(w.end_row(), std::invalid_argument);
    std::ostringstream o2;
    CsvWriter w2(o2, {"a"});
    w2.cell("y");
    CHECK_THROWS_AS(w2.cell("z"), std::invalid_argument);
    std::ostringstream o3;
    CsvWriter w3(o3, {"a"});
    CHECK_THROWS_AS(w3.cell("p,q"), std::invalid_argument);
}

TEST_CASE("table writers")
{
    const Scenario s = fixtures::desk();
    BcdOptions o;
    o.t_max = 1;
    const RunResult r = bcd_solve(s, Scheme::of(SchemeTag::proposed_active), 2, o);
    std::vector<MonteCarloRun> runs{as_run(0, r)};

    std::ostringstream rs, ps, qs;
    write_runs(rs, runs);
    write_paths(ps, runs);
    write_rates(qs, runs);
    std::istringstream lines(rs.str());
    std::string header, first;
    std::getline(lines, header);
    std::getline(lines, first);
    CHECK(header == "run,scheme,seed,iter,avg_sum_rate,terr_sum_rate,sat_sum_rate");
    CHECK(first.rfind("0,proposed_active,2,0,", 0) == 0);
    CHECK(rs.str().find('\r') == std::string::npos);

    auto count = [](const std::string &t) { return std::count(t.begin(), t.end(), '\n'); };
    CHECK(count(rs.str()) == 1 + static_cast<long>(r.iterations.size()));
    CHECK(count(ps.str()) == 1 + static_cast<long>(r.iterations.size() * 2 * s.n_slots));
    CHECK(count(qs.str()) ==
          1 + static_cast<long>(r.iterations.size() * s.n_slots * (s.n_terrestrial + s.n_satellite)));
    CHECK(ps.str().rfind("run,scheme,iter,slot,platform,x,y,z\n", 0) == 0);

    runs[0].failed = true;
    std::ostringstream empty;
    write_runs(empty, runs);
    CHECK(count(empty.str()) == 1);

    SummaryRow row{"power.tbs_dbm", 30.0, {SchemeTag::no_ris, 1.5, 0.25, 4, 1}};
    std::ostringstream ss;
    write_summary(ss, {row});
    CHECK(ss.str() == "sweep_key,value,scheme,mean,stderr,n_runs,n_failed\npower.tbs_dbm,30,no_ris,1.5,0.25,4,1\n");
}
