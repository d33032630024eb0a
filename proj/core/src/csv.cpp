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

#include "itntn/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <utility>

namespace itntn
{
    const std::vector<std::string> kRunsColumns = {"run",          "scheme",        "seed",         "iter",
                                                   "avg_sum_rate", "terr_sum_rate", "sat_sum_rate"};
    const std::vector<std::string> kPathsColumns = {"run", "scheme", "iter", "slot", "platform", "x", "y", "z"};
    const std::vector<std::string> kRatesColumns = {"run", "scheme", "iter", "slot", "user", "tier", "sinr", "rate"};
    const std::vector<std::string> kSummaryColumns = {"sweep_key", "value", "scheme", "mean",
                                                      "stderr",    "n_runs", "n_failed"};

    std::string format_real(double x)
    {
        if (std::isnan(x))
            return "nan";
        if (std::isinf(x))
            return x > 0 ? "inf" : "-inf";
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return buf;
    }

    CsvWriter::CsvWriter(std::ostream &out, std::vector<std::string> header) : out_(out), width_(header.size())
    {
        for (const std::string &h : header)
            cell(h);
        end_row();
    }

    CsvWriter &CsvWriter::cell(const std::string &v)
    {
        if (col_ >= width_)
            throw std::invalid_argument("csv row wider than header");
        if (v.find_first_of(",\"\n") != std::string::npos)
            throw std::invalid_argument("csv cell needs quoting: " + v);
        if (col_ > 0)
            out_ << ',';
        out_ << v;
        ++col_;
        return *this;
    }

    CsvWriter &CsvWriter::cell(double v) { return cell(format_real(v)); }
    CsvWriter &CsvWriter::cell(long long v) { return cell(std::to_string(v)); }
    CsvWriter &CsvWriter::cell(std::uint64_t v) { return cell(std::to_string(v)); }

    void CsvWriter::end_row()
    {
        if (col_ != width_)
            throw std::invalid_argument("csv row narrower than header");
        out_ << '\n';
        col_ = 0;
    }

    void write_runs(std::ostream &out, const std::vector<MonteCarloRun> &runs)
    {
        CsvWriter w(out, kRunsColumns);
        for (const MonteCarloRun &r : runs)
        {
            if (r.failed)
                continue;
            for (const IterationRecord &it : r.result.iterations)
            {
                w.cell(r.run).cell(to_string(r.scheme)).cell(r.seed).cell(it.iter);
                w.cell(it.rate).cell(it.terr_rate).cell(it.sat_rate);
                w.end_row();
            }
        }
    }

    void write_paths(std::ostream &out, const std::vector<MonteCarloRun> &runs)
    {
        CsvWriter w(out, kPathsColumns);
        for (const MonteCarloRun &r : runs)
        {
            if (r.failed)
                continue;
            for (const IterationRecord &it : r.result.iterations)
            {
                for (const auto &[name, path] : {std::pair<const char *, const Path *>{"uav", &it.uav_path},
                                                 std::pair<const char *, const Path *>{"hap", &it.hap_path}})
                {
                    for (std::size_t n = 0; n < path->positions.size(); ++n)
                    {
                        const Vec3 &q = path->positions[n];
                        w.cell(r.run).cell(to_string(r.scheme)).cell(it.iter).cell(static_cast<int>(n)).cell(name);
                        w.cell(q.x()).cell(q.y()).cell(q.z());
                        w.end_row();
                    }
                }
            }
        }
    }

    void write_rates(std::ostream &out, const std::vector<MonteCarloRun> &runs)
    {
        CsvWriter w(out, kRatesColumns);
        for (const MonteCarloRun &r : runs)
        {
            if (r.failed)
                continue;
            for (const IterationRecord &it : r.result.iterations)
            {
                for (std::size_t n = 0; n < it.report.slots.size(); ++n)
                {
                    const SlotReport &sr = it.report.slots[n];
                    auto emit = [&](const char *tier, const rvec &sinr, const rvec &rate) {
                        for (Eigen::Index u = 0; u < rate.size(); ++u)
                        {
                            w.cell(r.run).cell(to_string(r.scheme)).cell(it.iter).cell(static_cast<int>(n));
                            w.cell(static_cast<long long>(u)).cell(tier).cell(sinr(u)).cell(rate(u));
                            w.end_row();
                        }
                    };
                    emit("terrestrial", sr.sinr_terr, sr.rate_terr);
                    emit("satellite", sr.sinr_sat, sr.rate_sat);
                }
            }
        }
    }

    void write_summary(std::ostream &out, const std::vector<SummaryRow> &rows)
    {
        CsvWriter w(out, kSummaryColumns);
        for (const SummaryRow &row : rows)
        {
            w.cell(row.sweep_key).cell(row.value).cell(to_string(row.aggregate.scheme));
            w.cell(row.aggregate.mean).cell(row.aggregate.std_error);
            w.cell(row.aggregate.n_runs).cell(row.aggregate.n_failed);
            w.end_row();
        }
    }

    MonteCarloRun as_run(int run, RunResult result)
    {
        MonteCarloRun r;
        r.run = run;
        r.seed = result.seed;
        r.scheme = result.scheme;
        r.result = std::move(result);
        return r;
    }

    void write_file(const std::string &path, const std::string &text)
    {
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f)
            throw std::runtime_error("cannot open '" + path + "' for writing");
        f << text;
        f.flush();
        if (!f)
            throw std::runtime_error("write to '" + path + "' failed");
    }
}
