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

#include <ostream>
#include <string>
#include <vector>

namespace itntn
{
    // Shortest decimal text that round-trips a double (17 significant digits).
    std::string format_real(double x);

    // Streams comma-separated rows with a fixed header. Rows shorter or longer
    // than the header throw std::invalid_argument.
    class CsvWriter
    {
    public:
        CsvWriter(std::ostream &out, std::vector<std::string> header);

        CsvWriter &cell(const std::string &v);
        CsvWriter &cell(const char *v) { return cell(std::string(v)); }
        CsvWriter &cell(double v);
        CsvWriter &cell(long long v);
        CsvWriter &cell(int v) { return cell(static_cast<long long>(v)); }
        CsvWriter &cell(std::uint64_t v);
        void end_row();

    private:
        std::ostream &out_;
        std::size_t width_;
        std::size_t col_ = 0;
    };

    extern const std::vector<std::string> kRunsColumns;
    extern const std::vector<std::string> kPathsColumns;
    extern const std::vector<std::string> kRatesColumns;
    extern const std::vector<std::string> kSummaryColumns;

    void write_runs(std::ostream &out, const std::vector<MonteCarloRun> &runs);
    void write_paths(std::ostream &out, const std::vector<MonteCarloRun> &runs);
    void write_rates(std::ostream &out, const std::vector<MonteCarloRun> &runs);

    struct SummaryRow
    {
        std::string sweep_key;
        double value = 0.0;
        SchemeAggregate aggregate;
    };

    void write_summary(std::ostream &out, const std::vector<SummaryRow> &rows);

    // Wraps a single finished run so it can go through the table writers.
    MonteCarloRun as_run(int run, RunResult result);

    // Writes text to a file with LF endings; throws std::runtime_error on I/O failure.
    void write_file(const std::string &path, const std::string &text);
}
