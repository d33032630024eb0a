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

// Command-line front end: single runs, convergence traces, parameter sweeps.

#include "itntn/bcd.hpp"
#include "itntn/csv.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

namespace
{
    using namespace itntn;

    struct Common
    {
        std::string config;
        std::string out_dir = ".";
        std::uint64_t seed = 1;
        double tol = -1.0;
        int max_iter = -1;
        int workers = 1;
    };

    double solver_value(const ConfigDoc &doc, const std::string &key, double fallback)
    {
        const auto it = doc.entries().find(key);
        if (it == doc.entries().end())
            return fallback;
        try
        {
            std::size_t used = 0;
            const double v = std::stod(it->second, &used);
            if (used != it->second.size())
                throw std::invalid_argument(it->second);
            return v;
        }
        catch (const std::exception &)
        {
            throw ConfigError("key '" + key + "' must be a number");
        }
    }

    BcdOptions options_for(const ConfigDoc &doc, const Common &c)
    {
        BcdOptions opt;
        opt.eps = c.tol > 0.0 ? c.tol : solver_value(doc, "solver.eps", opt.eps);
        opt.t_max = c.max_iter >= 0 ? c.max_iter
                                    : static_cast<int>(solver_value(doc, "solver.max_iter", opt.t_max));
        if (!(opt.eps > 0.0))
            throw ConfigError("key 'solver.eps' must be > 0");
        if (opt.t_max < 0)
            throw ConfigError("key 'solver.max_iter' must be ≥0");
        return opt;
    }

    std::vector<Scheme> parse_schemes(const std::vector<std::string> &names)
    {
        std::vector<Scheme> out;
        for (const std::string &n : names)
            out.push_back(Scheme::parse(n));
        if (out.empty())
            throw ConfigError("at least one scheme is required");
        return out;
    }

    std::filesystem::path prepare_dir(const std::string &dir)
    {
        std::filesystem::create_directories(dir);
        return std::filesystem::path(dir);
    }

    template <class Writer, class Data>
    void emit(const std::filesystem::path &file, Writer writer, const Data &data)
    {
        std::ostringstream os;
        writer(os, data);
        write_file(file.string(), os.str());
    }

    int cmd_run(const Common &c, const std::string &scheme_name)
    {
        const ConfigDoc doc = ConfigDoc::from_file(c.config);
        const Scenario s = doc.to_scenario();
        const BcdOptions opt = options_for(doc, c);
        const Scheme scheme = Scheme::parse(scheme_name);
        std::vector<MonteCarloRun> runs;
        runs.push_back(as_run(0, bcd_solve(s, scheme, c.seed, opt)));
        const auto dir = prepare_dir(c.out_dir);
        emit(dir / "runs.csv", write_runs, runs);
        emit(dir / "paths.csv", write_paths, runs);
        emit(dir / "rates.csv", write_rates, runs);
        const RunResult &r = runs.front().result;
        std::printf("%s seed=%llu iterations=%zu converged=%s avg_sum_rate=%.6f\n", scheme.name(),
                    static_cast<unsigned long long>(c.seed), r.iterations.size() - 1, r.converged ? "yes" : "no",
                    r.final_rate());
        return 0;
    }

    int cmd_convergence(const Common &c, const std::vector<std::string> &names)
    {
        const ConfigDoc doc = ConfigDoc::from_file(c.config);
        const Scenario s = doc.to_scenario();
        const BcdOptions opt = options_for(doc, c);
        const std::vector<Scheme> schemes = parse_schemes(names);
        std::vector<MonteCarloRun> runs;
        for (RunResult &r : run_scheme_suite(s, schemes, c.seed, opt))
            runs.push_back(as_run(0, std::move(r)));
        const auto dir = prepare_dir(c.out_dir);
        emit(dir / "convergence.csv", write_runs, runs);
        emit(dir / "paths.csv", write_paths, runs);
        for (const MonteCarloRun &r : runs)
            std::printf("%-17s iterations=%zu converged=%s avg_sum_rate=%.6f\n", to_string(r.scheme),
                        r.result.iterations.size() - 1, r.result.converged ? "yes" : "no", r.result.final_rate());
        return 0;
    }

    std::vector<double> parse_grid(const std::string &text)
    {
        std::vector<double> grid;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ','))
        {
            try
            {
                std::size_t used = 0;
                grid.push_back(std::stod(item, &used));
                if (used != item.size())
                    throw std::invalid_argument(item);
            }
            catch (const std::exception &)
            {
                throw ConfigError("grid value '" + item + "' is not a number");
            }
        }
        if (grid.empty())
            throw ConfigError("sweep grid must be nonempty");
        for (std::size_t i = 1; i < grid.size(); ++i)
            if (!(grid[i] > grid[i - 1]))
                throw ConfigError("sweep grid must be strictly increasing");
        return grid;
    }

    int cmd_sweep(const Common &c, const std::string &key, const std::string &grid_text,
                  const std::vector<std::string> &names, int n_runs)
    {
        const ConfigDoc base = ConfigDoc::from_file(c.config);
        const BcdOptions opt = options_for(base, c);
        const std::vector<Scheme> schemes = parse_schemes(names);
        const std::vector<double> grid = parse_grid(grid_text);
        if (key.empty())
            throw ConfigError("--sweep-key is required");
        if (!ConfigDoc::is_known_key(key))
            throw ConfigError("unknown key '" + key + "'");

        std::vector<SummaryRow> rows;
        for (double value : grid)
        {
            try
            {
                ConfigDoc doc = base;
                doc.apply_override(key, value);
                const Scenario s = doc.to_scenario();
                const MonteCarloTable table = monte_carlo(s, schemes, n_runs, c.seed, c.workers, opt);
                for (const SchemeAggregate &a : table.aggregates)
                    rows.push_back({key, value, a});
            }
            catch (const ConfigError &e)
            {
                std::fprintf(stderr, "sweep point %s=%g rejected: %s\n", key.c_str(), value, e.what());
                for (const Scheme &sc : schemes)
                {
                    SchemeAggregate a;
                    a.scheme = sc.tag;
                    a.mean = a.std_error = std::numeric_limits<double>::quiet_NaN();
                    a.n_failed = n_runs;
                    rows.push_back({key, value, a});
                }
            }
        }
        const auto dir = prepare_dir(c.out_dir);
        emit(dir / "summary.csv", write_summary, rows);
        for (const SummaryRow &r : rows)
            std::printf("%s=%-10g %-17s mean=%.6f stderr=%.6f n=%d failed=%d\n", key.c_str(), r.value,
                        to_string(r.aggregate.scheme), r.aggregate.mean, r.aggregate.std_error, r.aggregate.n_runs,
                        r.aggregate.n_failed);
        return 0;
    }

    int cmd_dump_fading(const Common &c, const std::string &file)
    {
        const Scenario s = ConfigDoc::from_file(c.config).to_scenario();
        const FadingRealization real = FadingRealization::generate(s, c.seed);
        real.save(file);
        std::printf("wrote %s (seed=%llu, %d slots)\n", file.c_str(), static_cast<unsigned long long>(c.seed),
                    s.n_slots);
        return 0;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"itntn: dual-aerial active-RIS NOMA network optimizer"};
    app.require_subcommand(1);
    Common c;
    std::string scheme = "proposed_active";
    std::vector<std::string> schemes;
    std::string sweep_key, grid, fading_out = "fading.bin";
    int n_runs = 1;

    auto common = [&](CLI::App *sub, bool solver) {
        sub->add_option("--config", c.config, "scenario YAML file")->required()->check(CLI::ExistingFile);
        sub->add_option("--seed", c.seed, "run seed (base seed for sweeps)");
        if (solver)
        {
            sub->add_option("--out-dir", c.out_dir, "directory for CSV output");
            sub->add_option("--tol", c.tol, "outer stopping threshold on the average sum-rate change");
            sub->add_option("--max-iter", c.max_iter, "maximum outer iterations");
        }
    };

    CLI::App *run = app.add_subcommand("run", "optimize one scheme on one seed");
    common(run, true);
    run->add_option("--scheme", scheme, "scheme tag");

    CLI::App *conv = app.add_subcommand("convergence", "per-iteration traces for several schemes on one seed");
    common(conv, true);
    conv->add_option("--scheme", schemes, "scheme tags (repeatable or comma separated)")->delimiter(',');

    CLI::App *sweep = app.add_subcommand("sweep", "Monte Carlo sweep over one configuration key");
    common(sweep, true);
    sweep->add_option("--scheme", schemes, "scheme tags (repeatable or comma separated)")->delimiter(',');
    sweep->add_option("--sweep-key", sweep_key, "dotted configuration key")->required();
    sweep->add_option("--grid", grid, "comma-separated, strictly increasing values")->required();
    sweep->add_option("--runs", n_runs, "runs per grid point")->check(CLI::PositiveNumber);
    sweep->add_option("--workers", c.workers, "worker threads")->check(CLI::PositiveNumber);

    CLI::App *dump = app.add_subcommand("dump-fading", "write the small-scale fading draw for a seed");
    common(dump, false);
    dump->add_option("--out", fading_out, "output file");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (run->parsed())
            return cmd_run(c, scheme);
        if (schemes.empty())
            schemes = {"proposed_active"};
        if (conv->parsed())
            return cmd_convergence(c, schemes);
        if (sweep->parsed())
            return cmd_sweep(c, sweep_key, grid, schemes, n_runs);
        return cmd_dump_fading(c, fading_out);
    }
    catch (const ConfigError &e)
    {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    }
    catch (const std::exception &e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
