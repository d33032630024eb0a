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

#ifndef ITNTN_BCD_HPP
#define ITNTN_BCD_HPP

#include "itntn/aris.hpp"
#include "itntn/init_state.hpp"
#include "itntn/trajectory.hpp"
#include "itntn/wmmse.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace itntn
{
    enum class SchemeTag
    {
        proposed_active,
        passive_ris,
        random_ris,
        no_ris,
        fixed_trajectory,
        sdma_active
    };

    struct Scheme
    {
        SchemeTag tag = SchemeTag::proposed_active;
        RisMode mode = RisMode::active;
        Access access = Access::noma;
        bool optimize_phases = true;
        bool optimize_amplitudes = true;
        bool move_paths = true;

        static Scheme of(SchemeTag tag);
        static Scheme parse(const std::string &name);
        static std::vector<Scheme> all();
        const char *name() const;
    };

    const char *to_string(SchemeTag t);

    // Raised when an optimizer block fails; names the block.
    class BlockFault : public NumericalFault
    {
    public:
        BlockFault(const std::string &block, const std::string &what)
            : NumericalFault(block + " block: " + what), block_(block)
        {
        }
        const std::string &block() const { return block_; }

    private:
        std::string block_;
    };

    struct BcdOptions
    {
        double eps = 1e-3;
        int t_max = 30;
        // Weight refreshes inside one surface block; stops early once a pass gains < eps/10.
        int aris_passes = 1;
        // Extrapolate each surface update along its own direction (see WmmseOptions::max_stretch).
        bool aris_stretch = false;
        WmmseOptions wmmse;
        ArisOptions aris;
        TrajectoryOptions trajectory;
    };

    struct BlockTimes
    {
        double wmmse = 0.0;
        double uav_aris = 0.0;
        double hap_aris = 0.0;
        double trajectory = 0.0;
    };

    // Snapshot after one outer iteration (iteration 0 is the initial state).
    struct IterationRecord
    {
        int iter = 0;
        double rate = 0.0;
        double terr_rate = 0.0;
        double sat_rate = 0.0;
        // True-rate change credited to each block: wmmse, uav-aris, hap-aris, trajectory.
        std::array<double, 4> block_gain{};
        RateReport report;
        Path uav_path;
        Path hap_path;
    };

    struct RunResult
    {
        SchemeTag scheme = SchemeTag::proposed_active;
        std::uint64_t seed = 0;
        std::vector<IterationRecord> iterations;
        NetworkState final_state;
        Deployment deployment;
        DecodingPlan plan;
        std::vector<ChannelSet> final_channels;
        InitialPaths initial_paths;
        BlockTimes wall;
        bool converged = false;
        // Smallest change of the true average sum-rate over any accepted block.
        double min_block_gain = 0.0;
        // Largest relative surrogate gap at an expansion point.
        double max_tightness_gap = 0.0;
        // Amplitude SCA and trajectory moves that decreased their true objective.
        int amp_violations = 0;

        std::vector<double> trace() const;
        double final_rate() const { return iterations.back().rate; }
    };

    RunResult bcd_solve(const Scenario &s, const Scheme &scheme, std::uint64_t seed, const BcdOptions &opt = {});

    std::vector<RunResult> run_scheme_suite(const Scenario &s, const std::vector<Scheme> &schemes, std::uint64_t seed,
                                            const BcdOptions &opt = {});

    struct SchemeAggregate
    {
        SchemeTag scheme = SchemeTag::proposed_active;
        double mean = 0.0;
        double std_error = 0.0;
        int n_runs = 0;
        int n_failed = 0;
    };

    struct MonteCarloRun
    {
        int run = 0;
        std::uint64_t seed = 0;
        SchemeTag scheme = SchemeTag::proposed_active;
        bool failed = false;
        std::string error;
        RunResult result;
    };

    struct MonteCarloTable
    {
        std::vector<SchemeAggregate> aggregates; // in scheme order
        std::vector<MonteCarloRun> runs;         // run-major, scheme-minor
    };

    // Runs seeds base_seed + i for i < n_runs on `workers` threads.
    MonteCarloTable monte_carlo(const Scenario &s, const std::vector<Scheme> &schemes, int n_runs,
                                std::uint64_t base_seed, int workers, const BcdOptions &opt = {});
}

#endif
