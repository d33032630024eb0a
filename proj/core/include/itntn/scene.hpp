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

#ifndef ITNTN_SCENE_HPP
#define ITNTN_SCENE_HPP

#include "itntn/types.hpp"

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace itntn
{
    double dbm_to_watts(double dbm);
    double watts_to_dbm(double watts);
    double db_to_linear(double db);
    double linear_to_db(double ratio);

    // Factor n into nx*ny with nx the largest divisor not exceeding sqrt(n).
    std::pair<int, int> near_square_factors(int n);

    enum class RainModel
    {
        log_of_db_normal, // ln(attenuation_dB) ~ N(mu, var)
        db_normal         // attenuation_dB ~ N(mu, var), clamped at 0
    };

    // Per-platform description shared by the UAV and HAP reflecting surfaces.
    struct AerialSpec
    {
        int nx = 1;
        int ny = 1;
        double power_budget = 0.0; // W
        double noise = 0.0;        // W, per element
        double rho_max = 1.0;
        double speed_max = 0.0; // m/s
        double z_min = 0.0;
        double z_max = 0.0;
        Vec3 init = Vec3::Zero();
        Vec3 final = Vec3::Zero();

        int elements() const { return nx * ny; }
    };

    struct RicianFactors
    {
        double tbs_terr = 5;  // TBS -> terrestrial user
        double tbs_uav = 8;   // TBS -> UAV-ARIS
        double uav_terr = 5;  // UAV-ARIS -> terrestrial user
        double sat_sat = 3;   // SAT -> satellite user
        double sat_hap = 6;   // SAT -> HAP-ARIS
        double hap_sat = 3;   // HAP-ARIS -> satellite user
        double tbs_sat = 5;   // TBS -> satellite user
        double sat_terr = 3;  // SAT -> terrestrial user
        double uav_sat = 5;   // UAV-ARIS -> satellite user
        double hap_terr = 3;  // HAP-ARIS -> terrestrial user
    };

    struct Scenario
    {
        int n_slots = 1;
        double slot_s = 1.0;

        int tbs_antennas = 1;
        int sat_nx = 1;
        int sat_ny = 1;
        int n_terrestrial = 1;
        int n_satellite = 1;

        Vec3 tbs_position = Vec3::Zero();
        Vec3 sat_position = Vec3::Zero();
        double terr_radius = 300.0;
        Eigen::Vector2d sat_center{1500.0, 800.0};
        double sat_radius = 500.0;
        bool uav_final_at_user_centroid = false;

        double carrier_hz = 3.5e9;
        double sat_carrier_hz = 20e9;
        double beta0 = 1.0;
        double eta_tbs_terr = 3.5;
        double eta_tbs_uav = 2.2;
        double eta_uav_terr = 2.2;
        RicianFactors kappa;

        double gain_sat = 1000.0;
        double gain_user = 1.0;
        double gain_hap = db_to_linear(14.0);
        double rain_mu_db = -2.6;
        double rain_var_db2 = 1.63;
        RainModel rain_model = RainModel::log_of_db_normal;

        double p_tbs = 0.0;
        double p_sat = 0.0;
        double noise_terr = 0.0;
        double noise_sat = 0.0;

        AerialSpec uav;
        AerialSpec hap;

        int sat_antennas() const { return sat_nx * sat_ny; }
        double frame_seconds() const { return n_slots * slot_s; }
        const AerialSpec &aerial(Platform p) const { return p == Platform::uav ? uav : hap; }
        AerialSpec &aerial(Platform p) { return p == Platform::uav ? uav : hap; }
        double sat_wavelength() const;

        // Throws ConfigError naming the first violated invariant.
        void validate() const;
    };

    // Flat dotted-key configuration document. Values stay textual until
    // to_scenario() so sweeps can override individual keys.
    class ConfigDoc
    {
    public:
        static ConfigDoc parse(std::string_view text);
        static ConfigDoc from_file(const std::string &path);

        bool has(const std::string &key) const { return entries_.count(key) != 0; }
        void set(const std::string &key, const std::string &yaml_value);
        void set(const std::string &key, double value);
        void erase(const std::string &key) { entries_.erase(key); }
        const std::map<std::string, std::string> &entries() const { return entries_; }

        static bool is_known_key(const std::string &key);

        // Applies a swept key; derived keys such as ris.n_uav drop any explicit
        // factorization override. Throws ConfigError for keys outside the schema.
        void apply_override(const std::string &key, double value);

        Scenario to_scenario() const;

    private:
        std::map<std::string, std::string> entries_;
    };

    Scenario load_scenario(std::string_view config_text);

    struct Path
    {
        std::vector<Vec3> positions;

        std::size_t size() const { return positions.size(); }
        const Vec3 &operator[](std::size_t n) const { return positions[n]; }
        Vec3 &operator[](std::size_t n) { return positions[n]; }
        bool operator==(const Path &) const = default;
    };

    // Constraints a path must satisfy for one platform.
    struct PathLimits
    {
        Vec3 init;
        Vec3 final;
        double z_min;
        double z_max;
        double max_step; // V_max * slot duration
    };

    PathLimits path_limits(const AerialSpec &spec, double slot_s);

    // Returns an empty string when the path is feasible, else a description.
    std::string check_path(const Path &path, const PathLimits &lim, double rel_tol = 1e-9);

    // Straight line between the endpoints at the init altitude. Throws
    // ConfigError if a step exceeds the speed cap.
    Path straight_path(const PathLimits &lim, int n_slots);

    // Random per-run placement of users and the centroid-driven UAV endpoint.
    struct Deployment
    {
        std::vector<Vec3> terrestrial;
        std::vector<Vec3> satellite;
        Vec3 uav_init;
        Vec3 uav_final;
        Vec3 hap_init;
        Vec3 hap_final;
    };

    Deployment deploy_users(const Scenario &s, std::uint64_t seed);

    struct InitialPaths
    {
        Path uav;
        Path hap;
    };

    InitialPaths init_paths(const Scenario &s, const Deployment &dep);

    // Limits for a platform with the endpoints resolved by the deployment.
    PathLimits path_limits(const Scenario &s, const Deployment &dep, Platform p);

    // Independent deterministic stream for a (seed, purpose, a, b) tuple.
    std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t purpose, std::uint64_t a = 0, std::uint64_t b = 0);
}

#endif
