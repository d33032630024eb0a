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

#include "itntn/scene.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace itntn
{
    namespace
    {
        constexpr double kSpeedOfLight = 299792458.0;

        enum StreamPurpose : std::uint64_t
        {
            kUserPlacement = 0x7573657273ULL,
        };

        class KeyReader
        {
        public:
            explicit KeyReader(const std::map<std::string, std::string> &e) : entries_(e) {}

            bool has(const std::string &key) const { return entries_.count(key) != 0; }

            YAML::Node node(const std::string &key) const
            {
                auto it = entries_.find(key);
                if (it == entries_.end())
                    throw ConfigError("missing required key '" + key + "'");
                return YAML::Load(it->second);
            }

            double number(const std::string &key) const
            {
                try
                {
                    return node(key).as<double>();
                }
                catch (const YAML::Exception &)
                {
                    throw ConfigError("key '" + key + "' must be a number");
                }
            }

            double number_or(const std::string &key, double fallback) const
            {
                return has(key) ? number(key) : fallback;
            }

            int count(const std::string &key) const
            {
                const double v = number(key);
                if (v != std::floor(v))
                    throw ConfigError("key '" + key + "' must be an integer");
                return static_cast<int>(v);
            }

            bool flag_or(const std::string &key, bool fallback) const
            {
                if (!has(key))
                    return fallback;
                try
                {
                    return node(key).as<bool>();
                }
                catch (const YAML::Exception &)
                {
                    throw ConfigError("key '" + key + "' must be a boolean");
                }
            }

            std::string text_or(const std::string &key, const std::string &fallback) const
            {
                return has(key) ? node(key).as<std::string>() : fallback;
            }

            Vec3 point(const std::string &key) const
            {
                YAML::Node n = node(key);
                if (!n.IsSequence() || n.size() != 3)
                    throw ConfigError("key '" + key + "' must be a 3-element sequence [x, y, z]");
                return {n[0].as<double>(), n[1].as<double>(), n[2].as<double>()};
            }

            Eigen::Vector2d point2(const std::string &key) const
            {
                YAML::Node n = node(key);
                if (!n.IsSequence() || n.size() != 2)
                    throw ConfigError("key '" + key + "' must be a 2-element sequence [x, y]");
                return {n[0].as<double>(), n[1].as<double>()};
            }

        private:
            const std::map<std::string, std::string> &entries_;
        };

        void require_positive(double v, const char *name)
        {
            if (!(v > 0.0) || !std::isfinite(v))
                throw ConfigError(std::string(name) + " must be > 0");
        }

        void require_count(int v, const char *name)
        {
            if (v < 1)
                throw ConfigError(std::string(name) + " must be ≥1");
        }

        void flatten(const YAML::Node &node, const std::string &prefix, std::map<std::string, std::string> &out)
        {
            if (node.IsMap())
            {
                for (const auto &kv : node)
                {
                    const std::string k = kv.first.as<std::string>();
                    flatten(kv.second, prefix.empty() ? k : prefix + "." + k, out);
                }
                return;
            }
            YAML::Emitter em;
            em << YAML::Flow << node;
            out[prefix] = em.c_str();
        }

        std::pair<int, int> factorization(const KeyReader &r, const std::string &count_key,
                                          const std::string &nx_key)
        {
            const int n = r.count(count_key);
            require_count(n, count_key.c_str());
            if (r.has(nx_key))
            {
                const int nx = r.count(nx_key);
                if (nx < 1 || n % nx != 0)
                    throw ConfigError("key '" + nx_key + "' must divide " + count_key);
                return {nx, n / nx};
            }
            return near_square_factors(n);
        }
    }

    double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
    double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }
    double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
    double linear_to_db(double ratio) { return 10.0 * std::log10(ratio); }

    std::pair<int, int> near_square_factors(int n)
    {
        if (n < 1)
            throw ConfigError("element count must be ≥1");
        int nx = static_cast<int>(std::floor(std::sqrt(static_cast<double>(n))));
        while (n % nx != 0)
            --nx;
        return {nx, n / nx};
    }

    double Scenario::sat_wavelength() const { return kSpeedOfLight / sat_carrier_hz; }

    void Scenario::validate() const
    {
        require_count(n_slots, "n_slots");
        require_positive(slot_s, "slot_seconds");
        require_count(tbs_antennas, "tbs_antennas");
        require_count(sat_nx * sat_ny, "sat_antennas");
        require_count(n_terrestrial, "n_terrestrial");
        require_count(n_satellite, "n_satellite");
        require_count(uav.elements(), "uav_elements");
        require_count(hap.elements(), "hap_elements");

        require_positive(carrier_hz, "carrier_hz");
        require_positive(sat_carrier_hz, "sat_carrier_hz");
        require_positive(beta0, "reference_pathloss");
        require_positive(terr_radius, "terrestrial user radius");
        require_positive(sat_radius, "satellite user radius");
        require_positive(gain_sat, "gain_sat");
        require_positive(gain_user, "gain_user");
        require_positive(gain_hap, "gain_hap");
        require_positive(p_tbs, "power_tbs");
        require_positive(p_sat, "power_sat");
        require_positive(noise_terr, "noise_terrestrial");
        require_positive(noise_sat, "noise_satellite");
        if (rain_var_db2 < 0.0)
            throw ConfigError("rain variance must be ≥0");

        if (eta_tbs_terr < 2.0 || eta_tbs_uav < 2.0 || eta_uav_terr < 2.0)
            throw ConfigError("terrestrial path-loss exponents must be ≥2");
        const double ks[] = {kappa.tbs_terr, kappa.tbs_uav, kappa.uav_terr, kappa.sat_sat, kappa.sat_hap,
                             kappa.hap_sat, kappa.tbs_sat, kappa.sat_terr, kappa.uav_sat, kappa.hap_terr};
        for (double k : ks)
            if (!(k >= 0.0))
                throw ConfigError("Rician factors must be ≥0");

        for (Platform p : {Platform::uav, Platform::hap})
        {
            const AerialSpec &a = aerial(p);
            const std::string name = to_string(p);
            require_positive(a.power_budget, (name + " power budget").c_str());
            require_positive(a.noise, (name + " noise power").c_str());
            require_positive(a.rho_max, (name + " rho_max").c_str());
            require_positive(a.speed_max, (name + " speed_max").c_str());
            if (!(a.z_min > 0.0) || !(a.z_max >= a.z_min))
                throw ConfigError(name + " altitude box must satisfy 0 < z_min <= z_max");
            for (const Vec3 *e : {&a.init, &a.final})
            {
                if (p == Platform::uav && e == &a.final && uav_final_at_user_centroid)
                    continue;
                if ((*e)(2) < a.z_min || (*e)(2) > a.z_max)
                    throw ConfigError(name + " endpoint altitude outside its altitude box");
            }
            if (!(p == Platform::uav && uav_final_at_user_centroid))
            {
                const double reach = a.speed_max * slot_s * std::max(1, n_slots - 1);
                const double span = (a.final - a.init).norm();
                if (span > reach * (1.0 + 1e-12) || (n_slots == 1 && span > 0.0))
                    throw ConfigError(name + " endpoints unreachable within the frame at the speed cap");
            }
        }
        if (uav_final_at_user_centroid)
        {
            // Worst case: centroid at the edge of the terrestrial disc.
            const double reach = uav.speed_max * slot_s * std::max(1, n_slots - 1);
            const Vec3 far(tbs_position(0) + terr_radius, tbs_position(1), uav.init(2));
            if ((far - uav.init).norm() > reach * (1.0 + 1e-12) || n_slots == 1)
                throw ConfigError("uav endpoints unreachable: centroid endpoint may lie outside the speed-cap reach");
        }
    }

    ConfigDoc ConfigDoc::parse(std::string_view text)
    {
        YAML::Node root;
        try
        {
            root = YAML::Load(std::string(text));
        }
        catch (const YAML::Exception &e)
        {
            throw ConfigError(std::string("config does not parse: ") + e.what());
        }
        ConfigDoc doc;
        if (root.IsNull())
            return doc;
        if (!root.IsMap())
            throw ConfigError("config must be a key/value document");
        flatten(root, "", doc.entries_);
        return doc;
    }

    ConfigDoc ConfigDoc::from_file(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("cannot open config file '" + path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        return parse(ss.str());
    }

    void ConfigDoc::set(const std::string &key, const std::string &yaml_value) { entries_[key] = yaml_value; }

    void ConfigDoc::set(const std::string &key, double value)
    {
        std::ostringstream os;
        os.precision(17);
        os << value;
        entries_[key] = os.str();
    }

    bool ConfigDoc::is_known_key(const std::string &key)
    {
        static const std::set<std::string> known{
            "frame.slots", "frame.slot_s", "frame.duration_s",
            "antennas.tbs", "antennas.sat", "antennas.sat_nx",
            "users.terrestrial", "users.satellite", "users.terr_radius_m", "users.sat_center_xy_m",
            "users.sat_radius_m",
            "geometry.tbs_m", "geometry.sat_m",
            "carrier.tbs_hz", "carrier.sat_hz",
            "pathloss.beta0_db", "pathloss.eta_tbs_terr", "pathloss.eta_tbs_uav", "pathloss.eta_uav_terr",
            "rician.tbs_terr", "rician.tbs_uav", "rician.uav_terr", "rician.sat_sat", "rician.sat_hap",
            "rician.hap_sat", "rician.tbs_sat", "rician.sat_terr", "rician.uav_sat", "rician.hap_terr",
            "gain.sat_dbi", "gain.user_dbi", "gain.hap_dbi",
            "rain.mu_db", "rain.var_db2", "rain.model",
            "power.tbs_dbm", "power.sat_dbm", "power.uav_dbm", "power.hap_dbm",
            "noise.terr_dbm", "noise.sat_dbm", "noise.uav_dbm", "noise.hap_dbm",
            "ris.n_uav", "ris.uav_nx", "ris.n_hap", "ris.hap_nx", "ris.rho_max_uav", "ris.rho_max_hap",
            "uav.speed_max_mps", "uav.z_min_m", "uav.z_max_m", "uav.init_m", "uav.final_m",
            "uav.final_at_user_centroid",
            "hap.speed_max_mps", "hap.z_min_m", "hap.z_max_m", "hap.init_m", "hap.final_m"};
        return known.count(key) != 0;
    }

    void ConfigDoc::apply_override(const std::string &key, double value)
    {
        static const std::set<std::string> derived_counts{"ris.n_uav", "ris.n_hap", "antennas.sat"};
        static const std::map<std::string, std::string> overrides{
            {"ris.n_uav", "ris.uav_nx"}, {"ris.n_hap", "ris.hap_nx"}, {"antennas.sat", "antennas.sat_nx"}};
        if (!is_known_key(key))
            throw ConfigError("unknown key '" + key + "'");
        if (key == "frame.duration_s")
            erase("frame.slot_s");
        if (key == "frame.slot_s")
            erase("frame.duration_s");
        if (derived_counts.count(key))
            erase(overrides.at(key));
        set(key, value);
    }

    Scenario ConfigDoc::to_scenario() const
    {

        for (const auto &kv : entries_)
        {
            if (kv.first.rfind("solver.", 0) == 0)
                continue;
            if (!is_known_key(kv.first))
                throw ConfigError("unknown key '" + kv.first + "'");
        }

        KeyReader r(entries_);
        Scenario s;
        s.n_slots = r.count("frame.slots");
        require_count(s.n_slots, "n_slots");
        if (r.has("frame.duration_s") && r.has("frame.slot_s"))
            throw ConfigError("give either 'frame.slot_s' or 'frame.duration_s', not both");
        if (r.has("frame.duration_s"))
            s.slot_s = r.number("frame.duration_s") / s.n_slots;
        else
            s.slot_s = r.number("frame.slot_s");

        s.tbs_antennas = r.count("antennas.tbs");
        require_count(s.tbs_antennas, "tbs_antennas");
        std::tie(s.sat_nx, s.sat_ny) = factorization(r, "antennas.sat", "antennas.sat_nx");
        s.n_terrestrial = r.count("users.terrestrial");
        if (s.n_terrestrial < 1)
            throw ConfigError("n_terrestrial must be ≥1");
        s.n_satellite = r.count("users.satellite");
        if (s.n_satellite < 1)
            throw ConfigError("n_satellite must be ≥1");
        s.terr_radius = r.number("users.terr_radius_m");
        s.sat_center = r.point2("users.sat_center_xy_m");
        s.sat_radius = r.number("users.sat_radius_m");

        s.tbs_position = r.point("geometry.tbs_m");
        s.sat_position = r.point("geometry.sat_m");
        s.carrier_hz = r.number("carrier.tbs_hz");
        s.sat_carrier_hz = r.number("carrier.sat_hz");

        // A path-loss reference is a ratio: 0 dB at 1 m.
        s.beta0 = db_to_linear(r.number("pathloss.beta0_db"));
        s.eta_tbs_terr = r.number("pathloss.eta_tbs_terr");
        s.eta_tbs_uav = r.number("pathloss.eta_tbs_uav");
        s.eta_uav_terr = r.number("pathloss.eta_uav_terr");

        s.kappa.tbs_terr = r.number("rician.tbs_terr");
        s.kappa.tbs_uav = r.number("rician.tbs_uav");
        s.kappa.uav_terr = r.number("rician.uav_terr");
        s.kappa.sat_sat = r.number("rician.sat_sat");
        s.kappa.sat_hap = r.number("rician.sat_hap");
        s.kappa.hap_sat = r.number("rician.hap_sat");
        s.kappa.tbs_sat = r.number("rician.tbs_sat");
        s.kappa.sat_terr = r.number("rician.sat_terr");
        s.kappa.uav_sat = r.number("rician.uav_sat");
        s.kappa.hap_terr = r.number("rician.hap_terr");

        s.gain_sat = db_to_linear(r.number("gain.sat_dbi"));
        s.gain_user = db_to_linear(r.number("gain.user_dbi"));
        s.gain_hap = db_to_linear(r.number("gain.hap_dbi"));
        s.rain_mu_db = r.number("rain.mu_db");
        s.rain_var_db2 = r.number("rain.var_db2");
        const std::string rain = r.text_or("rain.model", "log_of_db_normal");
        if (rain == "log_of_db_normal")
            s.rain_model = RainModel::log_of_db_normal;
        else if (rain == "db_normal")
            s.rain_model = RainModel::db_normal;
        else
            throw ConfigError("key 'rain.model' must be log_of_db_normal or db_normal");

        s.p_tbs = dbm_to_watts(r.number("power.tbs_dbm"));
        s.p_sat = dbm_to_watts(r.number("power.sat_dbm"));
        s.uav.power_budget = dbm_to_watts(r.number("power.uav_dbm"));
        s.hap.power_budget = dbm_to_watts(r.number("power.hap_dbm"));
        s.noise_terr = dbm_to_watts(r.number("noise.terr_dbm"));
        s.noise_sat = dbm_to_watts(r.number("noise.sat_dbm"));
        s.uav.noise = dbm_to_watts(r.number("noise.uav_dbm"));
        s.hap.noise = dbm_to_watts(r.number("noise.hap_dbm"));

        std::tie(s.uav.nx, s.uav.ny) = factorization(r, "ris.n_uav", "ris.uav_nx");
        std::tie(s.hap.nx, s.hap.ny) = factorization(r, "ris.n_hap", "ris.hap_nx");
        s.uav.rho_max = r.number("ris.rho_max_uav");
        s.hap.rho_max = r.number("ris.rho_max_hap");

        s.uav.speed_max = r.number("uav.speed_max_mps");
        s.uav.z_min = r.number("uav.z_min_m");
        s.uav.z_max = r.number("uav.z_max_m");
        s.uav.init = r.point("uav.init_m");
        s.uav_final_at_user_centroid = r.flag_or("uav.final_at_user_centroid", false);
        if (s.uav_final_at_user_centroid)
        {
            if (r.has("uav.final_m"))
                throw ConfigError("key 'uav.final_m' conflicts with 'uav.final_at_user_centroid: true'");
            s.uav.final = s.uav.init;
        }
        else
        {
            s.uav.final = r.point("uav.final_m");
        }

        s.hap.speed_max = r.number("hap.speed_max_mps");
        s.hap.z_min = r.number("hap.z_min_m");
        s.hap.z_max = r.number("hap.z_max_m");
        s.hap.init = r.point("hap.init_m");
        s.hap.final = r.point("hap.final_m");

        s.validate();
        return s;
    }

    Scenario load_scenario(std::string_view config_text) { return ConfigDoc::parse(config_text).to_scenario(); }

    PathLimits path_limits(const AerialSpec &spec, double slot_s)
    {
        return PathLimits{spec.init, spec.final, spec.z_min, spec.z_max, spec.speed_max * slot_s};
    }

    PathLimits path_limits(const Scenario &s, const Deployment &dep, Platform p)
    {
        PathLimits lim = path_limits(s.aerial(p), s.slot_s);
        lim.init = p == Platform::uav ? dep.uav_init : dep.hap_init;
        lim.final = p == Platform::uav ? dep.uav_final : dep.hap_final;
        return lim;
    }

    std::string check_path(const Path &path, const PathLimits &lim, double rel_tol)
    {
        if (path.size() == 0)
            return "empty path";
        auto fmt = [](const char *what, std::size_t n) { return std::string(what) + " at slot " + std::to_string(n); };
        if ((path[0] - lim.init).norm() > rel_tol * (1.0 + lim.init.norm()))
            return "first point differs from the initial endpoint";
        if ((path[path.size() - 1] - lim.final).norm() > rel_tol * (1.0 + lim.final.norm()))
            return "last point differs from the final endpoint";
        const double zslack = rel_tol * std::max(1.0, std::abs(lim.z_max));
        for (std::size_t n = 0; n < path.size(); ++n)
        {
            if (!path[n].allFinite())
                return fmt("non-finite position", n);
            if (path[n](2) < lim.z_min - zslack || path[n](2) > lim.z_max + zslack)
                return fmt("altitude outside box", n);
            if (n + 1 < path.size() && (path[n + 1] - path[n]).norm() > lim.max_step * (1.0 + rel_tol))
                return fmt("speed cap exceeded", n);
        }
        return {};
    }

    Path straight_path(const PathLimits &lim, int n_slots)
    {
        if (n_slots < 1)
            throw ConfigError("n_slots must be ≥1");
        Path p;
        p.positions.resize(static_cast<std::size_t>(n_slots));
        const double z = lim.init(2);
        Vec3 a = lim.init, b = lim.final;
        for (int n = 0; n < n_slots; ++n)
        {
            const double t = n_slots == 1 ? 0.0 : static_cast<double>(n) / (n_slots - 1);
            Vec3 q = (1.0 - t) * a + t * b;
            // Interior points hold the initial altitude; endpoints stay exact.
            if (n != 0 && n != n_slots - 1)
                q(2) = std::clamp(z + t * (b(2) - a(2)), lim.z_min, lim.z_max);
            p[static_cast<std::size_t>(n)] = q;
        }
        if (n_slots > 1)
            p[static_cast<std::size_t>(n_slots - 1)] = b;
        if (n_slots == 1 && (b - a).norm() > 0.0)
            throw ConfigError("single-slot frame requires identical endpoints");
        const std::string err = check_path(p, lim, 1e-12);
        if (!err.empty())
            throw ConfigError("straight-line path infeasible: " + err);
        return p;
    }

    std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t purpose, std::uint64_t a, std::uint64_t b)
    {
        auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffULL); };
        auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
        std::seed_seq seq{lo(seed), hi(seed), lo(purpose), hi(purpose), lo(a), hi(a), lo(b), hi(b)};
        return std::mt19937_64(seq);
    }

    Deployment deploy_users(const Scenario &s, std::uint64_t seed)
    {
        Deployment d;
        auto rng = make_stream(seed, kUserPlacement);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        auto disc = [&](const Eigen::Vector2d &c, double radius) {
            const double r = radius * std::sqrt(unit(rng));
            const double a = 2.0 * std::numbers::pi * unit(rng);
            return Vec3(c(0) + r * std::cos(a), c(1) + r * std::sin(a), 0.0);
        };
        const Eigen::Vector2d tbs_xy = s.tbs_position.head<2>();
        for (int k = 0; k < s.n_terrestrial; ++k)
            d.terrestrial.push_back(disc(tbs_xy, s.terr_radius));
        for (int l = 0; l < s.n_satellite; ++l)
            d.satellite.push_back(disc(s.sat_center, s.sat_radius));

        d.uav_init = s.uav.init;
        d.uav_final = s.uav.final;
        if (s.uav_final_at_user_centroid)
        {
            Vec3 c = Vec3::Zero();
            for (const Vec3 &q : d.terrestrial)
                c += q;
            c /= static_cast<double>(d.terrestrial.size());
            d.uav_final = Vec3(c(0), c(1), s.uav.init(2));
        }
        d.hap_init = s.hap.init;
        d.hap_final = s.hap.final;
        return d;
    }

    InitialPaths init_paths(const Scenario &s, const Deployment &dep)
    {
        return {straight_path(path_limits(s, dep, Platform::uav), s.n_slots),
                straight_path(path_limits(s, dep, Platform::hap), s.n_slots)};
    }
}
