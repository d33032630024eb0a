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

#ifndef ITNTN_CHANNEL_HPP
#define ITNTN_CHANNEL_HPP

#include "itntn/scene.hpp"
#include "itntn/types.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace itntn
{
    // Unit-norm uniform linear array response.
    cvec ula_steering(int m, double spacing_over_lambda, double psi, double phi);

    // Unit-norm uniform planar array response, kron(x-factor, y-factor);
    // entry ix*ny + iy.
    cvec upa_steering(int nx, int ny, double spacing_x_over_lambda, double spacing_y_over_lambda, double psi,
                      double phi);

    // sqrt(gain) * (sqrt(k/(1+k)) los + sqrt(1/(1+k)) nlos)
    cmat rician(const cmat &los, double kappa, double gain, const cmat &nlos_draw);

    double terrestrial_gain(double beta0, double d, double eta);
    double satellite_gain(double wavelength, double d, double g_tx, double g_rx, double rain);
    double sample_rain(double mu_db, double var_db2, std::mt19937_64 &rng,
                       RainModel model = RainModel::log_of_db_normal);

    struct LinkAngles
    {
        double psi; // azimuth
        double phi; // elevation
    };

    // Angles of the vector pointing from `from` toward `to`.
    LinkAngles link_angles(const Vec3 &from, const Vec3 &to);

    // Link classes in realization order.
    enum class Link : int
    {
        tbs_terr, // K x Mb, row per user
        tbs_uav,  // NU x Mb
        uav_terr, // NU x K, column per user
        sat_sat,  // L x Ms
        sat_hap,  // NH x Ms
        hap_sat,  // NH x L
        sat_terr, // K x Ms
        hap_terr, // NH x K
        tbs_sat,  // L x Mb
        uav_sat,  // NU x L
        count
    };

    constexpr int kLinkCount = static_cast<int>(Link::count);
    const char *to_string(Link l);

    struct LinkShape
    {
        int rows;
        int cols;
    };

    struct ArrayDims
    {
        int tbs = 1, sat = 1, uav = 1, hap = 1, terr = 1, satu = 1;

        static ArrayDims of(const Scenario &s);
        LinkShape shape(Link l) const;
        bool operator==(const ArrayDims &) const = default;
    };

    // Seeded small-scale draws for a whole frame.
    class FadingRealization
    {
    public:
        static FadingRealization generate(const Scenario &s, std::uint64_t seed);

        // Binary replay format: magic "ITFR", u32 version, u64 seed, i32 slots,
        // six i32 dims, then per slot one f64 rain followed by every link in
        // Link order as column-major (re, im) f64 pairs. Little-endian host.
        void save(const std::string &path) const;
        static FadingRealization load(const std::string &path);

        std::uint64_t seed() const { return seed_; }
        int n_slots() const { return static_cast<int>(rain_.size()); }
        const ArrayDims &dims() const { return dims_; }
        const cmat &draw(Link l, int slot) const;
        double rain(int slot) const { return rain_.at(static_cast<std::size_t>(slot)); }

        bool operator==(const FadingRealization &o) const;

    private:
        std::uint64_t seed_ = 0;
        ArrayDims dims_;
        std::vector<std::vector<cmat>> draws_; // [slot][link]
        std::vector<double> rain_;
    };

    // Every channel of one slot for given aerial positions.
    struct ChannelSet
    {
        cmat tbs_terr; // h_{b,k} rows
        cmat tbs_uav;  // H_{b,U}
        cmat uav_terr; // h_{U,k} columns
        cmat sat_sat;  // h_{s,l} rows
        cmat sat_hap;  // H_{s,H}
        cmat hap_sat;  // h_{H,l} columns
        cmat sat_terr; // h_{s,k} rows
        cmat hap_terr; // h_{H,k} columns
        cmat tbs_sat;  // h_{b,l} rows
        cmat uav_sat;  // h_{U,l} columns

        rvec d_tbs_terr;
        double d_tbs_uav = 0.0;
        rvec d_uav_terr;
        rvec d_sat_sat;
        double d_sat_hap = 0.0;
        rvec d_hap_sat;
        double rain = 1.0;

        const cmat &link(Link l) const;
    };

    ChannelSet assemble(const Scenario &s, const Deployment &dep, const Vec3 &q_uav, const Vec3 &q_hap, int slot,
                        const FadingRealization &real);

    // Channels for every slot along the given paths.
    std::vector<ChannelSet> assemble_frame(const Scenario &s, const Deployment &dep, const Path &uav,
                                           const Path &hap, const FadingRealization &real);

    // direct + ris_user^H diag(phi) bs_ris
    crow effective(const crow &direct, const cvec &ris_user, const cvec &phi, const cmat &bs_ris);
}

#endif
