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

#include "itntn/channel.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

namespace itntn
{
    namespace
    {
        constexpr double kHalfWave = 0.5;
        constexpr std::uint64_t kFadingPurpose = 0x6661646500000000ULL;
        constexpr std::uint64_t kRainPurpose = 0x7261696e00000000ULL;
        constexpr char kMagic[4] = {'I', 'T', 'F', 'R'};
        constexpr std::uint32_t kFormatVersion = 1;

        cmat draw_cn(std::mt19937_64 &rng, int rows, int cols)
        {
            std::normal_distribution<double> n(0.0, 1.0);
            cmat out(rows, cols);
            const double s = 1.0 / std::numbers::sqrt2;
            for (Eigen::Index j = 0; j < out.cols(); ++j)
                for (Eigen::Index i = 0; i < out.rows(); ++i)
                {
                    const double x = n(rng);
                    const double y = n(rng);
                    out(i, j) = cplx(s * x, s * y);
                }
            return out;
        }

        template <class T>
        void put(std::ofstream &o, const T &v)
        {
            o.write(reinterpret_cast<const char *>(&v), sizeof(T));
        }

        template <class T>
        T take(std::ifstream &in)
        {
            T v{};
            in.read(reinterpret_cast<char *>(&v), sizeof(T));
            if (!in)
                throw ConfigError("fading dump truncated");
            return v;
        }

        cvec tbs_array(const Scenario &s, const LinkAngles &a)
        {
            return ula_steering(s.tbs_antennas, kHalfWave, a.psi, a.phi);
        }

        cvec sat_array(const Scenario &s, const LinkAngles &a)
        {
            return upa_steering(s.sat_nx, s.sat_ny, kHalfWave, kHalfWave, a.psi, a.phi);
        }

        cvec aerial_array(const AerialSpec &p, const LinkAngles &a)
        {
            return upa_steering(p.nx, p.ny, kHalfWave, kHalfWave, a.psi, a.phi);
        }

        double distance(const Vec3 &a, const Vec3 &b)
        {
            const double d = (a - b).norm();
            if (!(d > 0.0))
                throw ConfigError("coincident link endpoints");
            return d;
        }
    }

    cvec ula_steering(int m, double spacing_over_lambda, double psi, double phi)
    {
        if (m < 1)
            throw ConfigError("array size must be ≥1");
        cvec a(m);
        const double step = -2.0 * std::numbers::pi * spacing_over_lambda * std::cos(phi) * std::cos(psi);
        const double scale = 1.0 / std::sqrt(static_cast<double>(m));
        for (int j = 0; j < m; ++j)
            a(j) = scale * std::polar(1.0, step * j);
        return a;
    }

    cvec upa_steering(int nx, int ny, double spacing_x_over_lambda, double spacing_y_over_lambda, double psi,
                      double phi)
    {
        if (nx < 1 || ny < 1)
            throw ConfigError("array size must be ≥1");
        const double sx = -2.0 * std::numbers::pi * spacing_x_over_lambda * std::cos(phi) * std::cos(psi);
        const double sy = -2.0 * std::numbers::pi * spacing_y_over_lambda * std::cos(phi) * std::sin(psi);
        const double scale = 1.0 / std::sqrt(static_cast<double>(nx * ny));
        cvec a(nx * ny);
        for (int ix = 0; ix < nx; ++ix)
            for (int iy = 0; iy < ny; ++iy)
                a(ix * ny + iy) = scale * std::polar(1.0, sx * ix + sy * iy);
        return a;
    }

    cmat rician(const cmat &los, double kappa, double gain, const cmat &nlos_draw)
    {
        if (los.rows() != nlos_draw.rows() || los.cols() != nlos_draw.cols())
            throw ConfigError("rician: LoS and NLoS shapes differ");
        if (!(kappa >= 0.0) || !(gain > 0.0))
            throw ConfigError("rician: need kappa >= 0 and gain > 0");
        const double a = std::sqrt(kappa / (1.0 + kappa));
        const double b = std::sqrt(1.0 / (1.0 + kappa));
        return std::sqrt(gain) * (a * los + b * nlos_draw);
    }

    double terrestrial_gain(double beta0, double d, double eta)
    {
        if (!(d > 0.0))
            throw ConfigError("terrestrial_gain: distance must be > 0");
        return beta0 * std::pow(d, -eta);
    }

    double satellite_gain(double wavelength, double d, double g_tx, double g_rx, double rain)
    {
        if (!(d > 0.0))
            throw ConfigError("satellite_gain: distance must be > 0");
        const double r = wavelength / (4.0 * std::numbers::pi * d);
        return r * r * g_tx * g_rx * rain;
    }

    double sample_rain(double mu_db, double var_db2, std::mt19937_64 &rng, RainModel model)
    {
        if (var_db2 < 0.0)
            throw ConfigError("rain variance must be ≥0");
        std::normal_distribution<double> n(0.0, 1.0);
        const double x = mu_db + std::sqrt(var_db2) * n(rng);
        const double att_db = model == RainModel::log_of_db_normal ? std::exp(x) : std::max(0.0, x);
        return std::pow(10.0, -att_db / 10.0);
    }

    LinkAngles link_angles(const Vec3 &from, const Vec3 &to)
    {
        const Vec3 d = to - from;
        return {std::atan2(d(1), d(0)), std::atan2(d(2), std::hypot(d(0), d(1)))};
    }

    const char *to_string(Link l)
    {
        static const char *names[] = {"tbs_terr", "tbs_uav", "uav_terr", "sat_sat",  "sat_hap",
                                      "hap_sat",  "sat_terr", "hap_terr", "tbs_sat", "uav_sat"};
        return names[static_cast<int>(l)];
    }

    ArrayDims ArrayDims::of(const Scenario &s)
    {
        return {s.tbs_antennas, s.sat_antennas(), s.uav.elements(), s.hap.elements(), s.n_terrestrial,
                s.n_satellite};
    }

    LinkShape ArrayDims::shape(Link l) const
    {
        switch (l)
        {
        case Link::tbs_terr: return {terr, tbs};
        case Link::tbs_uav: return {uav, tbs};
        case Link::uav_terr: return {uav, terr};
        case Link::sat_sat: return {satu, sat};
        case Link::sat_hap: return {hap, sat};
        case Link::hap_sat: return {hap, satu};
        case Link::sat_terr: return {terr, sat};
        case Link::hap_terr: return {hap, terr};
        case Link::tbs_sat: return {satu, tbs};
        case Link::uav_sat: return {uav, satu};
        default: break;
        }
        throw ConfigError("unknown link class");
    }

    FadingRealization FadingRealization::generate(const Scenario &s, std::uint64_t seed)
    {
        FadingRealization r;
        r.seed_ = seed;
        r.dims_ = ArrayDims::of(s);
        r.draws_.resize(static_cast<std::size_t>(s.n_slots));
        r.rain_.resize(static_cast<std::size_t>(s.n_slots));
        for (int n = 0; n < s.n_slots; ++n)
        {
            auto &slot = r.draws_[static_cast<std::size_t>(n)];
            for (int l = 0; l < kLinkCount; ++l)
            {
                const LinkShape sh = r.dims_.shape(static_cast<Link>(l));
                auto rng = make_stream(seed, kFadingPurpose + static_cast<std::uint64_t>(l),
                                       static_cast<std::uint64_t>(n));
                slot.push_back(draw_cn(rng, sh.rows, sh.cols));
            }
            auto rng = make_stream(seed, kRainPurpose, static_cast<std::uint64_t>(n));
            r.rain_[static_cast<std::size_t>(n)] = sample_rain(s.rain_mu_db, s.rain_var_db2, rng, s.rain_model);
        }
        return r;
    }

    const cmat &FadingRealization::draw(Link l, int slot) const
    {
        return draws_.at(static_cast<std::size_t>(slot)).at(static_cast<std::size_t>(l));
    }

    bool FadingRealization::operator==(const FadingRealization &o) const
    {
        if (seed_ != o.seed_ || !(dims_ == o.dims_) || rain_ != o.rain_ || draws_.size() != o.draws_.size())
            return false;
        for (std::size_t n = 0; n < draws_.size(); ++n)
            for (std::size_t l = 0; l < draws_[n].size(); ++l)
                if (draws_[n][l] != o.draws_[n][l])
                    return false;
        return true;
    }

    void FadingRealization::save(const std::string &path) const
    {
        std::ofstream o(path, std::ios::binary);
        if (!o)
            throw ConfigError("cannot write fading dump '" + path + "'");
        o.write(kMagic, 4);
        put(o, kFormatVersion);
        put(o, seed_);
        put(o, static_cast<std::int32_t>(n_slots()));
        for (int d : {dims_.tbs, dims_.sat, dims_.uav, dims_.hap, dims_.terr, dims_.satu})
            put(o, static_cast<std::int32_t>(d));
        for (std::size_t n = 0; n < draws_.size(); ++n)
        {
            put(o, rain_[n]);
            for (const cmat &m : draws_[n])
                for (Eigen::Index j = 0; j < m.cols(); ++j)
                    for (Eigen::Index i = 0; i < m.rows(); ++i)
                    {
                        put(o, m(i, j).real());
                        put(o, m(i, j).imag());
                    }
        }
        if (!o)
            throw ConfigError("failed writing fading dump '" + path + "'");
    }

    FadingRealization FadingRealization::load(const std::string &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw ConfigError("cannot open fading dump '" + path + "'");
        char magic[4];
        in.read(magic, 4);
        if (!in || std::memcmp(magic, kMagic, 4) != 0)
            throw ConfigError("not a fading dump: bad magic");
        if (take<std::uint32_t>(in) != kFormatVersion)
            throw ConfigError("unsupported fading dump version");
        FadingRealization r;
        r.seed_ = take<std::uint64_t>(in);
        const int slots = take<std::int32_t>(in);
        int *dims[] = {&r.dims_.tbs, &r.dims_.sat, &r.dims_.uav, &r.dims_.hap, &r.dims_.terr, &r.dims_.satu};
        for (int *d : dims)
        {
            *d = take<std::int32_t>(in);
            if (*d < 1)
                throw ConfigError("fading dump has a non-positive dimension");
        }
        if (slots < 1)
            throw ConfigError("fading dump has no slots");
        for (int n = 0; n < slots; ++n)
        {
            r.rain_.push_back(take<double>(in));
            std::vector<cmat> slot;
            for (int l = 0; l < kLinkCount; ++l)
            {
                const LinkShape sh = r.dims_.shape(static_cast<Link>(l));
                cmat m(sh.rows, sh.cols);
                for (Eigen::Index j = 0; j < m.cols(); ++j)
                    for (Eigen::Index i = 0; i < m.rows(); ++i)
                    {
                        const double re = take<double>(in);
                        const double im = take<double>(in);
                        m(i, j) = cplx(re, im);
                    }
                slot.push_back(std::move(m));
            }
            r.draws_.push_back(std::move(slot));
        }
        return r;
    }

    const cmat &ChannelSet::link(Link l) const
    {
        switch (l)
        {
        case Link::tbs_terr: return tbs_terr;
        case Link::tbs_uav: return tbs_uav;
        case Link::uav_terr: return uav_terr;
        case Link::sat_sat: return sat_sat;
        case Link::sat_hap: return sat_hap;
        case Link::hap_sat: return hap_sat;
        case Link::sat_terr: return sat_terr;
        case Link::hap_terr: return hap_terr;
        case Link::tbs_sat: return tbs_sat;
        case Link::uav_sat: return uav_sat;
        default: break;
        }
        throw ConfigError("unknown link class");
    }

    ChannelSet assemble(const Scenario &s, const Deployment &dep, const Vec3 &q_uav, const Vec3 &q_hap, int slot,
                        const FadingRealization &real)
    {
        if (!(real.dims() == ArrayDims::of(s)))
            throw ConfigError("fading realization dimensions do not match the scenario");
        if (slot < 0 || slot >= real.n_slots())
            throw ConfigError("slot index outside the realization");
        const int K = s.n_terrestrial, L = s.n_satellite;
        const double lam = s.sat_wavelength();
        const double rain = real.rain(slot);
        const RicianFactors &kf = s.kappa;
        auto nlos = [&](Link l) -> const cmat & { return real.draw(l, slot); };

        ChannelSet c;
        c.rain = rain;
        c.tbs_terr.resize(K, s.tbs_antennas);
        c.uav_terr.resize(s.uav.elements(), K);
        c.sat_terr.resize(K, s.sat_antennas());
        c.hap_terr.resize(s.hap.elements(), K);
        c.d_tbs_terr.resize(K);
        c.d_uav_terr.resize(K);
        for (int k = 0; k < K; ++k)
        {
            const Vec3 &qk = dep.terrestrial[static_cast<std::size_t>(k)];
            {
                const double d = distance(s.tbs_position, qk);
                const cmat los = tbs_array(s, link_angles(s.tbs_position, qk)).adjoint();
                c.tbs_terr.row(k) = rician(los, kf.tbs_terr, terrestrial_gain(s.beta0, d, s.eta_tbs_terr),
                                           nlos(Link::tbs_terr).row(k));
                c.d_tbs_terr(k) = d;
            }
            {
                const double d = distance(q_uav, qk);
                const cmat los = aerial_array(s.uav, link_angles(q_uav, qk));
                c.uav_terr.col(k) = rician(los, kf.uav_terr, terrestrial_gain(s.beta0, d, s.eta_uav_terr),
                                           nlos(Link::uav_terr).col(k));
                c.d_uav_terr(k) = d;
            }
            {
                const double d = distance(s.sat_position, qk);
                const cmat los = sat_array(s, link_angles(s.sat_position, qk)).adjoint();
                c.sat_terr.row(k) = rician(los, kf.sat_terr, satellite_gain(lam, d, s.gain_sat, s.gain_user, rain),
                                           nlos(Link::sat_terr).row(k));
            }
            {
                const double d = distance(q_hap, qk);
                const cmat los = aerial_array(s.hap, link_angles(q_hap, qk));
                c.hap_terr.col(k) = rician(los, kf.hap_terr, satellite_gain(lam, d, s.gain_hap, s.gain_user, rain),
                                           nlos(Link::hap_terr).col(k));
            }
        }

        c.sat_sat.resize(L, s.sat_antennas());
        c.hap_sat.resize(s.hap.elements(), L);
        c.tbs_sat.resize(L, s.tbs_antennas);
        c.uav_sat.resize(s.uav.elements(), L);
        c.d_sat_sat.resize(L);
        c.d_hap_sat.resize(L);
        for (int l = 0; l < L; ++l)
        {
            const Vec3 &ql = dep.satellite[static_cast<std::size_t>(l)];
            {
                const double d = distance(s.sat_position, ql);
                const cmat los = sat_array(s, link_angles(s.sat_position, ql)).adjoint();
                c.sat_sat.row(l) = rician(los, kf.sat_sat, satellite_gain(lam, d, s.gain_sat, s.gain_user, rain),
                                          nlos(Link::sat_sat).row(l));
                c.d_sat_sat(l) = d;
            }
            {
                const double d = distance(q_hap, ql);
                const cmat los = aerial_array(s.hap, link_angles(q_hap, ql));
                c.hap_sat.col(l) = rician(los, kf.hap_sat, satellite_gain(lam, d, s.gain_hap, s.gain_user, rain),
                                          nlos(Link::hap_sat).col(l));
                c.d_hap_sat(l) = d;
            }
            {
                const double d = distance(s.tbs_position, ql);
                const cmat los = tbs_array(s, link_angles(s.tbs_position, ql)).adjoint();
                c.tbs_sat.row(l) = rician(los, kf.tbs_sat, terrestrial_gain(s.beta0, d, s.eta_tbs_terr),
                                          nlos(Link::tbs_sat).row(l));
            }
            {
                const double d = distance(q_uav, ql);
                const cmat los = aerial_array(s.uav, link_angles(q_uav, ql));
                c.uav_sat.col(l) = rician(los, kf.uav_sat, terrestrial_gain(s.beta0, d, s.eta_uav_terr),
                                          nlos(Link::uav_sat).col(l));
            }
        }

        {
            const double d = distance(s.tbs_position, q_uav);
            const LinkAngles a = link_angles(s.tbs_position, q_uav);
            const cmat los = aerial_array(s.uav, a) * tbs_array(s, a).adjoint();
            c.tbs_uav = rician(los, kf.tbs_uav, terrestrial_gain(s.beta0, d, s.eta_tbs_uav), nlos(Link::tbs_uav));
            c.d_tbs_uav = d;
        }
        {
            const double d = distance(s.sat_position, q_hap);
            const LinkAngles a = link_angles(s.sat_position, q_hap);
            const cmat los = aerial_array(s.hap, a) * sat_array(s, a).adjoint();
            c.sat_hap = rician(los, kf.sat_hap, satellite_gain(lam, d, s.gain_sat, s.gain_hap, 1.0),
                               nlos(Link::sat_hap));
            c.d_sat_hap = d;
        }
        return c;
    }

    std::vector<ChannelSet> assemble_frame(const Scenario &s, const Deployment &dep, const Path &uav,
                                           const Path &hap, const FadingRealization &real)
    {
        if (uav.size() != static_cast<std::size_t>(s.n_slots) || hap.size() != static_cast<std::size_t>(s.n_slots))
            throw ConfigError("path length differs from the slot count");
        std::vector<ChannelSet> out;
        out.reserve(uav.size());
        for (int n = 0; n < s.n_slots; ++n)
            out.push_back(assemble(s, dep, uav[static_cast<std::size_t>(n)], hap[static_cast<std::size_t>(n)], n,
                                   real));
        return out;
    }

    crow effective(const crow &direct, const cvec &ris_user, const cvec &phi, const cmat &bs_ris)
    {
        if (ris_user.size() != phi.size() || bs_ris.rows() != phi.size() || bs_ris.cols() != direct.size())
            throw ConfigError("effective: shape mismatch");
        return direct + ris_user.conjugate().cwiseProduct(phi).transpose() * bs_ris;
    }
}
