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

#ifndef ITNTN_TYPES_HPP
#define ITNTN_TYPES_HPP

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace itntn
{
    using cplx = std::complex<double>;
    using cvec = Eigen::VectorXcd;
    using crow = Eigen::RowVectorXcd;
    using cmat = Eigen::MatrixXcd;
    using rvec = Eigen::VectorXd;
    using Vec3 = Eigen::Vector3d;

    // Raised for invalid configuration or malformed caller input.
    class ConfigError : public std::invalid_argument
    {
    public:
        explicit ConfigError(const std::string &what) : std::invalid_argument(what) {}
    };

    // Raised when a numerical routine cannot continue (bracket not found,
    // retraction collapse, internal invariant broken).
    class NumericalFault : public std::runtime_error
    {
    public:
        explicit NumericalFault(const std::string &what) : std::runtime_error(what) {}
    };

    enum class Tier
    {
        terrestrial,
        satellite
    };

    enum class Platform
    {
        uav,
        hap
    };

    inline const char *to_string(Tier t) { return t == Tier::terrestrial ? "terrestrial" : "satellite"; }
    inline const char *to_string(Platform p) { return p == Platform::uav ? "uav" : "hap"; }
}

#endif
