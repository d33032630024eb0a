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

#include "itntn/manifold.hpp"

#include <cmath>

namespace itntn
{
    namespace
    {
        constexpr int kMaxBacktracks = 50;
        constexpr int kRetractRetries = 30;
    }

    double QuadraticObjective::value(const cvec &theta) const
    {
        return (theta.adjoint() * Q * theta).value().real() - 2.0 * (theta.adjoint() * q).value().real();
    }

    void QuadraticObjective::validate() const
    {
        if (Q.rows() != Q.cols() || Q.rows() != q.size())
            throw ConfigError("quadratic objective: shape mismatch");
        const double scale = std::max(1.0, Q.norm());
        if ((Q - Q.adjoint()).norm() > 1e-10 * scale)
            throw ConfigError("quadratic objective: Q is not Hermitian");
    }

    double real_inner(const cvec &a, const cvec &b) { return a.dot(b).real(); }

    cvec euclid_grad(const QuadraticObjective &obj, const cvec &theta) { return 2.0 * (obj.Q * theta - obj.q); }

    cvec project_tangent(const cvec &g, const cvec &theta)
    {
        const rvec normal = (g.array() * theta.array().conjugate()).real();
        return g - (normal.array().cast<cplx>() * theta.array()).matrix();
    }

    cvec transport(const cvec &zeta, const cvec &theta_new) { return project_tangent(zeta, theta_new); }

    cvec retract(const cvec &theta, const cvec &step)
    {
        cvec s = step;
        for (int attempt = 0; attempt <= kRetractRetries; ++attempt)
        {
            const cvec x = theta + s;
            const rvec mag = x.cwiseAbs();
            if ((mag.array() > 0.0).all() && mag.allFinite())
                return (x.array() / mag.array().cast<cplx>()).matrix();
            s *= 0.5;
        }
        throw NumericalFault("retraction collapsed to a zero element");
    }

    ArmijoResult armijo_step(const QuadraticObjective &obj, const cvec &theta, const cvec &zeta, double xi0,
                             double c1, double shrink)
    {
        ArmijoResult out;
        const cvec rg = project_tangent(euclid_grad(obj, theta), theta);
        out.direction = zeta;
        double slope = real_inner(rg, zeta);
        if (!(slope < 0.0))
        {
            out.direction = -rg;
            out.reset = true;
            slope = -rg.squaredNorm();
        }
        if (!(slope < 0.0))
        {
            out.stagnated = true;
            return out;
        }
        const double f0 = obj.value(theta);
        double xi = xi0;
        for (int m = 0; m <= kMaxBacktracks; ++m)
        {
            const cvec trial = retract(theta, xi * out.direction);
            if (obj.value(trial) <= f0 + c1 * xi * slope)
            {
                out.step = xi;
                return out;
            }
            xi *= shrink;
        }
        out.stagnated = true;
        return out;
    }

    RcgResult rcg_minimize(const QuadraticObjective &obj, const cvec &theta0, const RcgOptions &opt)
    {
        obj.validate();
        if (theta0.size() != obj.q.size())
            throw ConfigError("rcg_minimize: theta0 size mismatch");
        RcgResult res;
        res.theta = retract(theta0, cvec::Zero(theta0.size()));
        double f = obj.value(res.theta);
        res.trace.push_back(f);
        const double tol = opt.grad_tol >= 0.0 ? opt.grad_tol : 1e-6 * (1.0 + std::abs(f));

        cvec rg = project_tangent(euclid_grad(obj, res.theta), res.theta);
        cvec zeta = -rg;
        bool just_reset = true;
        for (int it = 0; it < opt.max_iter; ++it)
        {
            res.grad_norm = rg.norm();
            if (res.grad_norm <= tol)
            {
                res.converged = true;
                break;
            }
            const double zmax = zeta.cwiseAbs().maxCoeff();
            const double xi0 = zmax > 0.0 ? opt.step_rad / zmax : 1.0;
            ArmijoResult a = armijo_step(obj, res.theta, zeta, xi0, opt.c1, opt.shrink);
            if (a.stagnated)
            {
                if (just_reset)
                    break;
                zeta = -rg;
                just_reset = true;
                continue;
            }
            const cvec next = retract(res.theta, a.step * a.direction);
            const double fn = obj.value(next);
            if (!(fn <= f))
            {
                break;
            }
            const cvec rg_next = project_tangent(euclid_grad(obj, next), next);
            const cvec zeta_t = transport(a.direction, next);
            const cvec rg_t = transport(rg, next);
            const double denom = rg.squaredNorm();
            const double chi = denom > 0.0 ? std::max(0.0, real_inner(rg_next, rg_next - rg_t) / denom) : 0.0;
            zeta = -rg_next + chi * zeta_t;
            just_reset = chi == 0.0;
            res.theta = next;
            f = fn;
            rg = rg_next;
            res.trace.push_back(f);
            res.iterations = it + 1;
        }
        res.grad_norm = rg.norm();
        if (res.grad_norm <= tol)
            res.converged = true;
        return res;
    }
}
