// SPDX-License-Identifier: Apache-2.0
//
// xalign: ergodic interference alignment with fixed precoding for the
// two-user X channel.
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

#include "xalign/cgeom.hpp"

#include "xalign/errors.hpp"
#include "xalign/rng.hpp"
#include "xalign/stats.hpp"

#include <cmath>

namespace xalign
{
    namespace
    {
        void check_unit(const CVec &v, const char *what)
        {
            if (std::abs(v.squaredNorm() - 1.0) > kUnitTol)
                throw InvalidOperands(std::string(what) + ": input is not unit norm");
        }
    } // namespace

    CVec normalize(const CVec &v)
    {
        if (!v.allFinite())
            throw InvalidOperands("normalize: non-finite entry");
        const double n = v.norm();
        if (n == 0.0)
            throw InvalidOperands("normalize: zero vector");
        return v / n;
    }

    CVec sample_isotropic(Rng &rng, int M)
    {
        if (M < 1)
            throw InvalidOperands("sample_isotropic: dimension must be positive");
        CVec g(M);
        do
        {
            for (int k = 0; k < M; ++k)
                g[k] = rng.cgauss();
        } while (g.squaredNorm() == 0.0);
        return g / g.norm();
    }

    double overlap(const CVec &a, const CVec &b)
    {
        if (a.size() != b.size())
            throw InvalidOperands("overlap: dimension mismatch");
        check_unit(a, "overlap");
        check_unit(b, "overlap");
        return std::min(1.0, std::norm(a.dot(b)));
    }

    double sin2(const CVec &a, const CVec &b)
    {
        if (a.size() != b.size())
            throw InvalidOperands("sin2: dimension mismatch");
        check_unit(a, "sin2");
        check_unit(b, "sin2");
        return std::min(1.0, (a - b * b.dot(a)).squaredNorm());
    }

    Projector::Projector(const CVec &direction) : u_(normalize(direction))
    {
    }

    Eigen::MatrixXcd Projector::matrix() const
    {
        const auto M = u_.size();
        return Eigen::MatrixXcd::Identity(M, M) - u_ * u_.adjoint();
    }

    Decomposition decompose(const CVec &q_tilde, const CVec &q_hat)
    {
        if (q_tilde.size() != q_hat.size())
            throw InvalidOperands("decompose: dimension mismatch");
        check_unit(q_tilde, "decompose");
        check_unit(q_hat, "decompose");

        const cdouble c = q_hat.dot(q_tilde); // q_hat^H q_tilde
        const CVec residual = q_tilde - q_hat * c;
        Decomposition d;
        d.a = std::min(1.0, residual.squaredNorm());
        // Rotate q_tilde so its q_hat coefficient is real and non-negative.
        d.phase = std::abs(c) > 0.0 ? std::conj(c) / std::abs(c) : cdouble{1.0, 0.0};
        if (d.a > kZeroTol)
            d.perp = (d.phase * residual) / std::sqrt(d.a);
        return d;
    }

    MeanEstimate projection_norm_mean_check(int M, std::size_t trials, Rng &rng)
    {
        if (M < 1)
            throw InvalidOperands("projection_norm_mean_check: dimension must be positive");
        RunningStats acc;
        for (std::size_t i = 0; i < trials; ++i)
        {
            const CVec x = sample_isotropic(rng, M);
            const Projector phi(sample_isotropic(rng, M));
            acc.add(phi.apply(x).squaredNorm());
        }
        return {acc.mean(), acc.stderr_mean(), acc.count()};
    }
} // namespace xalign
