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

#ifndef XALIGN_CGEOM_HPP
#define XALIGN_CGEOM_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <optional>

namespace xalign
{
    class Rng;

    using CVec = Eigen::VectorXcd;
    using cdouble = std::complex<double>;

    inline constexpr double kZeroTol = 1e-12;
    inline constexpr double kUnitTol = 1e-9;

    // Throws InvalidOperands for a zero vector.
    CVec normalize(const CVec &v);

    // Uniform direction on the unit sphere of C^M (normalized standard
    // complex Gaussian).
    CVec sample_isotropic(Rng &rng, int M);

    // |a^H b|^2 = cos^2 of the angle between unit vectors a and b.
    // Throws InvalidOperands when either input is off the unit sphere by
    // more than kUnitTol.
    double overlap(const CVec &a, const CVec &b);

    // sin^2 of the angle between unit vectors, evaluated as the squared norm
    // of the component of a orthogonal to b. Accurate when the angle is tiny,
    // where 1 - overlap would cancel.
    double sin2(const CVec &a, const CVec &b);

    // Orthogonal projector onto the null space of a direction,
    // Phi = I - u u^H with u the normalized direction.
    class Projector
    {
    public:
        explicit Projector(const CVec &direction);

        const CVec &direction() const noexcept { return u_; }
        CVec apply(const CVec &x) const { return x - u_ * u_.dot(x); }
        Eigen::MatrixXcd matrix() const;

    private:
        CVec u_;
    };

    inline CVec project_null(const Projector &p, const CVec &x) { return p.apply(x); }

    // Decomposition e^{i phi} q_tilde = sqrt(1 - a) q_hat + sqrt(a) perp,
    // with a = sin^2 of the angle and perp a unit vector orthogonal to q_hat.
    // `perp` is empty when the inputs are parallel (a below kZeroTol).
    struct Decomposition
    {
        double a = 0.0;
        cdouble phase{1.0, 0.0};
        std::optional<CVec> perp;
    };

    Decomposition decompose(const CVec &q_tilde, const CVec &q_hat);

    struct MeanEstimate
    {
        double mean = 0.0;
        double std_error = 0.0;
        std::size_t n = 0;
    };

    // Monte Carlo estimate of E|Phi_v x|^2 for independent isotropic unit
    // x and v in C^M.
    MeanEstimate projection_norm_mean_check(int M, std::size_t trials, Rng &rng);
} // namespace xalign

#endif
