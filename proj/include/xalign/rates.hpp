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

#ifndef XALIGN_RATES_HPP
#define XALIGN_RATES_HPP

// Two-stage zero-forcing receiver for stream d11 at receiver 1 and the rate
// statistics built on it. Logarithms are base 2 throughout.

#include "xalign/cgeom.hpp"
#include "xalign/rvq.hpp"
#include "xalign/xsim.hpp"

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace xalign
{
    struct ReceiverGeometry
    {
        CVec q11, q12, q21, q22;
        CVec q_hat;
        double a1 = 0.0;
        double a2 = 0.0;
        // Unit vectors orthogonal to q_hat; zero when the matching a is below
        // kZeroTol.
        CVec q_perp21, q_perp22;
    };

    // Geometry with an explicit common codeword `q_hat` (unit norm).
    ReceiverGeometry receiver_geometry(const XRealization &x, const Precoders &pre, const CVec &q_hat);

    // Throws PreconditionError when q21 and q22 quantize to different
    // codewords.
    ReceiverGeometry receiver_geometry(const XRealization &x, const Precoders &pre, const Codebook &cb);

    inline constexpr double kDegenerateTol = 1e-9;

    // Phi21 = I - q_hat q_hat^H followed by Phi12 = I - u u^H, u the unit
    // direction of Phi21 q12. Throws DegenerateGeometry when |Phi21 q~12| is
    // below kDegenerateTol.
    class TwoStageProjector
    {
    public:
        explicit TwoStageProjector(const ReceiverGeometry &g);

        CVec apply(const CVec &y) const { return phi12_.apply(phi21_.apply(y)); }
        const Projector &first() const noexcept { return phi21_; }
        const Projector &second() const noexcept { return phi12_; }

    private:
        Projector phi21_;
        Projector phi12_;
    };

    CVec project_two_stage(const ReceiverGeometry &g, const CVec &y1);

    // Power-free parts of S and I: S = (Mp/4) s_factor, I = (Mp/4) i_factor.
    struct PowerFactors
    {
        double s_factor = 0.0;
        double i_factor = 0.0;
    };

    PowerFactors power_factors(const ReceiverGeometry &g);

    double signal_power(const ReceiverGeometry &g, double p, int M);
    double interference_power(const ReceiverGeometry &g, double p, int M);

    struct PowerSample
    {
        double S = 0.0;
        double I = 0.0;
    };

    // Mean of (1/M) log2(1 + S/(I+1)). Throws InvalidOperands when empty.
    double rate_hat(std::span<const PowerSample> samples, int M);

    // Mean of (1/M) log2(1 + S).
    double rate_ideal(std::span<const double> S, int M);

    // (1/M) log2(1 + (p/2) (M(M-2)/(M-1)) 2^{-B/(M-1)}). Throws DomainError
    // for M < 3.
    double gap_bound(double p, double B, int M);

    // Least-squares slope of rate against log2(p) over the upper half of the
    // power points (at least two). Points must have strictly increasing p.
    double dof_estimate(std::span<const std::pair<double, double>> rates);

    inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

    // Per-point rate statistics on paired samples.
    struct RateReport
    {
        double p = 0.0;
        double p_db = 0.0;
        int B = 0;
        int M = 0;
        std::size_t trials = 0;
        std::size_t degenerate = 0;
        double S = 0.0;
        double I = 0.0;
        double sinr = 0.0;
        double c_hat = 0.0;
        double c_ideal = 0.0;
        double gap = 0.0;
        double gap_bound = 0.0;
        double stderr_c_hat = 0.0;
        double stderr_c_ideal = 0.0;
        double stderr_gap = 0.0;
        double mean_log_sinr = 0.0; // E log2(1 + SINR)
        double stderr_log_sinr = 0.0;
        double mean_a1 = 0.0;
        double stderr_a1 = 0.0;
    };

    // Geometry samples evaluated at one power. `a1` may be empty.
    RateReport rate_report(std::span<const PowerFactors> factors, std::span<const double> a1, double p_db, int B,
                           int M, std::size_t degenerate);
} // namespace xalign

#endif
