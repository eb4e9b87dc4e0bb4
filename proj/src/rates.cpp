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

#include "xalign/rates.hpp"

#include "xalign/errors.hpp"
#include "xalign/stats.hpp"

#include <cmath>

namespace xalign
{
    namespace
    {
        void fill(ReceiverGeometry &g)
        {
            const CVec t21 = normalize(g.q21);
            const CVec t22 = normalize(g.q22);
            const Decomposition d21 = decompose(t21, g.q_hat);
            const Decomposition d22 = decompose(t22, g.q_hat);
            const auto M = g.q_hat.size();
            g.a1 = d21.a;
            g.a2 = d22.a;
            g.q_perp21 = d21.perp.value_or(CVec::Zero(M));
            g.q_perp22 = d22.perp.value_or(CVec::Zero(M));
        }

        // Unit direction of Phi21 q~12, or DegenerateGeometry.
        CVec second_direction(const ReceiverGeometry &g, const Projector &phi21)
        {
            const CVec p = phi21.apply(normalize(g.q12));
            const double n = p.norm();
            if (n < kDegenerateTol)
                throw DegenerateGeometry("two-stage projection: q12 is aligned with the interference codeword");
            return p / n;
        }
    } // namespace

    ReceiverGeometry receiver_geometry(const XRealization &x, const Precoders &pre, const CVec &q_hat)
    {
        if (x.dim() != pre.dim() || q_hat.size() != x.dim())
            throw InvalidOperands("receiver_geometry: dimension mismatch");
        ReceiverGeometry g;
        const CVec h11 = x.gains(1, 1);
        const CVec h12 = x.gains(1, 2);
        g.q11 = h11.cwiseProduct(pre.v11);
        g.q12 = h12.cwiseProduct(pre.v12);
        g.q21 = h11.cwiseProduct(pre.v21);
        g.q22 = h12.cwiseProduct(pre.v22);
        g.q_hat = normalize(q_hat);
        fill(g);
        return g;
    }

    ReceiverGeometry receiver_geometry(const XRealization &x, const Precoders &pre, const Codebook &cb)
    {
        const auto d = interference_directions(x, pre);
        const std::size_t i = cb.quantize(d.q21);
        if (cb.quantize(d.q22) != i)
            throw PreconditionError("receiver_geometry: interference directions quantize to different codewords");
        return receiver_geometry(x, pre, cb.codeword(i));
    }

    TwoStageProjector::TwoStageProjector(const ReceiverGeometry &g)
        : phi21_(g.q_hat), phi12_(second_direction(g, phi21_))
    {
    }

    CVec project_two_stage(const ReceiverGeometry &g, const CVec &y1)
    {
        if (y1.size() != g.q_hat.size())
            throw InvalidOperands("project_two_stage: dimension mismatch");
        return TwoStageProjector(g).apply(y1);
    }

    PowerFactors power_factors(const ReceiverGeometry &g)
    {
        const TwoStageProjector proj(g);
        PowerFactors f;

        const double n11 = g.q11.squaredNorm();
        if (n11 > 0.0)
        {
            const CVec p11 = proj.first().apply(g.q11 / std::sqrt(n11));
            const double m = p11.squaredNorm();
            if (m > 0.0)
                f.s_factor = n11 * m * proj.second().apply(p11 / std::sqrt(m)).squaredNorm();
        }
        f.i_factor = g.q21.squaredNorm() * proj.second().apply(g.q_perp21).squaredNorm() * g.a1 +
                     g.q22.squaredNorm() * proj.second().apply(g.q_perp22).squaredNorm() * g.a2;
        return f;
    }

    double signal_power(const ReceiverGeometry &g, double p, int M)
    {
        return M * p / 4.0 * power_factors(g).s_factor;
    }

    double interference_power(const ReceiverGeometry &g, double p, int M)
    {
        return M * p / 4.0 * power_factors(g).i_factor;
    }

    double rate_hat(std::span<const PowerSample> samples, int M)
    {
        if (samples.empty())
            throw InvalidOperands("rate_hat: no samples");
        RunningStats acc;
        for (const auto &s : samples)
            acc.add(std::log2(1.0 + s.S / (s.I + 1.0)) / M);
        return acc.mean();
    }

    double rate_ideal(std::span<const double> S, int M)
    {
        if (S.empty())
            throw InvalidOperands("rate_ideal: no samples");
        RunningStats acc;
        for (double s : S)
            acc.add(std::log2(1.0 + s) / M);
        return acc.mean();
    }

    double gap_bound(double p, double B, int M)
    {
        if (M < 3)
            throw DomainError("gap_bound requires M >= 3");
        const double m = M;
        return std::log2(1.0 + p / 2.0 * (m * (m - 2.0) / (m - 1.0)) * std::exp2(-B / (m - 1.0))) / m;
    }

    double dof_estimate(std::span<const std::pair<double, double>> rates)
    {
        if (rates.size() < 2)
            throw InvalidOperands("dof_estimate: need at least two power points");
        for (std::size_t i = 1; i < rates.size(); ++i)
            if (!(rates[i].first > rates[i - 1].first))
                throw InvalidOperands("dof_estimate: powers must be strictly increasing");
        const std::size_t half = std::max<std::size_t>(2, (rates.size() + 1) / 2);
        std::vector<double> x, y;
        for (std::size_t i = rates.size() - half; i < rates.size(); ++i)
        {
            x.push_back(std::log2(rates[i].first));
            y.push_back(rates[i].second);
        }
        return least_squares(x, y).slope;
    }

    RateReport rate_report(std::span<const PowerFactors> factors, std::span<const double> a1, double p_db, int B,
                           int M, std::size_t degenerate)
    {
        RateReport r;
        r.p_db = p_db;
        r.p = db_to_linear(p_db);
        r.B = B;
        r.M = M;
        r.trials = factors.size();
        r.degenerate = degenerate;
        r.gap_bound = M >= 3 ? gap_bound(r.p, B, M) : 0.0;
        const double scale = M * r.p / 4.0;
        RunningStats S, I, sinr, ch, ci, gap, ls;
        for (const auto &f : factors)
        {
            const double s = scale * f.s_factor;
            const double i = scale * f.i_factor;
            const double l_hat = std::log2(1.0 + s / (i + 1.0));
            const double l_ideal = std::log2(1.0 + s);
            S.add(s);
            I.add(i);
            sinr.add(s / (i + 1.0));
            ch.add(l_hat / M);
            ci.add(l_ideal / M);
            gap.add((l_ideal - l_hat) / M);
            ls.add(l_hat);
        }
        r.S = S.mean();
        r.I = I.mean();
        r.sinr = sinr.mean();
        r.c_hat = ch.mean();
        r.c_ideal = ci.mean();
        r.gap = gap.mean();
        r.stderr_c_hat = ch.stderr_mean();
        r.stderr_c_ideal = ci.stderr_mean();
        r.stderr_gap = gap.stderr_mean();
        r.mean_log_sinr = ls.mean();
        r.stderr_log_sinr = ls.stderr_mean();
        if (!a1.empty())
        {
            const RunningStats a = summarize(a1);
            r.mean_a1 = a.mean();
            r.stderr_a1 = a.stderr_mean();
        }
        return r;
    }
} // namespace xalign
