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

#include "xalign/xsim.hpp"

#include "xalign/errors.hpp"
#include "xalign/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace xalign
{
    namespace
    {
        CVec draw_gains(Rng &rng, int M)
        {
            CVec g(M);
            for (int l = 0; l < M; ++l)
                g[l] = rng.cgauss();
            return g;
        }

        CVec random_orthogonal_unit(Rng &rng, const CVec &x)
        {
            for (;;)
            {
                CVec g = draw_gains(rng, static_cast<int>(x.size()));
                g -= x * x.dot(g);
                const double n = g.norm();
                if (n > 1e-8)
                    return g / n;
            }
        }

        // Point at sin^2 distance d from the unit vector w, in a direction
        // drawn uniformly from the orthogonal complement of w.
        CVec at_distance(Rng &rng, const CVec &w, double d)
        {
            const CVec u = random_orthogonal_unit(rng, w);
            return std::sqrt(1.0 - d) * w + std::sqrt(d) * u;
        }

        double combinations(std::size_t n, int k)
        {
            if (k < 0 || static_cast<std::size_t>(k) > n)
                return 0.0;
            double c = 1.0;
            for (int i = 0; i < k; ++i)
                c = c * static_cast<double>(n - i) / static_cast<double>(i + 1);
            return c;
        }

        struct PairDraw
        {
            CVec ga, gb;
            CVec w;
            std::uint64_t attempts = 0;
        };

        [[noreturn]] void give_up(const char *what, std::uint64_t attempts, int B)
        {
            throw ResourceLimit(std::string(what) + ": no match after " + std::to_string(attempts) +
                                " attempts at B=" + std::to_string(B));
        }

        // One receiver: gains ga, gb such that ga*va and gb*vb quantize to the
        // same codeword of cb.
        PairDraw explicit_pair(Rng &rng, const CVec &va, const CVec &vb, const Codebook &cb, std::uint64_t cap)
        {
            const int M = static_cast<int>(va.size());
            for (std::uint64_t k = 1; k <= cap; ++k)
            {
                CVec ga = draw_gains(rng, M);
                CVec gb = draw_gains(rng, M);
                const CVec x = normalize(ga.cwiseProduct(va));
                const CVec y = normalize(gb.cwiseProduct(vb));
                const std::size_t j = cb.nearest_unit(x.data());
                if (cb.is_nearest_unit(y.data(), j))
                    return {std::move(ga), std::move(gb), cb.codeword(j), k};
            }
            give_up("sample_matched_realization", cap, cb.bits());
        }

        // One receiver under the random-codebook ensemble.
        //
        // x is drawn from its own law and the codeword nearest to it, w, from
        // the law of the minimum of N i.i.d. sin^2 distances. Given (x, w) the
        // other N-1 codewords are i.i.d. uniform outside cap(x, s*). A
        // proposal y is uniform in cap(w, rho) and kept with probability
        // f(y)/f_max, f the angular density of gb*vb. It survives if no other
        // codeword is closer to y than w; only codewords inside cap(y, d_y)
        // matter, so just those are drawn. Every rejection restarts from x,
        // which weights (x, w) by the f-mass of the Voronoi cell of w.
        PairDraw ensemble_pair_ordered(Rng &rng, const CVec &va, const CVec &vb, int B, const EnsembleOptions &opt)
        {
            const int M = static_cast<int>(va.size());
            const double m1 = M - 1;
            const double N = std::exp2(static_cast<double>(B));
            const double rho = std::min(1.0, std::pow(opt.cap_codewords / N, 1.0 / m1));

            Eigen::VectorXd inv_sigma(M);
            double sigma_max = 0.0;
            for (int l = 0; l < M; ++l)
            {
                const double s = std::norm(vb[l]);
                if (s < 1e-300)
                    throw DegenerateGeometry("ensemble sampler: precoder has a zero entry");
                inv_sigma[l] = 1.0 / s;
                sigma_max = std::max(sigma_max, s);
            }
            auto quad = [&](const CVec &y) {
                double acc = 0.0;
                for (int l = 0; l < M; ++l)
                    acc += std::norm(y[l]) * inv_sigma[l];
                return acc;
            };

            for (std::uint64_t k = 1; k <= opt.max_attempts; ++k)
            {
                CVec ga = draw_gains(rng, M);
                const CVec x = normalize(ga.cwiseProduct(va));

                const double s_star = std::pow(-std::expm1(std::log(rng.uniform_pos()) / N), 1.0 / m1);
                const CVec w = at_distance(rng, x, s_star);

                const double d_prop = rho * std::pow(rng.uniform_pos(), 1.0 / m1);
                const CVec y = at_distance(rng, w, d_prop);
                const double qy = quad(y);
                if (rng.uniform() >= std::pow(sigma_max * qy, -static_cast<double>(M)))
                    continue;

                const double d_y = sin2(y, w);
                const double others = N - 1.0;
                const double outside = -std::expm1(m1 * std::log(s_star)); // 1 - s*^{M-1}
                const double ratio = std::pow(d_y, m1) / outside;
                bool blocked = false;
                if (others > 0.0 && ratio <= 1.0)
                {
                    // Codewords falling inside cap(y, d_y), thinned to those
                    // outside cap(x, s*).
                    std::binomial_distribution<long long> count(static_cast<long long>(others), ratio);
                    const long long K = count(rng.engine());
                    for (long long i = 0; i < K && !blocked; ++i)
                    {
                        const double d = d_y * std::pow(rng.uniform_pos(), 1.0 / m1);
                        const CVec c = at_distance(rng, y, d);
                        blocked = sin2(c, x) > s_star;
                    }
                }
                else if (others > 0.0)
                {
                    // Small codebooks: draw every other codeword explicitly.
                    const auto n_other = static_cast<long long>(others);
                    for (long long i = 0; i < n_other && !blocked; ++i)
                    {
                        CVec c;
                        do
                            c = sample_isotropic(rng, M);
                        while (sin2(c, x) <= s_star);
                        blocked = sin2(c, y) < d_y;
                    }
                }
                if (blocked)
                    continue;

                // Radial part of gb*vb given its direction y.
                std::gamma_distribution<double> radial(static_cast<double>(M), 1.0 / qy);
                const double r = std::sqrt(radial(rng.engine()));
                const double theta = 2.0 * std::numbers::pi * rng.uniform();
                const cdouble scale = std::polar(r, theta);
                CVec gb(M);
                for (int l = 0; l < M; ++l)
                    gb[l] = scale * y[l] / vb[l];
                return {std::move(ga), std::move(gb), w, k};
            }
            give_up("sample_matched_ensemble", opt.max_attempts, B);
        }

        // log of the peak angular density of g*v, up to a shared constant.
        double log_peak_density(const CVec &v)
        {
            double log_det = 0.0, peak = 0.0;
            for (int l = 0; l < v.size(); ++l)
            {
                log_det += std::log(std::norm(v[l]));
                peak = std::max(peak, std::norm(v[l]));
            }
            return static_cast<double>(v.size()) * std::log(peak) - log_det;
        }

        // The law is symmetric in the two members of the pair, so the member
        // with the flatter density takes the role of the proposal y.
        PairDraw ensemble_pair(Rng &rng, const CVec &va, const CVec &vb, int B, const EnsembleOptions &opt)
        {
            if (log_peak_density(vb) <= log_peak_density(va))
                return ensemble_pair_ordered(rng, va, vb, B, opt);
            PairDraw d = ensemble_pair_ordered(rng, vb, va, B, opt);
            std::swap(d.ga, d.gb);
            return d;
        }

        XRealization assemble(const CVec &h11, const CVec &h12, const CVec &h21, const CVec &h22)
        {
            XRealization x;
            const int M = static_cast<int>(h11.size());
            x.slots.resize(M);
            for (int l = 0; l < M; ++l)
                x.slots[l] = FadingSlot{static_cast<std::uint64_t>(l), h11[l], h12[l], h21[l], h22[l]};
            return x;
        }
    } // namespace

    FadingSlot FadingSlot::draw(Rng &rng, std::uint64_t t)
    {
        FadingSlot s;
        s.t = t;
        s.h11 = rng.cgauss();
        s.h12 = rng.cgauss();
        s.h21 = rng.cgauss();
        s.h22 = rng.cgauss();
        return s;
    }

    std::vector<FadingSlot> generate_fading_slots(Rng &rng, std::size_t count, std::uint64_t first_t)
    {
        std::vector<FadingSlot> out;
        out.reserve(count);
        for (std::size_t i = 0; i < count; ++i)
            out.push_back(FadingSlot::draw(rng, first_t + i));
        return out;
    }

    void Precoders::validate() const
    {
        const CVec *v[4] = {&v11, &v12, &v21, &v22};
        const auto M = v11.size();
        for (const CVec *a : v)
        {
            if (a->size() != M || M < 1)
                throw InvalidOperands("precoders must share one dimension");
            if (std::abs(a->squaredNorm() - 1.0) > kUnitTol)
                throw InvalidOperands("precoders must have unit norm");
        }
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                if (overlap(*v[i], *v[j]) >= 1.0 - 1e-6)
                    throw InvalidOperands("precoders must point in distinct directions");
    }

    Precoders Precoders::random(Rng &rng, int M)
    {
        if (M < 2)
            throw InvalidOperands("precoder dimension must be at least 2");
        for (;;)
        {
            Precoders p{sample_isotropic(rng, M), sample_isotropic(rng, M), sample_isotropic(rng, M),
                        sample_isotropic(rng, M)};
            try
            {
                p.validate();
                return p;
            }
            catch (const InvalidOperands &)
            {
            }
        }
    }

    CVec XRealization::gains(int i, int j) const
    {
        CVec g(dim());
        for (int l = 0; l < dim(); ++l)
        {
            const FadingSlot &s = slots[l];
            if (i == 1 && j == 1)
                g[l] = s.h11;
            else if (i == 1 && j == 2)
                g[l] = s.h12;
            else if (i == 2 && j == 1)
                g[l] = s.h21;
            else if (i == 2 && j == 2)
                g[l] = s.h22;
            else
                throw InvalidOperands("channel indices must be 1 or 2");
        }
        return g;
    }

    InterferenceDirections interference_directions(const XRealization &x, const Precoders &pre)
    {
        if (x.dim() != pre.dim())
            throw InvalidOperands("realization and precoders differ in dimension");
        return {x.gains(1, 1).cwiseProduct(pre.v21), x.gains(1, 2).cwiseProduct(pre.v22),
                x.gains(2, 1).cwiseProduct(pre.v11), x.gains(2, 2).cwiseProduct(pre.v12)};
    }

    std::optional<std::pair<std::size_t, std::size_t>> match_indices(const XRealization &x, const Precoders &pre,
                                                                      const Codebook &cb)
    {
        if (cb.dim() != x.dim())
            throw InvalidOperands("codebook and realization differ in dimension");
        const auto d = interference_directions(x, pre);
        const std::size_t i = cb.quantize(d.q21);
        if (cb.quantize(d.q22) != i)
            return std::nullopt;
        const std::size_t k = cb.quantize(d.r11);
        if (cb.quantize(d.r12) != k)
            return std::nullopt;
        return std::pair{i, k};
    }

    std::vector<ComplementarySet> find_matched_sets(std::span<const FadingSlot> slots, const Precoders &pre,
                                                    const Codebook &cb, int M)
    {
        if (M < 2 || M != cb.dim() || M != pre.dim())
            throw InvalidOperands("find_matched_sets: inconsistent dimension");
        const std::size_t n = slots.size();
        if (combinations(n, M) > kMaxCombinations)
            throw ResourceLimit("find_matched_sets: C(" + std::to_string(n) + ", " + std::to_string(M) +
                                ") exceeds the combination guard");
        std::vector<ComplementarySet> out;
        if (n < static_cast<std::size_t>(M))
            return out;

        std::vector<char> used(n, 0);
        std::vector<std::size_t> idx(M);
        for (int l = 0; l < M; ++l)
            idx[l] = l;
        std::vector<cdouble> a(M), b(M);

        auto direction = [&](auto gain, const CVec &v, std::vector<cdouble> &buf) {
            double n2 = 0.0;
            for (int l = 0; l < M; ++l)
            {
                buf[l] = gain(slots[idx[l]]) * v[l];
                n2 += std::norm(buf[l]);
            }
            if (n2 <= 0.0)
                return false;
            const double s = 1.0 / std::sqrt(n2);
            for (auto &c : buf)
                c *= s;
            return true;
        };
        auto pair_index = [&](auto ga, const CVec &va, auto gb, const CVec &vb) -> std::optional<std::size_t> {
            if (!direction(ga, va, a) || !direction(gb, vb, b))
                return std::nullopt;
            const std::size_t j = cb.nearest_unit(a.data());
            if (!cb.is_nearest_unit(b.data(), j))
                return std::nullopt;
            return j;
        };

        for (;;)
        {
            bool free = true;
            for (int l = 0; l < M && free; ++l)
                free = !used[idx[l]];
            if (free)
            {
                auto i1 = pair_index([](const FadingSlot &s) { return s.h11; }, pre.v21,
                                     [](const FadingSlot &s) { return s.h12; }, pre.v22);
                if (i1)
                {
                    auto i2 = pair_index([](const FadingSlot &s) { return s.h21; }, pre.v11,
                                         [](const FadingSlot &s) { return s.h22; }, pre.v12);
                    if (i2)
                    {
                        out.push_back({idx, *i1, *i2});
                        for (auto s : idx)
                            used[s] = 1;
                    }
                }
            }
            // Next combination in lexicographic order.
            int l = M - 1;
            while (l >= 0 && idx[l] == n - M + l)
                --l;
            if (l < 0)
                break;
            ++idx[l];
            for (int k = l + 1; k < M; ++k)
                idx[k] = idx[k - 1] + 1;
        }
        return out;
    }

    XRealization realization_of(std::span<const FadingSlot> slots, const ComplementarySet &set)
    {
        XRealization x;
        for (auto i : set.slots)
            x.slots.push_back(slots[i]);
        return x;
    }

    MatchedSample sample_matched_naive(Rng &rng, const Precoders &pre, const Codebook &cb, std::uint64_t max_attempts)
    {
        const int M = pre.dim();
        if (cb.dim() != M)
            throw InvalidOperands("codebook and precoders differ in dimension");
        for (std::uint64_t k = 1; k <= max_attempts; ++k)
        {
            XRealization x;
            x.slots = generate_fading_slots(rng, M);
            if (auto m = match_indices(x, pre, cb))
                return {std::move(x), cb.codeword(m->first), cb.codeword(m->second), k};
        }
        give_up("sample_matched_naive", max_attempts, cb.bits());
    }

    MatchedSample sample_matched_realization(Rng &rng, const Precoders &pre, const Codebook &cb,
                                             std::uint64_t max_attempts)
    {
        if (cb.dim() != pre.dim())
            throw InvalidOperands("codebook and precoders differ in dimension");
        PairDraw r1 = explicit_pair(rng, pre.v21, pre.v22, cb, max_attempts);
        PairDraw r2 = explicit_pair(rng, pre.v11, pre.v12, cb, max_attempts);
        return {assemble(r1.ga, r1.gb, r2.ga, r2.gb), std::move(r1.w), std::move(r2.w), r1.attempts + r2.attempts};
    }

    MatchedSample sample_matched_ensemble(Rng &rng, const Precoders &pre, int B, const EnsembleOptions &opt)
    {
        if (B < 0 || B > 60)
            throw InvalidOperands("sample_matched_ensemble: B must lie in [0, 60]");
        if (pre.dim() < 2)
            throw InvalidOperands("sample_matched_ensemble: M must be at least 2");
        PairDraw r1 = ensemble_pair(rng, pre.v21, pre.v22, B, opt);
        PairDraw r2 = ensemble_pair(rng, pre.v11, pre.v12, B, opt);
        return {assemble(r1.ga, r1.gb, r2.ga, r2.gb), std::move(r1.w), std::move(r2.w), r1.attempts + r2.attempts};
    }

    StreamSymbols StreamSymbols::draw(Rng &rng, int M, double p)
    {
        const double a = std::sqrt(M * p / 4.0);
        StreamSymbols d;
        d.d11 = a * rng.cgauss();
        d.d12 = a * rng.cgauss();
        d.d21 = a * rng.cgauss();
        d.d22 = a * rng.cgauss();
        return d;
    }

    TransmitSignals transmit(const XRealization &x, const Precoders &pre, const StreamSymbols &d)
    {
        if (x.dim() != pre.dim())
            throw InvalidOperands("realization and precoders differ in dimension");
        return {d.d11 * pre.v11 + d.d21 * pre.v21, d.d12 * pre.v12 + d.d22 * pre.v22};
    }

    ReceivedSignals receive(const XRealization &x, const TransmitSignals &s, Rng *rng)
    {
        const int M = x.dim();
        if (s.x1.size() != M || s.x2.size() != M)
            throw InvalidOperands("signal and realization differ in dimension");
        ReceivedSignals r{x.gains(1, 1).cwiseProduct(s.x1) + x.gains(1, 2).cwiseProduct(s.x2),
                          x.gains(2, 1).cwiseProduct(s.x1) + x.gains(2, 2).cwiseProduct(s.x2)};
        if (rng)
        {
            r.y1 += draw_gains(*rng, M);
            r.y2 += draw_gains(*rng, M);
        }
        return r;
    }

    XRealization swap_receivers(const XRealization &x)
    {
        XRealization out = x;
        for (auto &s : out.slots)
        {
            std::swap(s.h11, s.h21);
            std::swap(s.h12, s.h22);
        }
        return out;
    }

    Precoders swap_receivers(const Precoders &pre) { return {pre.v21, pre.v22, pre.v11, pre.v12}; }

    XRealization swap_transmitters(const XRealization &x)
    {
        XRealization out = x;
        for (auto &s : out.slots)
        {
            std::swap(s.h11, s.h12);
            std::swap(s.h21, s.h22);
        }
        return out;
    }

    Precoders swap_transmitters(const Precoders &pre) { return {pre.v12, pre.v11, pre.v22, pre.v21}; }
} // namespace xalign
