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

#include "xalign/ff_align.hpp"

#include "xalign/errors.hpp"
#include "xalign/rng.hpp"

#include <cmath>
#include <string>

namespace xalign
{
    namespace
    {
        void check_position(int l)
        {
            if (l < 1 || l > static_cast<int>(kGFDim))
                throw InvalidOperands("set position must be in 1..3, got " + std::to_string(l));
        }

        bool all_nonzero(const GFVector &v)
        {
            for (const auto &e : v)
                if (e.is_zero())
                    return false;
            return true;
        }

        // Entrywise product diag(gains) v, gains listed in position order.
        GFVector diag_times(const std::array<GFElement, kGFDim> &gains, const GFVector &v)
        {
            return {gains[0] * v[0], gains[1] * v[1], gains[2] * v[2]};
        }
    } // namespace

    void validate_slot(const FFSlot &slot)
    {
        if (slot.h11.is_zero() || slot.h12.is_zero() || slot.h21.is_zero() || slot.h22.is_zero())
            throw InvalidOperands("slot " + std::to_string(slot.t) + " has a zero channel gain");
    }

    std::vector<FFSlot> generate_ff_slots(Rng &rng, const PrimeField &field, std::size_t count, std::uint64_t first_t)
    {
        std::vector<FFSlot> out;
        out.reserve(count);
        for (std::uint64_t t = first_t; out.size() < count; ++t)
        {
            FFSlot s{t, field.uniform(rng), field.uniform(rng), field.uniform(rng), field.uniform(rng)};
            if (s.h11.is_zero() || s.h12.is_zero() || s.h21.is_zero() || s.h22.is_zero())
                continue;
            out.push_back(s);
        }
        return out;
    }

    void FFPrecoders::validate() const
    {
        const std::array<const GFVector *, 4> vs{&v11, &v12, &v21, &v22};
        for (const auto *v : vs)
            if (!all_nonzero(*v))
                throw InvalidOperands("precoder entries must be nonzero");
        for (std::size_t i = 0; i < vs.size(); ++i)
            for (std::size_t j = i + 1; j < vs.size(); ++j)
                if (same_direction(*vs[i], *vs[j]))
                    throw InvalidOperands("precoders must have pairwise distinct directions");
    }

    FFPrecoders FFPrecoders::random(Rng &rng, const PrimeField &field)
    {
        auto draw = [&] {
            return GFVector(field.uniform_nonzero(rng), field.uniform_nonzero(rng), field.uniform_nonzero(rng));
        };
        for (;;)
        {
            FFPrecoders p{draw(), draw(), draw(), draw()};
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

    Signature slot_signature(const FFSlot &slot, const FFPrecoders &pre, int position)
    {
        check_position(position);
        validate_slot(slot);
        const std::size_t l = static_cast<std::size_t>(position - 1);
        for (const auto *v : {&pre.v11, &pre.v12, &pre.v21, &pre.v22})
            if ((*v)[l].is_zero())
                throw InvalidOperands("precoder entry at position " + std::to_string(position) + " is zero");
        GFElement kappa1 = slot.h11 / slot.h12;
        GFElement kappa2 = slot.h21 / slot.h22;
        GFElement rho1 = pre.v21[l] / pre.v22[l];
        GFElement rho2 = pre.v11[l] / pre.v12[l];
        return {kappa1 * rho1, kappa2 * rho2};
    }

    StreamMatcher::StreamMatcher(FFPrecoders pre) : pre_(std::move(pre))
    {
        pre_.validate();
    }

    std::optional<FFComplementarySet> StreamMatcher::push(const FFSlot &slot)
    {
        // Oldest open set that can take this slot at its next position.
        std::optional<std::uint64_t> best;
        int best_pos = 0;
        for (int l = 2; l <= static_cast<int>(kGFDim); ++l)
        {
            Signature s = slot_signature(slot, pre_, l);
            auto it = waiting_.find(Key{l, s.c1.value(), s.c2.value()});
            if (it == waiting_.end() || it->second.empty())
                continue;
            std::uint64_t id = *it->second.begin();
            if (!best || id < *best)
            {
                best = id;
                best_pos = l;
            }
        }

        if (!best)
        {
            Signature s = slot_signature(slot, pre_, 1);
            std::uint64_t id = next_id_++;
            open_.emplace(id, FFComplementarySet{s, {FFMember{slot, 1}}});
            waiting_[Key{2, s.c1.value(), s.c2.value()}].insert(id);
            return std::nullopt;
        }

        auto node = open_.find(*best);
        FFComplementarySet &set = node->second;
        const Signature label = set.label;
        auto wit = waiting_.find(Key{best_pos, label.c1.value(), label.c2.value()});
        wit->second.erase(*best);
        if (wit->second.empty())
            waiting_.erase(wit);

        set.members.push_back(FFMember{slot, best_pos});
        if (set.matched())
        {
            FFComplementarySet done = std::move(set);
            open_.erase(node);
            return done;
        }
        waiting_[Key{best_pos + 1, label.c1.value(), label.c2.value()}].insert(*best);
        return std::nullopt;
    }

    std::vector<FFComplementarySet> StreamMatcher::open_sets() const
    {
        std::vector<FFComplementarySet> out;
        out.reserve(open_.size());
        for (const auto &[id, set] : open_)
            out.push_back(set);
        return out;
    }

    FFMatchResult match_stream(std::span<const FFSlot> slots, const FFPrecoders &pre)
    {
        StreamMatcher matcher(pre);
        FFMatchResult result;
        for (const auto &slot : slots)
            if (auto done = matcher.push(slot))
                result.matched.push_back(std::move(*done));
        result.open = matcher.open_sets();
        return result;
    }

    FFTransmit ff_encode(const FFData &data, const FFPrecoders &pre, int position)
    {
        check_position(position);
        const std::size_t l = static_cast<std::size_t>(position - 1);
        return {data.d11 * pre.v11[l] + data.d21 * pre.v21[l],
                data.d12 * pre.v12[l] + data.d22 * pre.v22[l]};
    }

    namespace
    {
        struct SetGains
        {
            std::array<GFElement, kGFDim> h11, h12, h21, h22;
        };

        SetGains gains_by_position(const FFComplementarySet &set)
        {
            if (!set.matched())
                throw PreconditionError("complementary set is not matched");
            SetGains g;
            std::array<bool, kGFDim> seen{};
            for (const auto &m : set.members)
            {
                check_position(m.position);
                const std::size_t l = static_cast<std::size_t>(m.position - 1);
                if (seen[l])
                    throw PreconditionError("complementary set has a repeated position");
                seen[l] = true;
                g.h11[l] = m.slot.h11;
                g.h12[l] = m.slot.h12;
                g.h21[l] = m.slot.h21;
                g.h22[l] = m.slot.h22;
            }
            return g;
        }
    } // namespace

    FFEffectiveVectors ff_effective_vectors(const FFComplementarySet &set, const FFPrecoders &pre)
    {
        const SetGains g = gains_by_position(set);
        return {diag_times(g.h11, pre.v11), diag_times(g.h12, pre.v12),
                diag_times(g.h11, pre.v21), diag_times(g.h12, pre.v22),
                diag_times(g.h21, pre.v21), diag_times(g.h22, pre.v22),
                diag_times(g.h21, pre.v11), diag_times(g.h22, pre.v12)};
    }

    FFReceived ff_channel(const FFComplementarySet &set, const FFData &data, const FFPrecoders &pre)
    {
        const SetGains g = gains_by_position(set);
        std::array<GFElement, kGFDim> y1, y2;
        for (std::size_t l = 0; l < kGFDim; ++l)
        {
            FFTransmit x = ff_encode(data, pre, static_cast<int>(l + 1));
            y1[l] = g.h11[l] * x.x1 + g.h12[l] * x.x2;
            y2[l] = g.h21[l] * x.x1 + g.h22[l] * x.x2;
        }
        return {GFVector(y1[0], y1[1], y1[2]), GFVector(y2[0], y2[1], y2[2])};
    }

    bool ff_interference_aligned(const FFComplementarySet &set, const FFPrecoders &pre)
    {
        const FFEffectiveVectors e = ff_effective_vectors(set, pre);
        auto c1 = same_direction(e.h11v21, e.h12v22);
        auto c2 = same_direction(e.h21v11, e.h22v12);
        return c1 && c2 && *c1 == set.label.c1 && *c2 == set.label.c2;
    }

    FFData ff_decode(const FFComplementarySet &set, const FFReceived &received, const FFPrecoders &pre)
    {
        const FFEffectiveVectors e = ff_effective_vectors(set, pre);
        // Receiver 1 sees d11, d12 along their own directions and both
        // interferers along h12v22; the third unknown absorbs the interference.
        // Receiver 2 likewise with h22v12.
        const auto a1 = GFMatrix3::from_columns(e.h11v11, e.h12v12, e.h12v22);
        const auto a2 = GFMatrix3::from_columns(e.h21v21, e.h22v22, e.h22v12);
        try
        {
            GFVector x1 = solve_3x3(a1, received.y1);
            GFVector x2 = solve_3x3(a2, received.y2);
            return {x1[0], x1[1], x2[0], x2[1]};
        }
        catch (const SingularMatrix &)
        {
            throw DegenerateSet("decoding matrix of matched set is singular");
        }
    }

    double ff_triple_match_probability(std::uint32_t q)
    {
        if (q < 3)
            throw InvalidOperands("field order must be at least 3");
        return 1.0 / std::pow(static_cast<double>(q - 1), 4);
    }

    std::uint64_t expected_delay_scaling(std::uint32_t q, double target_prob)
    {
        if (q < 3)
            throw InvalidOperands("field order must be at least 3");
        const long double need = static_cast<long double>(target_prob) * std::pow(static_cast<long double>(q - 1), 4);
        for (std::uint64_t n = 3;; ++n)
        {
            const long double nn = static_cast<long double>(n);
            const long double c = nn * (nn - 1) * (nn - 2) / 6.0L;
            if (c >= need)
                return n;
        }
    }
} // namespace xalign
