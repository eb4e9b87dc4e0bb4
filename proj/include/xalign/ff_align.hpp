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

#ifndef XALIGN_FF_ALIGN_HPP
#define XALIGN_FF_ALIGN_HPP

// Finite-field two-user X channel: slot generation, complementary-set
// matching, fixed-precoder encoding and noise-free alignment decoding.
//
// Positions inside a complementary set are 1-based (1, 2, 3) throughout
// this header, matching the order in which slots fill a set.

#include "xalign/gf.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <tuple>
#include <vector>

namespace xalign
{
    class Rng;

    struct FFSlot
    {
        std::uint64_t t = 0;
        GFElement h11, h12, h21, h22;
    };

    // Checks that all four gains are nonzero; throws InvalidOperands otherwise.
    void validate_slot(const FFSlot &slot);

    // Draws gains uniformly from all of GF(q) at consecutive time indices
    // starting at `first_t`, discarding indices where any gain is zero,
    // until `count` usable slots are collected.
    std::vector<FFSlot> generate_ff_slots(Rng &rng, const PrimeField &field, std::size_t count, std::uint64_t first_t = 1);

    struct FFPrecoders
    {
        GFVector v11, v12, v21, v22;

        // Every entry nonzero and the four vectors pairwise in different
        // directions. Throws InvalidOperands on violation.
        void validate() const;

        static FFPrecoders random(Rng &rng, const PrimeField &field);
    };

    struct Signature
    {
        GFElement c1, c2;
        friend bool operator==(const Signature &, const Signature &) = default;
    };

    // Constants a slot would need to carry for the receiver-side alignment
    // identities to hold at position `position` of a set:
    //   c1 = (h11/h12) (v21[l]/v22[l]),  c2 = (h21/h22) (v11[l]/v12[l]).
    Signature slot_signature(const FFSlot &slot, const FFPrecoders &pre, int position);

    struct FFMember
    {
        FFSlot slot;
        int position = 0;
    };

    struct FFComplementarySet
    {
        Signature label;
        std::vector<FFMember> members;

        bool matched() const noexcept { return members.size() == kGFDim; }
    };

    // Online greedy grouping of slots into complementary sets. An arriving
    // slot joins the oldest open set whose label it satisfies at that set's
    // next free position; otherwise it opens a new set at position 1.
    // Open sets never expire.
    class StreamMatcher
    {
    public:
        explicit StreamMatcher(FFPrecoders pre);

        // Returns the completed set when `slot` fills one.
        std::optional<FFComplementarySet> push(const FFSlot &slot);

        // Still-open sets in creation order.
        std::vector<FFComplementarySet> open_sets() const;
        std::size_t open_count() const noexcept { return open_.size(); }

    private:
        using Key = std::tuple<int, std::uint32_t, std::uint32_t>; // next position, c1, c2

        FFPrecoders pre_;
        std::uint64_t next_id_ = 0;
        std::map<std::uint64_t, FFComplementarySet> open_;
        std::map<Key, std::set<std::uint64_t>> waiting_;
    };

    struct FFMatchResult
    {
        std::vector<FFComplementarySet> matched;
        std::vector<FFComplementarySet> open;
    };

    FFMatchResult match_stream(std::span<const FFSlot> slots, const FFPrecoders &pre);

    struct FFData
    {
        GFElement d11, d12, d21, d22;
        friend bool operator==(const FFData &, const FFData &) = default;
    };

    struct FFTransmit
    {
        GFElement x1, x2;
    };

    // Antenna outputs at position l: x_i = d_1i v_1i[l] + d_2i v_2i[l].
    FFTransmit ff_encode(const FFData &data, const FFPrecoders &pre, int position);

    struct FFReceived
    {
        GFVector y1, y2;
    };

    // Noise-free channel over a matched set, received vectors in position order.
    FFReceived ff_channel(const FFComplementarySet &set, const FFData &data, const FFPrecoders &pre);

    // Effective receive vectors H_rx,tx v over a matched set.
    struct FFEffectiveVectors
    {
        GFVector h11v11, h12v12, h11v21, h12v22; // receiver 1
        GFVector h21v21, h22v22, h21v11, h22v12; // receiver 2
    };

    FFEffectiveVectors ff_effective_vectors(const FFComplementarySet &set, const FFPrecoders &pre);

    // True when interference at both receivers lies on one direction with the
    // set's label as proportionality constant.
    bool ff_interference_aligned(const FFComplementarySet &set, const FFPrecoders &pre);

    // Recovers (d11, d12, d21, d22) exactly. Throws PreconditionError for an
    // unmatched set and DegenerateSet when a decoding matrix is singular.
    FFData ff_decode(const FFComplementarySet &set, const FFReceived &received, const FFPrecoders &pre);

    // Probability that three given slots, taken in order, form a matched set.
    double ff_triple_match_probability(std::uint32_t q);

    // Smallest n >= 3 with C(n,3) / (q-1)^4 >= target_prob.
    std::uint64_t expected_delay_scaling(std::uint32_t q, double target_prob);
} // namespace xalign

#endif
