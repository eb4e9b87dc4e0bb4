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

#ifndef XALIGN_XSIM_HPP
#define XALIGN_XSIM_HPP

// Rayleigh-fading two-user X channel over M complementary slots.
//
// Index convention: H_ij is the channel from transmitter j to receiver i and
// v_ij carries the message from transmitter j to receiver i. Receiver 1 sees
// interference along q21 = H11 v21 and q22 = H12 v22, receiver 2 along
// r11 = H21 v11 and r12 = H22 v12.

#include "xalign/cgeom.hpp"
#include "xalign/rvq.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace xalign
{
    class Rng;

    struct FadingSlot
    {
        std::uint64_t t = 0;
        cdouble h11, h12, h21, h22;

        static FadingSlot draw(Rng &rng, std::uint64_t t);
    };

    std::vector<FadingSlot> generate_fading_slots(Rng &rng, std::size_t count, std::uint64_t first_t = 0);

    struct Precoders
    {
        CVec v11, v12, v21, v22;

        int dim() const noexcept { return static_cast<int>(v11.size()); }

        // Unit norm within kUnitTol, equal dimensions, pairwise overlap
        // below 1 - 1e-6. Throws InvalidOperands on violation.
        void validate() const;

        static Precoders random(Rng &rng, int M);
    };

    // Ordered M-tuple of slots forming one complementary set.
    struct XRealization
    {
        std::vector<FadingSlot> slots;

        int dim() const noexcept { return static_cast<int>(slots.size()); }

        // Diagonal of H_ij, i and j in {1, 2}.
        CVec gains(int i, int j) const;
        Eigen::MatrixXcd channel(int i, int j) const { return gains(i, j).asDiagonal(); }
    };

    struct InterferenceDirections
    {
        CVec q21, q22, r11, r12;
    };

    InterferenceDirections interference_directions(const XRealization &x, const Precoders &pre);

    // Codeword indices (receiver 1, receiver 2) when both pairs quantize to a
    // common codeword, empty otherwise.
    std::optional<std::pair<std::size_t, std::size_t>> match_indices(const XRealization &x, const Precoders &pre,
                                                                      const Codebook &cb);

    inline bool is_matched(const XRealization &x, const Precoders &pre, const Codebook &cb)
    {
        return match_indices(x, pre, cb).has_value();
    }

    // A matched M-tuple of slot positions (into the searched list) with its
    // codebook index pair as label.
    struct ComplementarySet
    {
        std::vector<std::size_t> slots;
        std::size_t index_rx1 = 0;
        std::size_t index_rx2 = 0;
    };

    inline constexpr double kMaxCombinations = 1e8;

    // Walks the M-combinations of `slots` in lexicographic order and keeps
    // every matched combination whose slots are all still unused.
    // Throws ResourceLimit when C(n, M) exceeds kMaxCombinations.
    std::vector<ComplementarySet> find_matched_sets(std::span<const FadingSlot> slots, const Precoders &pre,
                                                    const Codebook &cb, int M);

    XRealization realization_of(std::span<const FadingSlot> slots, const ComplementarySet &set);

    // A realization conditioned on the match event together with the common
    // codeword of each receiver.
    struct MatchedSample
    {
        XRealization x;
        CVec w_rx1;
        CVec w_rx2;
        std::uint64_t attempts = 0;
    };

    inline constexpr std::uint64_t kMaxRejections = 10'000'000;

    // Draws whole slot tuples until is_matched holds. Acceptance is about
    // 2^-2B; meant for small B and for measuring that acceptance.
    MatchedSample sample_matched_naive(Rng &rng, const Precoders &pre, const Codebook &cb,
                                       std::uint64_t max_attempts = kMaxRejections);

    // Same conditional law as sample_matched_naive. The two receivers' match
    // events involve disjoint gains, so each receiver's pair of gain vectors
    // is drawn by its own rejection loop (acceptance about 2^-B each).
    // `attempts` is the sum over both receivers.
    MatchedSample sample_matched_realization(Rng &rng, const Precoders &pre, const Codebook &cb,
                                             std::uint64_t max_attempts = kMaxRejections);

    struct EnsembleOptions
    {
        // Expected number of codewords in the proposal cap.
        double cap_codewords = 20.0;
        std::uint64_t max_attempts = kMaxRejections;
    };

    // Matched realization drawn from the joint law of (gains, codebook) with
    // the codebook an i.i.d. isotropic draw of 2^B entries that is never
    // stored. Each receiver gets an independent codebook draw. Works for any
    // B up to 60.
    MatchedSample sample_matched_ensemble(Rng &rng, const Precoders &pre, int B, const EnsembleOptions &opt = {});

    struct StreamSymbols
    {
        cdouble d11, d12, d21, d22;

        // Circular Gaussian symbols with E|d|^2 = M p / 4.
        static StreamSymbols draw(Rng &rng, int M, double p);
    };

    struct TransmitSignals
    {
        CVec x1, x2;
    };

    TransmitSignals transmit(const XRealization &x, const Precoders &pre, const StreamSymbols &d);

    struct ReceivedSignals
    {
        CVec y1, y2;
    };

    // Unit-variance circular Gaussian noise per coordinate; `rng` may be null
    // for the noiseless channel.
    ReceivedSignals receive(const XRealization &x, const TransmitSignals &s, Rng *rng);

    // Swap the two receivers (H_ij -> H_{3-i,j}, v_ij -> v_{3-i,j}).
    XRealization swap_receivers(const XRealization &x);
    Precoders swap_receivers(const Precoders &pre);

    // Swap the two transmitters (H_ij -> H_{i,3-j}, v_ij -> v_{i,3-j}).
    XRealization swap_transmitters(const XRealization &x);
    Precoders swap_transmitters(const Precoders &pre);
} // namespace xalign

#endif
