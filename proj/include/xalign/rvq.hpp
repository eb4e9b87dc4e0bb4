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

#ifndef XALIGN_RVQ_HPP
#define XALIGN_RVQ_HPP

// Random vector quantization of directions in C^M.

#include "xalign/cgeom.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace xalign
{
    inline constexpr int kMaxCodebookBits = 24;

    // 2^B isotropic unit vectors in C^M stored contiguously, row per codeword.
    class Codebook
    {
    public:
        // Deterministic in `seed`: the same (seed, M, B) reproduces the same
        // codebook bit for bit. Throws ResourceLimit for B > kMaxCodebookBits.
        static Codebook generate(std::uint64_t seed, int M, int B);

        // Builds a codebook from explicit unit vectors; the count must be a
        // power of two.
        static Codebook from_vectors(std::span<const CVec> vectors, std::uint64_t seed = 0);

        int dim() const noexcept { return M_; }
        int bits() const noexcept { return B_; }
        std::uint64_t seed() const noexcept { return seed_; }
        std::size_t size() const noexcept { return data_.size() / static_cast<std::size_t>(M_); }

        CVec codeword(std::size_t i) const;
        std::span<const cdouble> row(std::size_t i) const
        {
            return {data_.data() + i * static_cast<std::size_t>(M_), static_cast<std::size_t>(M_)};
        }
        std::span<const cdouble> raw() const noexcept { return data_; }

        // Index of the codeword with the largest overlap with `q` (any
        // nonzero vector; only its direction matters). Ties go to the lowest
        // index.
        std::size_t quantize(const CVec &q) const;

        // Same as quantize() but takes a vector already of unit norm and
        // skips validation.
        std::size_t nearest_unit(const cdouble *q) const noexcept;

        // True when codeword j is what quantize() would return for the unit
        // vector q. Stops at the first codeword that beats j.
        bool is_nearest_unit(const cdouble *q, std::size_t j) const noexcept;

        // sin^2 between q and its codeword.
        double quantization_error(const CVec &q) const;

        // Binary file: "XRVQCB01", uint32 M, uint32 B, uint64 seed,
        // uint64 count, then count*M (re, im) float64 pairs, little-endian.
        void save(const std::filesystem::path &path) const;
        static Codebook load(const std::filesystem::path &path);

        friend bool operator==(const Codebook &, const Codebook &) = default;

    private:
        Codebook(int M, int B, std::uint64_t seed, std::vector<cdouble> data)
            : M_(M), B_(B), seed_(seed), data_(std::move(data)) {}

        int M_ = 0;
        int B_ = 0;
        std::uint64_t seed_ = 0;
        std::vector<cdouble> data_;
    };

    inline Codebook generate_codebook(std::uint64_t seed, int M, int B) { return Codebook::generate(seed, M, B); }
    inline std::size_t quantize(const Codebook &cb, const CVec &q) { return cb.quantize(q); }
    inline double quantization_error(const Codebook &cb, const CVec &q) { return cb.quantization_error(q); }

    // Upper bound 2^{-B/(M-1)} on the mean RVQ quantization error.
    double lemma1_bound(int M, double B);

    // Pr[error > x] = (1 - x^{M-1})^{2^B} for an isotropic direction
    // quantized by a random codebook.
    double quantization_error_ccdf(double x, int M, double B);
} // namespace xalign

#endif
