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

#include "xalign/rvq.hpp"

#include "xalign/errors.hpp"
#include "xalign/rng.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

namespace xalign
{
    namespace
    {
        constexpr char kMagic[8] = {'X', 'R', 'V', 'Q', 'C', 'B', '0', '1'};

        inline double overlap_raw(const cdouble *q, const cdouble *w, int M) noexcept
        {
            double re = 0.0, im = 0.0;
            for (int k = 0; k < M; ++k)
            {
                // conj(q_k) * w_k
                re += q[k].real() * w[k].real() + q[k].imag() * w[k].imag();
                im += q[k].real() * w[k].imag() - q[k].imag() * w[k].real();
            }
            return re * re + im * im;
        }

        template <class T>
        void put(std::ofstream &out, T v)
        {
            static_assert(std::endian::native == std::endian::little, "codebook files are little-endian");
            out.write(reinterpret_cast<const char *>(&v), sizeof(T));
        }

        template <class T>
        T get(std::ifstream &in, const std::filesystem::path &path)
        {
            T v{};
            if (!in.read(reinterpret_cast<char *>(&v), sizeof(T)))
                throw std::runtime_error("truncated codebook file: " + path.string());
            return v;
        }
    } // namespace

    Codebook Codebook::generate(std::uint64_t seed, int M, int B)
    {
        if (M < 2)
            throw InvalidOperands("codebook dimension must be at least 2");
        if (B < 0)
            throw InvalidOperands("codebook bits must be non-negative");
        if (B > kMaxCodebookBits)
            throw ResourceLimit("codebook with B=" + std::to_string(B) + " exceeds the limit of " +
                                std::to_string(kMaxCodebookBits) + " bits");
        const std::size_t count = std::size_t{1} << B;
        std::vector<cdouble> data(count * static_cast<std::size_t>(M));
        Rng rng = Rng::substream(seed, "rvq-codebook", 0);
        for (std::size_t i = 0; i < count; ++i)
        {
            const CVec w = sample_isotropic(rng, M);
            for (int k = 0; k < M; ++k)
                data[i * M + k] = w[k];
        }
        return Codebook(M, B, seed, std::move(data));
    }

    Codebook Codebook::from_vectors(std::span<const CVec> vectors, std::uint64_t seed)
    {
        if (vectors.empty() || !std::has_single_bit(vectors.size()))
            throw InvalidOperands("codebook size must be a power of two");
        const int M = static_cast<int>(vectors.front().size());
        if (M < 1)
            throw InvalidOperands("codebook dimension must be positive");
        std::vector<cdouble> data;
        data.reserve(vectors.size() * M);
        for (const auto &v : vectors)
        {
            if (v.size() != M || std::abs(v.squaredNorm() - 1.0) > kUnitTol)
                throw InvalidOperands("codebook entries must be unit vectors of equal dimension");
            for (int k = 0; k < M; ++k)
                data.push_back(v[k]);
        }
        const int B = std::countr_zero(vectors.size());
        return Codebook(M, B, seed, std::move(data));
    }

    CVec Codebook::codeword(std::size_t i) const
    {
        CVec w(M_);
        auto r = row(i);
        for (int k = 0; k < M_; ++k)
            w[k] = r[k];
        return w;
    }

    std::size_t Codebook::nearest_unit(const cdouble *q) const noexcept
    {
        const std::size_t n = size();
        const cdouble *w = data_.data();
        std::size_t best = 0;
        double best_z = -1.0;
        for (std::size_t j = 0; j < n; ++j, w += M_)
        {
            const double z = overlap_raw(q, w, M_);
            if (z > best_z)
            {
                best_z = z;
                best = j;
            }
        }
        return best;
    }

    bool Codebook::is_nearest_unit(const cdouble *q, std::size_t j) const noexcept
    {
        const double zj = overlap_raw(q, data_.data() + j * M_, M_);
        const std::size_t n = size();
        const cdouble *w = data_.data();
        for (std::size_t k = 0; k < n; ++k, w += M_)
        {
            if (k == j)
                continue;
            const double z = overlap_raw(q, w, M_);
            if (z > zj || (z == zj && k < j))
                return false;
        }
        return true;
    }

    std::size_t Codebook::quantize(const CVec &q) const
    {
        if (q.size() != M_)
            throw InvalidOperands("quantize: dimension mismatch");
        const CVec u = normalize(q);
        return nearest_unit(u.data());
    }

    double Codebook::quantization_error(const CVec &q) const
    {
        if (q.size() != M_)
            throw InvalidOperands("quantization_error: dimension mismatch");
        const CVec u = normalize(q);
        return sin2(u, codeword(nearest_unit(u.data())));
    }

    void Codebook::save(const std::filesystem::path &path) const
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open codebook file for writing: " + path.string());
        out.write(kMagic, sizeof kMagic);
        put<std::uint32_t>(out, static_cast<std::uint32_t>(M_));
        put<std::uint32_t>(out, static_cast<std::uint32_t>(B_));
        put<std::uint64_t>(out, seed_);
        put<std::uint64_t>(out, size());
        for (const auto &c : data_)
        {
            put<double>(out, c.real());
            put<double>(out, c.imag());
        }
        if (!out)
            throw std::runtime_error("error writing codebook file: " + path.string());
    }

    Codebook Codebook::load(const std::filesystem::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw std::runtime_error("cannot open codebook file: " + path.string());
        char magic[sizeof kMagic];
        if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
            throw std::runtime_error("not a codebook file: " + path.string());
        const auto M = get<std::uint32_t>(in, path);
        const auto B = get<std::uint32_t>(in, path);
        const auto seed = get<std::uint64_t>(in, path);
        const auto count = get<std::uint64_t>(in, path);
        if (M < 1 || B > kMaxCodebookBits || count != (std::uint64_t{1} << B))
            throw std::runtime_error("corrupt codebook header: " + path.string());
        std::vector<cdouble> data(count * M);
        for (auto &c : data)
        {
            const double re = get<double>(in, path);
            const double im = get<double>(in, path);
            c = {re, im};
        }
        return Codebook(static_cast<int>(M), static_cast<int>(B), seed, std::move(data));
    }

    double lemma1_bound(int M, double B)
    {
        if (M < 2)
            throw InvalidOperands("lemma1_bound: M must be at least 2");
        return std::exp2(-B / (M - 1));
    }

    double quantization_error_ccdf(double x, int M, double B)
    {
        if (M < 2)
            throw InvalidOperands("quantization_error_ccdf: M must be at least 2");
        if (x <= 0.0)
            return 1.0;
        if (x >= 1.0)
            return 0.0;
        // (1 - x^{M-1})^{2^B} evaluated in log space for large B.
        return std::exp(std::exp2(B) * std::log1p(-std::pow(x, M - 1)));
    }
} // namespace xalign
