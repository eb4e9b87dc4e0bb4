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

#include "xalign/gf.hpp"

#include "xalign/errors.hpp"
#include "xalign/rng.hpp"

#include <string>
#include <utility>

namespace xalign
{
    namespace
    {
        void check_same(std::uint32_t qa, std::uint32_t qb)
        {
            if (qa == 0 || qb == 0)
                throw InvalidOperands("GF element without a field");
            if (qa != qb)
                throw InvalidOperands("GF modulus mismatch: " + std::to_string(qa) + " vs " + std::to_string(qb));
        }
    } // namespace

    bool is_prime(std::uint64_t n) noexcept
    {
        if (n < 2)
            return false;
        if (n % 2 == 0)
            return n == 2;
        for (std::uint64_t d = 3; d * d <= n; d += 2)
            if (n % d == 0)
                return false;
        return true;
    }

    GFElement::GFElement(std::int64_t value, std::uint32_t q) : q_(q)
    {
        if (q < 2)
            throw InvalidOperands("GF modulus must be at least 2");
        std::int64_t r = value % static_cast<std::int64_t>(q);
        if (r < 0)
            r += q;
        value_ = static_cast<std::uint32_t>(r);
    }

    PrimeField::PrimeField(std::uint32_t q) : q_(q)
    {
        if (q < 3 || !is_prime(q))
            throw InvalidOperands("field order must be a prime >= 3, got " + std::to_string(q));
    }

    GFElement PrimeField::uniform(Rng &rng) const
    {
        return {static_cast<std::int64_t>(rng.below(q_)), q_};
    }

    GFElement PrimeField::uniform_nonzero(Rng &rng) const
    {
        return {static_cast<std::int64_t>(1 + rng.below(q_ - 1)), q_};
    }

    std::vector<GFElement> PrimeField::elements() const
    {
        std::vector<GFElement> out;
        out.reserve(q_);
        for (std::uint32_t v = 0; v < q_; ++v)
            out.emplace_back(v, q_);
        return out;
    }

    GFElement gf_add(GFElement a, GFElement b)
    {
        check_same(a.modulus(), b.modulus());
        return {static_cast<std::int64_t>(a.value()) + b.value(), a.modulus()};
    }

    GFElement gf_sub(GFElement a, GFElement b)
    {
        check_same(a.modulus(), b.modulus());
        return {static_cast<std::int64_t>(a.value()) - b.value(), a.modulus()};
    }

    GFElement gf_neg(GFElement a)
    {
        check_same(a.modulus(), a.modulus());
        return {-static_cast<std::int64_t>(a.value()), a.modulus()};
    }

    GFElement gf_mul(GFElement a, GFElement b)
    {
        check_same(a.modulus(), b.modulus());
        std::uint64_t p = static_cast<std::uint64_t>(a.value()) * b.value();
        return {static_cast<std::int64_t>(p % a.modulus()), a.modulus()};
    }

    GFElement gf_inv(GFElement a)
    {
        check_same(a.modulus(), a.modulus());
        if (a.is_zero())
            throw DivisionByZero("inverse of zero in GF(" + std::to_string(a.modulus()) + ")");
        std::int64_t r0 = a.modulus(), r1 = a.value();
        std::int64_t s0 = 0, s1 = 1;
        while (r1 != 0)
        {
            std::int64_t k = r0 / r1;
            r0 = std::exchange(r1, r0 - k * r1);
            s0 = std::exchange(s1, s0 - k * s1);
        }
        return {s0, a.modulus()};
    }

    GFElement gf_div(GFElement a, GFElement b)
    {
        return gf_mul(a, gf_inv(b));
    }

    GFVector::GFVector(GFElement a, GFElement b, GFElement c) : v_{a, b, c}
    {
        check_same(a.modulus(), b.modulus());
        check_same(a.modulus(), c.modulus());
    }

    GFVector::GFVector(const PrimeField &f, std::int64_t a, std::int64_t b, std::int64_t c)
        : v_{f(a), f(b), f(c)}
    {
    }

    bool GFVector::is_zero() const noexcept
    {
        for (const auto &e : v_)
            if (!e.is_zero())
                return false;
        return true;
    }

    GFVector operator+(const GFVector &a, const GFVector &b)
    {
        return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
    }

    GFVector scalar_product(GFElement c, const GFVector &v)
    {
        return {c * v[0], c * v[1], c * v[2]};
    }

    std::optional<GFElement> same_direction(const GFVector &v1, const GFVector &v2)
    {
        check_same(v1.modulus(), v2.modulus());
        if (v1.is_zero() || v2.is_zero())
            throw InvalidOperands("same_direction: zero vector");
        // The candidate scalar is fixed by any coordinate where v2 is nonzero.
        std::size_t k = 0;
        while (v2[k].is_zero())
            ++k;
        GFElement c = v1[k] / v2[k];
        if (c.is_zero() || scalar_product(c, v2) != v1)
            return std::nullopt;
        return c;
    }

    GFMatrix3::GFMatrix3(const std::array<GFVector, kGFDim> &rows) : rows_(rows)
    {
        check_same(rows_[0].modulus(), rows_[1].modulus());
        check_same(rows_[0].modulus(), rows_[2].modulus());
    }

    GFMatrix3 GFMatrix3::from_columns(const GFVector &c0, const GFVector &c1, const GFVector &c2)
    {
        return GFMatrix3({GFVector(c0[0], c1[0], c2[0]),
                          GFVector(c0[1], c1[1], c2[1]),
                          GFVector(c0[2], c1[2], c2[2])});
    }

    GFMatrix3 GFMatrix3::identity(const PrimeField &f)
    {
        return GFMatrix3({GFVector(f, 1, 0, 0), GFVector(f, 0, 1, 0), GFVector(f, 0, 0, 1)});
    }

    GFVector operator*(const GFMatrix3 &a, const GFVector &x)
    {
        check_same(a.modulus(), x.modulus());
        std::array<GFElement, kGFDim> y;
        for (std::size_t i = 0; i < kGFDim; ++i)
            y[i] = a(i, 0) * x[0] + a(i, 1) * x[1] + a(i, 2) * x[2];
        return {y[0], y[1], y[2]};
    }

    GFVector solve_3x3(const GFMatrix3 &a, const GFVector &y)
    {
        check_same(a.modulus(), y.modulus());
        // Augmented matrix [A | y].
        std::array<std::array<GFElement, kGFDim + 1>, kGFDim> m;
        for (std::size_t i = 0; i < kGFDim; ++i)
        {
            for (std::size_t j = 0; j < kGFDim; ++j)
                m[i][j] = a(i, j);
            m[i][kGFDim] = y[i];
        }

        for (std::size_t col = 0; col < kGFDim; ++col)
        {
            std::size_t pivot = col;
            while (pivot < kGFDim && m[pivot][col].is_zero())
                ++pivot;
            if (pivot == kGFDim)
                throw SingularMatrix("solve_3x3: matrix is singular over GF(" + std::to_string(a.modulus()) + ")");
            std::swap(m[col], m[pivot]);

            GFElement inv = gf_inv(m[col][col]);
            for (auto &e : m[col])
                e = e * inv;
            for (std::size_t r = 0; r < kGFDim; ++r)
            {
                if (r == col || m[r][col].is_zero())
                    continue;
                GFElement f = m[r][col];
                for (std::size_t j = 0; j <= kGFDim; ++j)
                    m[r][j] = m[r][j] - f * m[col][j];
            }
        }
        return {m[0][kGFDim], m[1][kGFDim], m[2][kGFDim]};
    }
} // namespace xalign
