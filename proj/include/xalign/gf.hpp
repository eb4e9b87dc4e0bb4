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

#ifndef XALIGN_GF_HPP
#define XALIGN_GF_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace xalign
{
    class Rng;

    // Element of the prime field GF(q). The modulus travels with the value so
    // mixing elements of different fields is caught at run time.
    class GFElement
    {
    public:
        GFElement() = default;

        // Reduces `value` modulo q. Does not check primality; use PrimeField
        // to construct elements of a validated field.
        GFElement(std::int64_t value, std::uint32_t q);

        std::uint32_t value() const noexcept { return value_; }
        std::uint32_t modulus() const noexcept { return q_; }
        bool is_zero() const noexcept { return value_ == 0; }

        friend bool operator==(const GFElement &, const GFElement &) = default;

    private:
        std::uint32_t value_ = 0;
        std::uint32_t q_ = 0;
    };

    // GF(q) for prime q >= 3. Composite or too-small moduli are rejected.
    class PrimeField
    {
    public:
        explicit PrimeField(std::uint32_t q);

        std::uint32_t order() const noexcept { return q_; }
        GFElement operator()(std::int64_t value) const { return {value, q_}; }
        GFElement zero() const { return {0, q_}; }
        GFElement one() const { return {1, q_}; }

        GFElement uniform(Rng &rng) const;
        GFElement uniform_nonzero(Rng &rng) const;

        std::vector<GFElement> elements() const;

    private:
        std::uint32_t q_;
    };

    bool is_prime(std::uint64_t n) noexcept;

    GFElement gf_add(GFElement a, GFElement b);
    GFElement gf_sub(GFElement a, GFElement b);
    GFElement gf_neg(GFElement a);
    GFElement gf_mul(GFElement a, GFElement b);
    GFElement gf_inv(GFElement a); // extended Euclid; throws DivisionByZero on 0
    GFElement gf_div(GFElement a, GFElement b);

    inline GFElement operator+(GFElement a, GFElement b) { return gf_add(a, b); }
    inline GFElement operator-(GFElement a, GFElement b) { return gf_sub(a, b); }
    inline GFElement operator-(GFElement a) { return gf_neg(a); }
    inline GFElement operator*(GFElement a, GFElement b) { return gf_mul(a, b); }
    inline GFElement operator/(GFElement a, GFElement b) { return gf_div(a, b); }

    inline constexpr std::size_t kGFDim = 3;

    // A vector of the three-dimensional space over GF(q).
    class GFVector
    {
    public:
        GFVector() = default;
        GFVector(GFElement a, GFElement b, GFElement c);
        GFVector(const PrimeField &f, std::int64_t a, std::int64_t b, std::int64_t c);

        const GFElement &operator[](std::size_t i) const { return v_[i]; }
        std::uint32_t modulus() const noexcept { return v_[0].modulus(); }
        bool is_zero() const noexcept;

        auto begin() const { return v_.begin(); }
        auto end() const { return v_.end(); }

        friend bool operator==(const GFVector &, const GFVector &) = default;

    private:
        std::array<GFElement, kGFDim> v_{};
    };

    GFVector operator+(const GFVector &a, const GFVector &b);

    // c . v, entrywise.
    GFVector scalar_product(GFElement c, const GFVector &v);

    // The unique nonzero c with v1 = c . v2, if one exists.
    std::optional<GFElement> same_direction(const GFVector &v1, const GFVector &v2);

    // Row-major 3x3 matrix over GF(q).
    class GFMatrix3
    {
    public:
        GFMatrix3() = default;
        explicit GFMatrix3(const std::array<GFVector, kGFDim> &rows);
        static GFMatrix3 from_columns(const GFVector &c0, const GFVector &c1, const GFVector &c2);
        static GFMatrix3 identity(const PrimeField &f);

        const GFVector &row(std::size_t i) const { return rows_[i]; }
        GFElement operator()(std::size_t i, std::size_t j) const { return rows_[i][j]; }
        std::uint32_t modulus() const noexcept { return rows_[0].modulus(); }

    private:
        std::array<GFVector, kGFDim> rows_{};
    };

    GFVector operator*(const GFMatrix3 &a, const GFVector &x);

    // Exact solution of A x = y by Gauss-Jordan elimination over GF(q).
    // Throws SingularMatrix when A is not invertible.
    GFVector solve_3x3(const GFMatrix3 &a, const GFVector &y);
} // namespace xalign

#endif
