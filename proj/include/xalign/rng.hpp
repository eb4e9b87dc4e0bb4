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

#ifndef XALIGN_RNG_HPP
#define XALIGN_RNG_HPP

#include <complex>
#include <cstdint>
#include <random>
#include <string_view>

namespace xalign
{
    // SplitMix64 finalizer (Steele, Lea, Flood 2014). Used as the mixing
    // function for substream derivation, never as a generator on its own.
    constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
    {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    // 64-bit FNV-1a, used to turn an experiment tag into a stream key.
    constexpr std::uint64_t fnv1a(std::string_view s) noexcept
    {
        std::uint64_t h = 0xCBF29CE484222325ULL;
        for (char c : s)
        {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001B3ULL;
        }
        return h;
    }

    // Substream key: splitmix64(splitmix64(seed ^ fnv1a(tag)) ^ index).
    // Every Monte Carlo trial draws from its own substream keyed by
    // (run seed, tag, trial index), so results do not depend on how trials
    // are distributed over workers.
    constexpr std::uint64_t substream_key(std::uint64_t seed, std::string_view tag, std::uint64_t index) noexcept
    {
        return splitmix64(splitmix64(seed ^ fnv1a(tag)) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
    }

    // Random source handed explicitly to every sampling operation.
    // Engine: std::mt19937_64 seeded with a substream key. Normal deviates
    // use std::normal_distribution, so values are reproducible for a given
    // standard library.
    class Rng
    {
    public:
        explicit Rng(std::uint64_t key) : engine_(key) {}

        static Rng substream(std::uint64_t seed, std::string_view tag, std::uint64_t index)
        {
            return Rng(substream_key(seed, tag, index));
        }

        // Uniform on [0, 1).
        double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

        // Uniform on (0, 1]; safe as an argument to log().
        double uniform_pos() { return 1.0 - uniform(); }

        double normal() { return normal_(engine_); }

        // Standard circularly-symmetric complex Gaussian, E|z|^2 = 1.
        std::complex<double> cgauss()
        {
            constexpr double s = 0.70710678118654752440;
            double re = normal();
            double im = normal();
            return {s * re, s * im};
        }

        // Uniform integer in [0, n).
        std::uint64_t below(std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_); }

        std::mt19937_64 &engine() { return engine_; }

    private:
        std::mt19937_64 engine_;
        std::normal_distribution<double> normal_{0.0, 1.0};
    };
} // namespace xalign

#endif
