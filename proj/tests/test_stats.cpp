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

#include "xalign/rng.hpp"
#include "xalign/stats.hpp"

#include <doctest.h>

#include <cmath>

using namespace xalign;

TEST_CASE("running stats match closed forms")
{
    const std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
    const RunningStats s = summarize(xs);
    CHECK(s.count() == 4);
    CHECK(s.mean() == doctest::Approx(2.5));
    CHECK(s.variance() == doctest::Approx(5.0 / 3.0));
    CHECK(s.stderr_mean() == doctest::Approx(std::sqrt(5.0 / 12.0)));
    CHECK(proportion_stderr(0.25, 100) == doctest::Approx(std::sqrt(0.25 * 0.75 / 100)));
}

TEST_CASE("Kolmogorov critical values")
{
    // Asymptotic 1% point of the Kolmogorov distribution is 1.6276.
    CHECK(kolmogorov_survival(1.6276) == doctest::Approx(0.01).epsilon(1e-3));
    CHECK(ks_critical_value(100000, 0.01) == doctest::Approx(1.6276 / std::sqrt(100000.0)).epsilon(1e-3));
    CHECK(ks_critical_value_two_sample(2000, 2000, 0.01) == doctest::Approx(1.6276 / std::sqrt(1000.0)).epsilon(1e-3));
}

TEST_CASE("KS statistics")
{
    Rng rng(1);
    std::vector<double> u;
    for (int i = 0; i < 20000; ++i)
        u.push_back(rng.uniform());
    const double d = ks_statistic(u, [](double x) { return std::clamp(x, 0.0, 1.0); });
    CHECK(d < ks_critical_value(u.size(), 0.01));
    const double shifted = ks_statistic(u, [](double x) { return std::clamp(x * x, 0.0, 1.0); });
    CHECK(shifted > 0.2);

    CHECK(ks_statistic_two_sample({1, 2, 3}, {1, 2, 3}) == 0.0);
    CHECK(ks_statistic_two_sample({1, 2, 3}, {4, 5, 6}) == 1.0);
}

TEST_CASE("chi-square uniformity")
{
    const std::vector<std::size_t> flat{100, 100, 100, 100};
    const auto r = chi_square_uniform(flat, 0.01);
    CHECK(r.statistic == 0.0);
    CHECK(r.dof == 3);
    CHECK(r.critical == doctest::Approx(11.3449).epsilon(1e-4));
    CHECK(r.passed);
    const std::vector<std::size_t> skew{200, 50, 50, 100};
    CHECK_FALSE(chi_square_uniform(skew, 0.01).passed);
}

TEST_CASE("least squares recovers an exact line")
{
    const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
    const LineFit f = least_squares(x, y);
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
}

TEST_CASE("substreams are deterministic and distinct")
{
    static_assert(substream_key(1, "a", 0) == substream_key(1, "a", 0));
    CHECK(substream_key(1, "a", 0) != substream_key(1, "a", 1));
    CHECK(substream_key(1, "a", 0) != substream_key(1, "b", 0));
    CHECK(substream_key(1, "a", 0) != substream_key(2, "a", 0));
    Rng a = Rng::substream(5, "x", 3), b = Rng::substream(5, "x", 3);
    for (int i = 0; i < 100; ++i)
        CHECK(a.normal() == b.normal());
}
