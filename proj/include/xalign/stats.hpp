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

#ifndef XALIGN_STATS_HPP
#define XALIGN_STATS_HPP

// Small statistics toolkit used by the experiment harness to attach
// standard errors and goodness-of-fit verdicts to Monte Carlo results.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace xalign
{
    // Welford accumulator. Sums are taken in insertion order, so a fixed
    // insertion order gives bit-identical results.
    class RunningStats
    {
    public:
        void add(double x) noexcept;

        std::size_t count() const noexcept { return n_; }
        double mean() const noexcept { return mean_; }
        double variance() const noexcept; // unbiased
        double stddev() const noexcept;
        double stderr_mean() const noexcept;

    private:
        std::size_t n_ = 0;
        double mean_ = 0.0;
        double m2_ = 0.0;
    };

    RunningStats summarize(std::span<const double> xs);

    // Standard error of a Bernoulli proportion estimate.
    double proportion_stderr(double p, std::size_t n);

    // One-sample Kolmogorov-Smirnov statistic sup |F_n - F|.
    double ks_statistic(std::vector<double> samples, const std::function<double(double)> &cdf);

    // Two-sample Kolmogorov-Smirnov statistic sup |F_n - G_m|.
    double ks_statistic_two_sample(std::vector<double> a, std::vector<double> b);

    // Limiting Kolmogorov survival function Q(x) = 2 sum (-1)^{k-1} exp(-2 k^2 x^2).
    double kolmogorov_survival(double x);

    // Critical value of the one-sample statistic at significance `alpha`,
    // using the limiting law with Stephens' finite-n correction.
    double ks_critical_value(std::size_t n, double alpha);

    // Critical value of the two-sample statistic at significance `alpha`.
    double ks_critical_value_two_sample(std::size_t n, std::size_t m, double alpha);

    struct ChiSquareResult
    {
        double statistic = 0.0;
        double critical = 0.0;
        std::size_t dof = 0;
        bool passed = false;
    };

    // Pearson test of observed counts against equal expected frequencies.
    ChiSquareResult chi_square_uniform(std::span<const std::size_t> counts, double alpha);

    struct LineFit
    {
        double slope = 0.0;
        double intercept = 0.0;
    };

    // Ordinary least squares y = intercept + slope x. Needs two distinct x.
    LineFit least_squares(std::span<const double> x, std::span<const double> y);
} // namespace xalign

#endif
