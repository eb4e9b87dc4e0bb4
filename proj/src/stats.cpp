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

#include "xalign/stats.hpp"

#include "xalign/errors.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>

namespace xalign
{
    void RunningStats::add(double x) noexcept
    {
        ++n_;
        const double d = x - mean_;
        mean_ += d / static_cast<double>(n_);
        m2_ += d * (x - mean_);
    }

    double RunningStats::variance() const noexcept
    {
        return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
    }

    double RunningStats::stddev() const noexcept
    {
        return std::sqrt(variance());
    }

    double RunningStats::stderr_mean() const noexcept
    {
        return n_ > 0 ? stddev() / std::sqrt(static_cast<double>(n_)) : 0.0;
    }

    RunningStats summarize(std::span<const double> xs)
    {
        RunningStats s;
        for (double x : xs)
            s.add(x);
        return s;
    }

    double proportion_stderr(double p, std::size_t n)
    {
        return n > 0 ? std::sqrt(p * (1.0 - p) / static_cast<double>(n)) : 0.0;
    }

    double ks_statistic(std::vector<double> samples, const std::function<double(double)> &cdf)
    {
        if (samples.empty())
            throw InvalidOperands("ks_statistic: no samples");
        std::sort(samples.begin(), samples.end());
        const double n = static_cast<double>(samples.size());
        double d = 0.0;
        for (std::size_t i = 0; i < samples.size(); ++i)
        {
            const double f = cdf(samples[i]);
            d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
        }
        return d;
    }

    double ks_statistic_two_sample(std::vector<double> a, std::vector<double> b)
    {
        if (a.empty() || b.empty())
            throw InvalidOperands("ks_statistic_two_sample: empty sample");
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        const double na = static_cast<double>(a.size());
        const double nb = static_cast<double>(b.size());
        std::size_t i = 0, j = 0;
        double d = 0.0;
        while (i < a.size() && j < b.size())
        {
            const double x = std::min(a[i], b[j]);
            while (i < a.size() && a[i] <= x)
                ++i;
            while (j < b.size() && b[j] <= x)
                ++j;
            d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
        }
        return d;
    }

    double kolmogorov_survival(double x)
    {
        if (x <= 0.0)
            return 1.0;
        double sum = 0.0;
        for (int k = 1; k <= 100; ++k)
        {
            const double term = std::exp(-2.0 * k * k * x * x);
            sum += (k % 2 == 1) ? term : -term;
            if (term < 1e-18)
                break;
        }
        return std::clamp(2.0 * sum, 0.0, 1.0);
    }

    namespace
    {
        // x with kolmogorov_survival(x) = alpha, by bisection.
        double kolmogorov_quantile(double alpha)
        {
            double lo = 0.2, hi = 5.0;
            for (int it = 0; it < 200; ++it)
            {
                const double mid = 0.5 * (lo + hi);
                if (kolmogorov_survival(mid) > alpha)
                    lo = mid;
                else
                    hi = mid;
            }
            return 0.5 * (lo + hi);
        }
    } // namespace

    double ks_critical_value(std::size_t n, double alpha)
    {
        if (n == 0)
            throw InvalidOperands("ks_critical_value: n must be positive");
        const double sn = std::sqrt(static_cast<double>(n));
        return kolmogorov_quantile(alpha) / (sn + 0.12 + 0.11 / sn);
    }

    double ks_critical_value_two_sample(std::size_t n, std::size_t m, double alpha)
    {
        if (n == 0 || m == 0)
            throw InvalidOperands("ks_critical_value_two_sample: empty sample");
        const double ne = static_cast<double>(n) * static_cast<double>(m) / static_cast<double>(n + m);
        return kolmogorov_quantile(alpha) / std::sqrt(ne);
    }

    ChiSquareResult chi_square_uniform(std::span<const std::size_t> counts, double alpha)
    {
        if (counts.size() < 2)
            throw InvalidOperands("chi_square_uniform: need at least two cells");
        double total = 0.0;
        for (auto c : counts)
            total += static_cast<double>(c);
        const double expected = total / static_cast<double>(counts.size());
        ChiSquareResult r;
        for (auto c : counts)
        {
            const double d = static_cast<double>(c) - expected;
            r.statistic += d * d / expected;
        }
        r.dof = counts.size() - 1;
        boost::math::chi_squared dist(static_cast<double>(r.dof));
        r.critical = boost::math::quantile(boost::math::complement(dist, alpha));
        r.passed = r.statistic <= r.critical;
        return r;
    }

    LineFit least_squares(std::span<const double> x, std::span<const double> y)
    {
        if (x.size() != y.size() || x.size() < 2)
            throw InvalidOperands("least_squares: need at least two paired points");
        const double n = static_cast<double>(x.size());
        double mx = 0.0, my = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
        {
            mx += x[i];
            my += y[i];
        }
        mx /= n;
        my /= n;
        double sxx = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
        {
            sxx += (x[i] - mx) * (x[i] - mx);
            sxy += (x[i] - mx) * (y[i] - my);
        }
        if (sxx == 0.0)
            throw InvalidOperands("least_squares: x values are all equal");
        const double slope = sxy / sxx;
        return {slope, my - slope * mx};
    }
} // namespace xalign
