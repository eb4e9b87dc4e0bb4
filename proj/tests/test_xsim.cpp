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

#include "xalign/errors.hpp"
#include "xalign/harness.hpp"
#include "xalign/rng.hpp"
#include "xalign/stats.hpp"
#include "xalign/xsim.hpp"

#include <doctest.h>

#include <cmath>

using namespace xalign;

namespace
{
    XRealization unit_channels(int M)
    {
        XRealization x;
        for (int l = 0; l < M; ++l)
            x.slots.push_back({static_cast<std::uint64_t>(l), 1.0, 1.0, 1.0, 1.0});
        return x;
    }

    // Gains that make q22 parallel to q21 and r12 parallel to r11.
    std::vector<FadingSlot> aligned_slots(Rng &rng, const Precoders &pre)
    {
        std::vector<FadingSlot> s;
        const cdouble c1 = rng.cgauss(), c2 = rng.cgauss();
        for (int l = 0; l < pre.dim(); ++l)
        {
            FadingSlot f = FadingSlot::draw(rng, l);
            f.h12 = c1 * f.h11 * pre.v21[l] / pre.v22[l];
            f.h22 = c2 * f.h21 * pre.v11[l] / pre.v12[l];
            s.push_back(f);
        }
        return s;
    }

    double combos(int n, int k)
    {
        double c = 1;
        for (int i = 0; i < k; ++i)
            c = c * (n - i) / (i + 1);
        return c;
    }
} // namespace

TEST_CASE("interference directions")
{
    Rng rng(1);
    const Precoders pre = Precoders::random(rng, 3);
    const auto d = interference_directions(unit_channels(3), pre);
    CHECK((d.q21 - pre.v21).norm() == 0.0);
    CHECK((d.q22 - pre.v22).norm() == 0.0);
    CHECK((d.r11 - pre.v11).norm() == 0.0);
    CHECK((d.r12 - pre.v12).norm() == 0.0);

    XRealization x;
    x.slots = generate_fading_slots(rng, 3);
    const auto before = interference_directions(x, pre);
    const cdouble c{0.3, -2.0};
    x.slots[1].h11 *= c;
    const auto after = interference_directions(x, pre);
    CHECK(std::abs(after.q21[0] - before.q21[0]) == 0.0);
    CHECK(std::abs(after.q21[1] - c * before.q21[1]) < 1e-15);
    CHECK(std::abs(after.q21[2] - before.q21[2]) == 0.0);

    RunningStats n2;
    for (int i = 0; i < 100000; ++i)
    {
        x.slots = generate_fading_slots(rng, 3);
        n2.add(interference_directions(x, pre).q21.squaredNorm());
    }
    CHECK(std::abs(n2.mean() - 1.0) < 3 * n2.stderr_mean());
}

TEST_CASE("channel matrices are diagonal")
{
    Rng rng(2);
    XRealization x;
    x.slots = generate_fading_slots(rng, 4);
    const Eigen::MatrixXcd H = x.channel(1, 2);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK((i == j ? std::abs(H(i, j) - x.slots[i].h12) : std::abs(H(i, j))) == 0.0);
    CHECK_THROWS_AS(x.gains(3, 1), InvalidOperands);
}

TEST_CASE("precoder validation")
{
    Rng rng(3);
    Precoders p = Precoders::random(rng, 3);
    CHECK_NOTHROW(p.validate());
    p.v22 = std::polar(1.0, 0.4) * p.v21;
    CHECK_THROWS_AS(p.validate(), InvalidOperands);
    p = Precoders::random(rng, 3);
    p.v11 *= 2.0;
    CHECK_THROWS_AS(p.validate(), InvalidOperands);
}

TEST_CASE("is_matched examples")
{
    Rng rng(4);
    const Precoders pre = Precoders::random(rng, 3);
    const Codebook single = Codebook::generate(1, 3, 0);
    for (int i = 0; i < 100; ++i)
    {
        XRealization x;
        x.slots = generate_fading_slots(rng, 3);
        CHECK(is_matched(x, pre, single));
    }
    const Codebook cb = Codebook::generate(2, 3, 10);
    for (int i = 0; i < 100; ++i)
    {
        XRealization x;
        x.slots = aligned_slots(rng, pre);
        CHECK(is_matched(x, pre, cb));
    }
}

TEST_CASE("receiver match events are independent and match the codeword cell probabilities")
{
    // For a fixed codebook and fixed precoders the per-receiver match
    // probability is sum_j P(q21 -> j) P(q22 -> j); check the simulator
    // against that product form and the joint against the product of the
    // receivers.
    const int M = 3, B = 3;
    Rng rng(5);
    const Precoders pre = Precoders::random(rng, M);
    const Codebook cb = Codebook::generate(77, M, B);
    std::vector<double> p21(cb.size()), p22(cb.size()), p11(cb.size()), p12(cb.size());
    const int cells = 200000;
    for (int i = 0; i < cells; ++i)
    {
        XRealization x;
        x.slots = generate_fading_slots(rng, M);
        const auto d = interference_directions(x, pre);
        p21[cb.quantize(d.q21)] += 1.0 / cells;
        p22[cb.quantize(d.q22)] += 1.0 / cells;
        p11[cb.quantize(d.r11)] += 1.0 / cells;
        p12[cb.quantize(d.r12)] += 1.0 / cells;
    }
    double pr1 = 0, pr2 = 0;
    for (std::size_t j = 0; j < cb.size(); ++j)
    {
        pr1 += p21[j] * p22[j];
        pr2 += p11[j] * p12[j];
    }
    const int n = 200000;
    std::size_t m1 = 0, m2 = 0, both = 0;
    for (int i = 0; i < n; ++i)
    {
        XRealization x;
        x.slots = generate_fading_slots(rng, M);
        const auto d = interference_directions(x, pre);
        const bool a = cb.quantize(d.q21) == cb.quantize(d.q22);
        const bool b = cb.quantize(d.r11) == cb.quantize(d.r12);
        m1 += a;
        m2 += b;
        both += a && b;
        CHECK((a && b) == is_matched(x, pre, cb));
    }
    // The cell-probability estimates carry their own noise; allow 4 se.
    CHECK(std::abs(double(m1) / n - pr1) < 4 * proportion_stderr(pr1, n));
    CHECK(std::abs(double(m2) / n - pr2) < 4 * proportion_stderr(pr2, n));
    CHECK(std::abs(double(both) / n - pr1 * pr2) < 4 * proportion_stderr(pr1 * pr2, n));
}

TEST_CASE("find_matched_sets on a constructed tuple")
{
    Rng rng(6);
    const Precoders pre = Precoders::random(rng, 3);
    const Codebook cb = Codebook::generate(3, 3, 6);
    const auto slots = aligned_slots(rng, pre);
    const auto sets = find_matched_sets(slots, pre, cb, 3);
    REQUIRE(sets.size() == 1);
    CHECK(sets[0].slots == std::vector<std::size_t>{0, 1, 2});
    CHECK(is_matched(realization_of(slots, sets[0]), pre, cb));

    std::vector<FadingSlot> many(900);
    CHECK_THROWS_AS(find_matched_sets(many, pre, cb, 3), ResourceLimit);
    CHECK(find_matched_sets(std::span(many).first(2), pre, cb, 3).empty());
}

TEST_CASE("find_matched_sets output is disjoint, matched and deterministic")
{
    Rng pre_rng(7);
    const Precoders pre = Precoders::random(pre_rng, 3);
    const Codebook cb = Codebook::generate(4, 3, 3);
    for (int s = 0; s < 5; ++s)
    {
        Rng rng = Rng::substream(99, "find", s);
        const auto slots = generate_fading_slots(rng, 60);
        const auto sets = find_matched_sets(slots, pre, cb, 3);
        CHECK(!sets.empty());
        std::vector<int> used(slots.size(), 0);
        for (const auto &set : sets)
        {
            CHECK(std::is_sorted(set.slots.begin(), set.slots.end()));
            for (auto i : set.slots)
                CHECK(++used[i] == 1);
            const auto m = match_indices(realization_of(slots, set), pre, cb);
            REQUIRE(m);
            CHECK(m->first == set.index_rx1);
            CHECK(m->second == set.index_rx2);
        }
        const auto again = find_matched_sets(slots, pre, cb, 3);
        REQUIRE(again.size() == sets.size());
        for (std::size_t i = 0; i < sets.size(); ++i)
            CHECK(again[i].slots == sets[i].slots);
    }
}

TEST_CASE("matched-combination count is C(n, M) times the per-triple match probability")
{
    const int M = 3, B = 4, n = 100, streams = 40;
    Rng pre_rng(8);
    const Precoders pre = Precoders::random(pre_rng, M);
    const Codebook cb = Codebook::generate(5, M, B);

    Rng rng(9);
    std::size_t hits = 0;
    const int triples = 400000;
    for (int i = 0; i < triples; ++i)
    {
        XRealization x;
        x.slots = generate_fading_slots(rng, M);
        hits += is_matched(x, pre, cb);
    }
    const double p = double(hits) / triples;

    RunningStats count;
    for (int s = 0; s < streams; ++s)
    {
        const auto slots = generate_fading_slots(rng, n);
        std::size_t c = 0;
        XRealization x;
        x.slots.resize(M);
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                for (int d = b + 1; d < n; ++d)
                {
                    x.slots = {slots[a], slots[b], slots[d]};
                    c += is_matched(x, pre, cb);
                }
        count.add(double(c));
    }
    const double expected = combos(n, M) * p;
    const double tol = 3 * std::hypot(count.stderr_mean(), combos(n, M) * proportion_stderr(p, triples));
    CHECK(std::abs(count.mean() - expected) < tol);
}

TEST_CASE("finding any matched set collapses as B grows past B_max")
{
    const int M = 3, n = 30;
    Rng pre_rng(10);
    const Precoders pre = Precoders::random(pre_rng, M);
    std::vector<double> found;
    for (int B : {2, 6, 10})
    {
        const Codebook cb = Codebook::generate(100 + B, M, B);
        int any = 0;
        for (int s = 0; s < 40; ++s)
        {
            Rng rng = Rng::substream(1, "bmax", s);
            any += !find_matched_sets(generate_fading_slots(rng, n), pre, cb, M).empty();
        }
        found.push_back(any / 40.0);
    }
    CHECK(found[0] == 1.0);
    CHECK(found[0] >= found[1]);
    CHECK(found[1] > found[2]);
    CHECK(found[2] < 0.2);
}

TEST_CASE("rejection samplers")
{
    Rng rng(11);
    const Precoders pre = Precoders::random(rng, 3);

    SUBCASE("B = 0 accepts the first draw")
    {
        const Codebook cb = Codebook::generate(1, 3, 0);
        CHECK(sample_matched_naive(rng, pre, cb).attempts == 1);
        CHECK(sample_matched_realization(rng, pre, cb).attempts == 2);
    }
    SUBCASE("output is always matched, with the matching codewords")
    {
        const Codebook cb = Codebook::generate(2, 3, 5);
        for (int i = 0; i < 300; ++i)
        {
            const MatchedSample m = sample_matched_realization(rng, pre, cb);
            const auto idx = match_indices(m.x, pre, cb);
            REQUIRE(idx);
            CHECK((m.w_rx1 - cb.codeword(idx->first)).norm() == 0.0);
            CHECK((m.w_rx2 - cb.codeword(idx->second)).norm() == 0.0);
        }
    }
    SUBCASE("naive acceptance rate equals the match probability")
    {
        for (int B : {2, 3})
        {
            const Codebook cb = Codebook::generate(3 + B, 3, B);
            std::size_t hits = 0;
            const int n = 100000;
            for (int i = 0; i < n; ++i)
            {
                XRealization x;
                x.slots = generate_fading_slots(rng, 3);
                hits += is_matched(x, pre, cb);
            }
            const double p = double(hits) / n;
            std::uint64_t attempts = 0;
            const int k = 3000;
            for (int i = 0; i < k; ++i)
                attempts += sample_matched_naive(rng, pre, cb).attempts;
            const double rate = double(k) / attempts;
            CHECK(std::abs(rate / p - 1.0) < 0.1);
        }
    }
    SUBCASE("attempt cap raises a resource error")
    {
        const Codebook cb = Codebook::generate(4, 3, 16);
        CHECK_THROWS_AS(sample_matched_realization(rng, pre, cb, 5), ResourceLimit);
        CHECK_THROWS_AS(sample_matched_naive(rng, pre, cb, 5), ResourceLimit);
        EnsembleOptions opt;
        opt.max_attempts = 1;
        bool threw = false;
        for (int i = 0; i < 50 && !threw; ++i)
        {
            try
            {
                sample_matched_ensemble(rng, pre, 30, opt);
            }
            catch (const ResourceLimit &)
            {
                threw = true;
            }
        }
        CHECK(threw);
    }
}

TEST_CASE("per-receiver rejection has the law of whole-tuple rejection")
{
    Rng pre_rng(12);
    const Precoders pre = Precoders::random(pre_rng, 3);
    const Codebook cb = Codebook::generate(6, 3, 3);
    std::vector<double> a_naive, a_fact, h_naive, h_fact;
    for (int i = 0; i < 2000; ++i)
    {
        Rng r1 = Rng::substream(1, "naive", i), r2 = Rng::substream(1, "fact", i);
        const MatchedSample n = sample_matched_naive(r1, pre, cb);
        const MatchedSample f = sample_matched_realization(r2, pre, cb);
        a_naive.push_back(sin2(normalize(interference_directions(n.x, pre).q21), n.w_rx1));
        a_fact.push_back(sin2(normalize(interference_directions(f.x, pre).q21), f.w_rx1));
        h_naive.push_back(std::norm(n.x.slots[0].h22));
        h_fact.push_back(std::norm(f.x.slots[0].h22));
    }
    const double crit = ks_critical_value_two_sample(2000, 2000, 0.01);
    CHECK(ks_statistic_two_sample(a_naive, a_fact) < crit);
    CHECK(ks_statistic_two_sample(h_naive, h_fact) < crit);
}

TEST_CASE("every matched combination of a stream follows the rejection law")
{
    // Weighting all matched combinations equally is exchangeable across
    // triples, unlike greedy disjoint selection.
    const int M = 3, B = 6;
    const std::size_t n = 1000;
    Rng pre_rng(17);
    const Precoders pre = Precoders::random(pre_rng, M);
    const Codebook cb = Codebook::generate(18, M, B);
    std::vector<double> every;
    XRealization x;
    for (int k = 0; every.size() < n; ++k)
    {
        Rng rng = Rng::substream(3, "every", k);
        const auto slots = generate_fading_slots(rng, 120);
        for (std::size_t a = 0; a < slots.size() && every.size() < n; ++a)
            for (std::size_t b = a + 1; b < slots.size(); ++b)
                for (std::size_t c = b + 1; c < slots.size(); ++c)
                {
                    x.slots = {slots[a], slots[b], slots[c]};
                    if (const auto m = match_indices(x, pre, cb))
                        every.push_back(sin2(normalize(interference_directions(x, pre).q21), cb.codeword(m->first)));
                }
    }
    every.resize(n);
    std::vector<double> rejected;
    for (std::size_t i = 0; i < n; ++i)
    {
        Rng rng = Rng::substream(3, "reject", i);
        const MatchedSample m = sample_matched_realization(rng, pre, cb);
        rejected.push_back(sin2(normalize(interference_directions(m.x, pre).q21), m.w_rx1));
    }
    CHECK(ks_statistic_two_sample(every, rejected) < ks_critical_value_two_sample(n, n, 0.01));
}

TEST_CASE("ensemble sampler reproduces fresh-codebook rejection")
{
    Rng pre_rng(13);
    const Precoders pre = Precoders::random(pre_rng, 3);
    for (int B : {3, 6})
    {
        std::vector<double> a_e, a_x, b_e, b_x, h_e, h_x;
        const int n = 1500;
        for (int i = 0; i < n; ++i)
        {
            Rng re = Rng::substream(2, "ens", i);
            const MatchedSample e = sample_matched_ensemble(re, pre, B);
            Rng rx = Rng::substream(2, "fresh", i);
            const Codebook cb = Codebook::generate(rx.engine()(), 3, B);
            const MatchedSample x = sample_matched_realization(rx, pre, cb);
            const auto de = interference_directions(e.x, pre);
            const auto dx = interference_directions(x.x, pre);
            a_e.push_back(sin2(normalize(de.q22), e.w_rx1));
            a_x.push_back(sin2(normalize(dx.q22), x.w_rx1));
            b_e.push_back(sin2(normalize(de.r11), e.w_rx2));
            b_x.push_back(sin2(normalize(dx.r11), x.w_rx2));
            h_e.push_back(std::norm(e.x.slots[2].h12));
            h_x.push_back(std::norm(x.x.slots[2].h12));
        }
        const double crit = ks_critical_value_two_sample(n, n, 0.01);
        CHECK(ks_statistic_two_sample(a_e, a_x) < crit);
        CHECK(ks_statistic_two_sample(b_e, b_x) < crit);
        CHECK(ks_statistic_two_sample(h_e, h_x) < crit);
    }
}

TEST_CASE("matched quantization errors stay below 2^(-B/(M-1))")
{
    const int M = 3;
    const Precoders pre = run_precoders(2024, M);
    for (int B : {4, 8, 12})
    {
        std::optional<Codebook> cb;
        const SamplerMode mode = resolve_mode(SamplerMode::automatic, B);
        if (mode != SamplerMode::ensemble)
            cb = Codebook::generate(codebook_seed(2024, B), M, B);
        const auto samples =
            collect_matched({mode, B, &pre, cb ? &*cb : nullptr, 200}, 2024, "a-bound", 10000, 1);
        RunningStats a1, a2;
        for (const auto &m : samples)
        {
            const auto d = interference_directions(m.x, pre);
            a1.add(sin2(normalize(d.q21), m.w_rx1));
            a2.add(sin2(normalize(d.q22), m.w_rx1));
        }
        CHECK(a1.mean() < lemma1_bound(M, B));
        CHECK(a2.mean() < lemma1_bound(M, B));
    }
}

TEST_CASE("transmit")
{
    Rng rng(14);
    const Precoders pre = Precoders::random(rng, 3);
    const XRealization x = unit_channels(3);
    const StreamSymbols zero{0.0, 0.0, 0.0, 0.0};
    const auto z = transmit(x, pre, zero);
    CHECK(z.x1.norm() == 0.0);
    CHECK(z.x2.norm() == 0.0);

    const cdouble d{0.5, -1.5};
    const auto s = transmit(x, pre, {d, 0.0, 0.0, 0.0});
    CHECK((s.x1 - d * pre.v11).norm() == 0.0);
    CHECK(s.x2.norm() == 0.0);

    const double p = 10.0;
    RunningStats e;
    for (int i = 0; i < 100000; ++i)
        e.add(transmit(x, pre, StreamSymbols::draw(rng, 3, p)).x1.squaredNorm());
    CHECK(std::abs(e.mean() - 3 * p / 2) < 3 * e.stderr_mean());
}

TEST_CASE("receive")
{
    Rng rng(15);
    const XRealization id = unit_channels(3);
    const TransmitSignals zero{CVec::Zero(3), CVec::Zero(3)};
    const auto r0 = receive(id, zero, nullptr);
    CHECK(r0.y1.norm() == 0.0);
    CHECK(r0.y2.norm() == 0.0);

    TransmitSignals s{CVec::Random(3), CVec::Random(3)};
    const auto r1 = receive(id, s, nullptr);
    CHECK((r1.y1 - (s.x1 + s.x2)).norm() < 1e-15);

    RunningStats e;
    for (int i = 0; i < 100000; ++i)
        e.add(receive(id, zero, &rng).y1.squaredNorm());
    CHECK(std::abs(e.mean() - 3.0) < 3 * e.stderr_mean());

    XRealization x;
    x.slots = generate_fading_slots(rng, 3);
    const auto r2 = receive(x, s, nullptr);
    CHECK((r2.y2 - (x.channel(2, 1) * s.x1 + x.channel(2, 2) * s.x2)).norm() < 1e-14);
}

TEST_CASE("relabelling")
{
    Rng rng(16);
    const Precoders pre = Precoders::random(rng, 3);
    XRealization x;
    x.slots = generate_fading_slots(rng, 3);
    const auto d = interference_directions(x, pre);
    const auto r = interference_directions(swap_receivers(x), swap_receivers(pre));
    CHECK((r.q21 - d.r11).norm() == 0.0);
    CHECK((r.q22 - d.r12).norm() == 0.0);
    const auto t = interference_directions(swap_transmitters(x), swap_transmitters(pre));
    CHECK((t.q21 - d.q22).norm() == 0.0);
    CHECK((t.q22 - d.q21).norm() == 0.0);
    const XRealization back = swap_receivers(swap_receivers(x));
    for (int l = 0; l < 3; ++l)
        CHECK(back.slots[l].h12 == x.slots[l].h12);
}
