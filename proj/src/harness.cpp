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

#include "xalign/harness.hpp"

#include "xalign/errors.hpp"
#include "xalign/ff_align.hpp"
#include "xalign/gf.hpp"
#include "xalign/rng.hpp"
#include "xalign/stats.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace xalign
{
    namespace
    {
        std::string num(double v)
        {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            return buf;
        }

        std::string point_tag(std::string_view base, std::initializer_list<std::pair<const char *, double>> kv)
        {
            std::string t(base);
            for (const auto &[k, v] : kv)
                t += std::string("/") + k + "=" + num(v);
            return t;
        }

        Check within(std::string name, double value, double target, double tol)
        {
            return {std::move(name), value, target, tol, std::abs(value - target) <= tol};
        }

        Check at_most(std::string name, double value, double threshold, double tol)
        {
            return {std::move(name), value, threshold, tol, value <= threshold + tol};
        }

        // Per-trial substreams, results gathered by index.
        template <class T, class F>
        std::vector<T> per_trial(std::size_t n, unsigned threads, std::uint64_t seed, const std::string &tag, F f)
        {
            std::vector<T> out(n);
            parallel_for(n, threads, [&](std::size_t i) {
                Rng rng = Rng::substream(seed, tag, i);
                out[i] = f(rng, i);
            });
            return out;
        }

        struct Binary
        {
            std::size_t hits = 0;
            std::size_t n = 0;
            double rate() const { return n ? static_cast<double>(hits) / n : 0.0; }
        };

        // ---------------------------------------------------------------
        // Finite field

        RunSummary ff_demo(const RunConfig &cfg)
        {
            const PrimeField field(cfg.q);
            Rng pre_rng = Rng::substream(cfg.seed, "ff-precoders", cfg.q);
            const FFPrecoders pre = FFPrecoders::random(pre_rng, field);
            StreamMatcher matcher(pre);
            Rng slot_rng = Rng::substream(cfg.seed, "ff-demo/slots", cfg.q);

            std::size_t decoded = 0, errors = 0, degenerate = 0, matched = 0;
            std::uint64_t next_t = 1;
            const std::uint64_t slot_cap = 1'000'000'000ULL;
            while (decoded < cfg.trials)
            {
                const auto batch = generate_ff_slots(slot_rng, field, 4096, next_t);
                next_t = batch.back().t + 1;
                for (const auto &slot : batch)
                {
                    auto set = matcher.push(slot);
                    if (!set || decoded >= cfg.trials)
                        continue;
                    Rng data_rng = Rng::substream(cfg.seed, "ff-demo/data", matched++);
                    const FFData d{field.uniform(data_rng), field.uniform(data_rng), field.uniform(data_rng),
                                   field.uniform(data_rng)};
                    try
                    {
                        const FFData back = ff_decode(*set, ff_channel(*set, d, pre), pre);
                        ++decoded;
                        if (!(back == d))
                            ++errors;
                    }
                    catch (const DegenerateSet &)
                    {
                        ++degenerate;
                    }
                }
                if (next_t > slot_cap)
                    throw ResourceLimit("ff-demo: slot budget exhausted");
            }

            RunSummary s;
            s.columns = {"q", "decoded_sets", "degenerate_sets", "decode_errors", "slots_scanned", "open_sets"};
            s.rows.push_back({static_cast<double>(cfg.q), static_cast<double>(decoded), static_cast<double>(degenerate),
                              static_cast<double>(errors), static_cast<double>(next_t - 1),
                              static_cast<double>(matcher.open_count())});
            s.checks.push_back(within("decode_errors q=" + std::to_string(cfg.q), static_cast<double>(errors), 0.0, 0.0));
            return s;
        }

        RunSummary ff_match_stats(const RunConfig &cfg)
        {
            const PrimeField field(cfg.q);
            Rng pre_rng = Rng::substream(cfg.seed, "ff-precoders", cfg.q);
            const FFPrecoders pre = FFPrecoders::random(pre_rng, field);
            const auto hits = per_trial<char>(cfg.trials, cfg.threads, cfg.seed, point_tag("ff-match-stats", {{"q", cfg.q}}),
                                              [&](Rng &rng, std::size_t) -> char {
                                                  const auto slots = generate_ff_slots(rng, field, 3);
                                                  const Signature s1 = slot_signature(slots[0], pre, 1);
                                                  return s1 == slot_signature(slots[1], pre, 2) &&
                                                         s1 == slot_signature(slots[2], pre, 3);
                                              });
            Binary b{0, hits.size()};
            for (char h : hits)
                b.hits += h;
            const double target = ff_triple_match_probability(cfg.q);
            const double se = proportion_stderr(target, b.n);

            RunSummary s;
            s.columns = {"q", "trials", "matched", "p_hat", "stderr", "target", "z", "delay_n"};
            s.rows.push_back({static_cast<double>(cfg.q), static_cast<double>(b.n), static_cast<double>(b.hits), b.rate(),
                              se, target, (b.rate() - target) / se,
                              static_cast<double>(expected_delay_scaling(cfg.q, 1.0))});
            s.checks.push_back(within("match_probability q=" + std::to_string(cfg.q), b.rate(), target, 3 * se));
            return s;
        }

        // ---------------------------------------------------------------
        // Geometry laws

        RunSummary beta_check(const RunConfig &cfg)
        {
            const int M = cfg.M;
            auto z = per_trial<double>(cfg.trials, cfg.threads, cfg.seed, point_tag("beta-check", {{"M", M}}),
                                       [&](Rng &rng, std::size_t) {
                                           return overlap(sample_isotropic(rng, M), sample_isotropic(rng, M));
                                       });
            const RunningStats st = summarize(z);
            const double ks = ks_statistic(z, [M](double x) {
                if (x <= 0.0)
                    return 0.0;
                if (x >= 1.0)
                    return 1.0;
                return 1.0 - std::pow(1.0 - x, M - 1);
            });
            const double crit = ks_critical_value(z.size(), 0.01);

            RunSummary s;
            s.columns = {"M", "trials", "ks", "ks_critical_1pct", "mean_overlap", "stderr", "expected_mean"};
            s.rows.push_back({static_cast<double>(M), static_cast<double>(z.size()), ks, crit, st.mean(), st.stderr_mean(),
                              1.0 / M});
            s.checks.push_back({"ks_below_critical M=" + std::to_string(M), ks, crit, 0.0, ks < crit});
            return s;
        }

        RunSummary lemma1(const RunConfig &cfg)
        {
            const int M = cfg.M;
            RunSummary s;
            s.columns = {"M",        "B",           "trials",          "mean_error",       "stderr",
                         "bound",    "ccdf_0.1",    "ccdf_0.1_theory", "ccdf_0.3",         "ccdf_0.3_theory",
                         "ccdf_0.5", "ccdf_0.5_theory"};
            for (int B : cfg.B)
            {
                const Codebook cb = Codebook::generate(codebook_seed(cfg.seed, B), M, B);
                const auto err = per_trial<double>(cfg.trials, cfg.threads, cfg.seed,
                                                   point_tag("lemma1", {{"M", M}, {"B", B}}), [&](Rng &rng, std::size_t) {
                                                       return cb.quantization_error(sample_isotropic(rng, M));
                                                   });
                const RunningStats st = summarize(err);
                const double bound = lemma1_bound(M, B);
                std::vector<double> row{static_cast<double>(M), static_cast<double>(B), static_cast<double>(err.size()),
                                        st.mean(), st.stderr_mean(), bound};
                for (double x : {0.1, 0.3, 0.5})
                {
                    std::size_t above = 0;
                    for (double e : err)
                        above += e > x;
                    row.push_back(static_cast<double>(above) / err.size());
                    row.push_back(quantization_error_ccdf(x, M, B));
                }
                s.rows.push_back(std::move(row));
                s.checks.push_back({"mean_error+3se<bound B=" + std::to_string(B), st.mean() + 3 * st.stderr_mean(),
                                    bound, 3 * st.stderr_mean(), st.mean() + 3 * st.stderr_mean() < bound});
            }
            return s;
        }

        RunSummary lemma2(const RunConfig &cfg)
        {
            const int M = cfg.M;
            const auto v = per_trial<double>(cfg.trials, cfg.threads, cfg.seed, point_tag("lemma2", {{"M", M}}),
                                             [&](Rng &rng, std::size_t) {
                                                 const CVec x = sample_isotropic(rng, M);
                                                 const Projector phi(sample_isotropic(rng, M));
                                                 return phi.apply(x).squaredNorm();
                                             });
            const RunningStats st = summarize(v);
            const double target = (M - 1.0) / M;
            RunSummary s;
            s.columns = {"M", "trials", "mean", "stderr", "expected", "z"};
            s.rows.push_back({static_cast<double>(M), static_cast<double>(v.size()), st.mean(), st.stderr_mean(), target,
                              (st.mean() - target) / st.stderr_mean()});
            s.checks.push_back(within("projection_mean M=" + std::to_string(M), st.mean(), target, 3 * st.stderr_mean()));
            return s;
        }

        // ---------------------------------------------------------------
        // Fading channel

        RunSummary match_stats(const RunConfig &cfg)
        {
            const int M = cfg.M;
            const Precoders pre = run_precoders(cfg.seed, M);
            RunSummary s;
            s.columns = {"M", "B", "trials", "matched", "p_hat", "stderr", "target", "z", "p_rx1", "p_rx2", "target_rx"};
            for (int B : cfg.B)
            {
                const Codebook cb = Codebook::generate(codebook_seed(cfg.seed, B), M, B);
                struct Flags
                {
                    char rx1 = 0, rx2 = 0;
                };
                const auto flags = per_trial<Flags>(
                    cfg.trials, cfg.threads, cfg.seed, point_tag("match-stats", {{"M", M}, {"B", B}}),
                    [&](Rng &rng, std::size_t) {
                        XRealization x;
                        x.slots = generate_fading_slots(rng, M);
                        const auto d = interference_directions(x, pre);
                        return Flags{cb.quantize(d.q21) == cb.quantize(d.q22), cb.quantize(d.r11) == cb.quantize(d.r12)};
                    });
                std::size_t both = 0, r1 = 0, r2 = 0;
                for (const auto &f : flags)
                {
                    both += f.rx1 && f.rx2;
                    r1 += f.rx1;
                    r2 += f.rx2;
                }
                const double n = static_cast<double>(flags.size());
                const double target = std::exp2(-2.0 * B);
                const double se = proportion_stderr(target, flags.size());
                const double p_hat = both / n;
                s.rows.push_back({static_cast<double>(M), static_cast<double>(B), n, static_cast<double>(both), p_hat, se,
                                  target, (p_hat - target) / se, r1 / n, r2 / n, std::exp2(-1.0 * B)});
                s.checks.push_back(within("match_probability B=" + std::to_string(B), p_hat, target, 3 * se));
            }
            return s;
        }

        struct PointSamples
        {
            GeometryBatch batch;
            SamplerMode mode;
        };

        PointSamples geometry_for(const RunConfig &cfg, const Precoders &pre, int B, const std::string &tag)
        {
            const SamplerMode mode = resolve_mode(cfg.mode, B);
            std::optional<Codebook> cb;
            if (mode != SamplerMode::ensemble)
                cb = Codebook::generate(codebook_seed(cfg.seed, B), cfg.M, B);
            const SamplerSetup setup{mode, B, &pre, cb ? &*cb : nullptr, cfg.n_slots};
            const auto samples = collect_matched(setup, cfg.seed, tag, cfg.trials, cfg.threads);
            return {geometry_batch(samples, pre), mode};
        }

        const std::vector<std::string> kRateColumns = {
            "p_db",   "B",           "c_ideal",   "c_hat",     "gap",      "gap_bound",      "stderr_gap",
            "n_eff",  "degenerate",  "S",         "I",         "mean_a1",  "stderr_a1",      "a1_bound",
            "stderr_c_hat", "stderr_c_ideal", "ensemble"};

        std::vector<double> rate_row(const RateReport &r, SamplerMode mode)
        {
            return {r.p_db,
                    static_cast<double>(r.B),
                    r.c_ideal,
                    r.c_hat,
                    r.gap,
                    r.gap_bound,
                    r.stderr_gap,
                    static_cast<double>(r.trials),
                    static_cast<double>(r.degenerate),
                    r.S,
                    r.I,
                    r.mean_a1,
                    r.stderr_a1,
                    lemma1_bound(r.M, r.B),
                    r.stderr_c_hat,
                    r.stderr_c_ideal,
                    mode == SamplerMode::ensemble ? 1.0 : 0.0};
        }

        std::string point_name(double p_db, int B)
        {
            return "p_db=" + num(p_db) + " B=" + std::to_string(B);
        }

        RunSummary rate_gap(const RunConfig &cfg)
        {
            const Precoders pre = run_precoders(cfg.seed, cfg.M);
            RunSummary s;
            s.columns = kRateColumns;
            for (int B : cfg.B)
            {
                const auto pts = geometry_for(cfg, pre, B, point_tag("rate-gap", {{"M", cfg.M}, {"B", B}}));
                for (double p_db : cfg.p_db)
                {
                    const RateReport r = rate_report(pts.batch.factors, pts.batch.a1, p_db, B, cfg.M, pts.batch.degenerate);
                    s.rows.push_back(rate_row(r, pts.mode));
                    s.checks.push_back(at_most("gap<=bound " + point_name(p_db, B), r.gap, r.gap_bound, 3 * r.stderr_gap));
                }
            }
            return s;
        }

        RunSummary gap_vs_B(const RunConfig &cfg)
        {
            const Precoders pre = run_precoders(cfg.seed, cfg.M);
            RunSummary s;
            s.columns = kRateColumns;
            if (cfg.B.empty())
            {
                std::optional<RateReport> prev;
                for (double p_db : cfg.p_db)
                {
                    const int B = scaled_feedback_bits(db_to_linear(p_db), cfg.loglog_coeff);
                    const auto pts = geometry_for(cfg, pre, B, point_tag("gap-vs-B", {{"M", cfg.M}, {"B", B}}));
                    const RateReport r = rate_report(pts.batch.factors, pts.batch.a1, p_db, B, cfg.M, pts.batch.degenerate);
                    s.rows.push_back(rate_row(r, pts.mode));
                    if (prev)
                        s.checks.push_back({"gap_decreasing " + point_name(prev->p_db, prev->B) + " -> " + point_name(p_db, B),
                                            r.gap, prev->gap, 0.0, r.gap < prev->gap});
                    prev = r;
                }
                return s;
            }
            std::vector<std::vector<RateReport>> grid(cfg.p_db.size());
            for (int B : cfg.B)
            {
                const auto pts = geometry_for(cfg, pre, B, point_tag("gap-vs-B", {{"M", cfg.M}, {"B", B}}));
                for (std::size_t k = 0; k < cfg.p_db.size(); ++k)
                {
                    const RateReport r =
                        rate_report(pts.batch.factors, pts.batch.a1, cfg.p_db[k], B, cfg.M, pts.batch.degenerate);
                    s.rows.push_back(rate_row(r, pts.mode));
                    grid[k].push_back(r);
                }
            }
            for (const auto &row : grid)
                for (std::size_t i = 1; i < row.size(); ++i)
                    if (row[i].B > row[i - 1].B)
                        s.checks.push_back({"gap_decreasing_in_B " + point_name(row[i - 1].p_db, row[i - 1].B) + " -> B=" +
                                                std::to_string(row[i].B),
                                            row[i].gap, row[i - 1].gap, 0.0, row[i].gap < row[i - 1].gap});
            return s;
        }

        RunSummary dof(const RunConfig &cfg)
        {
            RunSummary s;
            s.columns = {"alpha", "p_db", "B", "mean_log2_1p_sinr", "stderr", "c_hat", "n_eff", "slope", "target_slope",
                         "dof_total_unscaled", "dof_total_scaled"};
            for (double a : cfg.alpha)
            {
                const DofResult d = dof_sweep(a, cfg.M, cfg.p_db, cfg.trials, cfg.seed, cfg.mode, cfg.threads);
                for (const auto &pt : d.points)
                    s.rows.push_back({a, pt.p_db, static_cast<double>(pt.B), pt.report.mean_log_sinr,
                                      pt.report.stderr_log_sinr, pt.report.c_hat, static_cast<double>(pt.report.trials),
                                      d.slope, d.target, d.total_unscaled, d.total_scaled});
                s.checks.push_back(within("dof_slope alpha=" + num(a), d.slope, d.target, 0.1));
            }
            return s;
        }

        RunSummary symmetry(const RunConfig &cfg)
        {
            const int M = cfg.M;
            RunSummary s;
            s.columns = {"B",         "p_db",      "c_hat_d11", "c_hat_d21", "c_hat_d12",
                         "diff_rx",   "stderr_rx", "diff_tx",   "stderr_tx", "n_eff"};
            for (int B : cfg.B)
            {
                const SamplerMode mode = resolve_mode(cfg.mode, B);
                std::optional<Codebook> cb;
                if (mode != SamplerMode::ensemble)
                    cb = Codebook::generate(codebook_seed(cfg.seed, B), M, B);
                struct Triple
                {
                    bool ok = false;
                    PowerFactors d11, d21, d12;
                };
                const auto res = per_trial<Triple>(
                    cfg.trials, cfg.threads, cfg.seed, point_tag("symmetry-check", {{"M", M}, {"B", B}}),
                    [&](Rng &rng, std::size_t) {
                        const Precoders pre = Precoders::random(rng, M);
                        const MatchedSample m = mode == SamplerMode::ensemble
                                                    ? sample_matched_ensemble(rng, pre, B)
                                                    : sample_matched_realization(rng, pre, *cb);
                        Triple t;
                        try
                        {
                            t.d11 = power_factors(receiver_geometry(m.x, pre, m.w_rx1));
                            t.d21 = power_factors(
                                receiver_geometry(swap_receivers(m.x), swap_receivers(pre), m.w_rx2));
                            t.d12 = power_factors(
                                receiver_geometry(swap_transmitters(m.x), swap_transmitters(pre), m.w_rx1));
                            t.ok = true;
                        }
                        catch (const DegenerateGeometry &)
                        {
                        }
                        return t;
                    });
                for (double p_db : cfg.p_db)
                {
                    const double scale = M * db_to_linear(p_db) / 4.0;
                    auto rate = [&](const PowerFactors &f) {
                        return std::log2(1.0 + scale * f.s_factor / (scale * f.i_factor + 1.0)) / M;
                    };
                    RunningStats c11, c21, c12, drx, dtx;
                    for (const auto &t : res)
                    {
                        if (!t.ok)
                            continue;
                        const double a = rate(t.d11), b = rate(t.d21), c = rate(t.d12);
                        c11.add(a);
                        c21.add(b);
                        c12.add(c);
                        drx.add(a - b);
                        dtx.add(a - c);
                    }
                    s.rows.push_back({static_cast<double>(B), p_db, c11.mean(), c21.mean(), c12.mean(), drx.mean(),
                                      drx.stderr_mean(), dtx.mean(), dtx.stderr_mean(), static_cast<double>(c11.count())});
                    s.checks.push_back(
                        within("receiver_swap " + point_name(p_db, B), drx.mean(), 0.0, 3 * drx.stderr_mean()));
                    s.checks.push_back(
                        within("transmitter_swap " + point_name(p_db, B), dtx.mean(), 0.0, 3 * dtx.stderr_mean()));
                }
            }
            return s;
        }
    } // namespace

    void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)> &body)
    {
        if (threads <= 1 || n <= 1)
        {
            for (std::size_t i = 0; i < n; ++i)
                body(i);
            return;
        }
        std::atomic<std::size_t> next{0};
        std::atomic<bool> failed{false};
        std::exception_ptr error;
        std::mutex error_mutex;
        auto worker = [&] {
            for (;;)
            {
                if (failed.load(std::memory_order_relaxed))
                    return;
                const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
                if (i >= n)
                    return;
                try
                {
                    body(i);
                }
                catch (...)
                {
                    std::lock_guard lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                    failed = true;
                }
            }
        };
        std::vector<std::thread> pool;
        const unsigned k = static_cast<unsigned>(std::min<std::size_t>(threads, n));
        pool.reserve(k);
        for (unsigned t = 0; t < k; ++t)
            pool.emplace_back(worker);
        for (auto &t : pool)
            t.join();
        if (error)
            std::rethrow_exception(error);
    }

    SamplerMode resolve_mode(SamplerMode requested, int B)
    {
        if (requested != SamplerMode::automatic)
            return requested;
        return B <= kAutoExplicitMaxBits ? SamplerMode::rejection_conditioning : SamplerMode::ensemble;
    }

    Precoders run_precoders(std::uint64_t seed, int M)
    {
        Rng rng = Rng::substream(seed, "precoders", static_cast<std::uint64_t>(M));
        return Precoders::random(rng, M);
    }

    std::uint64_t codebook_seed(std::uint64_t seed, int B) { return substream_key(seed, "codebook", static_cast<std::uint64_t>(B)); }

    int feedback_bits(double alpha, double p) { return static_cast<int>(std::lround(alpha * std::log2(p))); }

    int scaled_feedback_bits(double p, double c)
    {
        const double l = std::log2(p);
        if (!(l > 0.0))
            throw InvalidOperands("scaled_feedback_bits: p must exceed 1");
        return static_cast<int>(std::lround(2.0 * l + c * std::log2(l)));
    }

    std::vector<MatchedSample> collect_matched(const SamplerSetup &setup, std::uint64_t seed, std::string_view tag,
                                               std::size_t count, unsigned threads)
    {
        if (!setup.pre)
            throw InvalidOperands("collect_matched: precoders missing");
        const Precoders &pre = *setup.pre;
        const SamplerMode mode = resolve_mode(setup.mode, setup.B);
        if (mode != SamplerMode::ensemble && (!setup.cb || setup.cb->bits() != setup.B))
            throw InvalidOperands("collect_matched: a codebook with B bits is required for this mode");
        const std::string t(tag);
        std::vector<MatchedSample> out;

        if (mode == SamplerMode::rejection_conditioning || mode == SamplerMode::ensemble)
        {
            out.resize(count);
            parallel_for(count, threads, [&](std::size_t i) {
                Rng rng = Rng::substream(seed, t, i);
                out[i] = mode == SamplerMode::ensemble ? sample_matched_ensemble(rng, pre, setup.B)
                                                       : sample_matched_realization(rng, pre, *setup.cb);
            });
            return out;
        }

        // Stream search: slot streams are independent, so a batch of them can
        // be searched concurrently and concatenated in stream order.
        const int M = pre.dim();
        const std::size_t batch = std::max<unsigned>(threads, 1);
        const std::size_t max_streams = 1'000'000;
        std::size_t stream = 0;
        while (out.size() < count)
        {
            if (stream >= max_streams)
                throw ResourceLimit("stream-search: too few matched sets after " + std::to_string(stream) + " streams");
            std::vector<std::vector<MatchedSample>> found(batch);
            parallel_for(batch, threads, [&](std::size_t k) {
                Rng rng = Rng::substream(seed, t, stream + k);
                const auto slots = generate_fading_slots(rng, setup.n_slots);
                for (const auto &set : find_matched_sets(slots, pre, *setup.cb, M))
                    found[k].push_back(
                        {realization_of(slots, set), setup.cb->codeword(set.index_rx1), setup.cb->codeword(set.index_rx2), 0});
            });
            for (auto &f : found)
                for (auto &m : f)
                    if (out.size() < count)
                        out.push_back(std::move(m));
            stream += batch;
        }
        return out;
    }

    GeometryBatch geometry_batch(const std::vector<MatchedSample> &samples, const Precoders &pre)
    {
        GeometryBatch g;
        g.factors.reserve(samples.size());
        for (const auto &m : samples)
        {
            const ReceiverGeometry geo = receiver_geometry(m.x, pre, m.w_rx1);
            try
            {
                g.factors.push_back(power_factors(geo));
                g.a1.push_back(geo.a1);
                g.a2.push_back(geo.a2);
            }
            catch (const DegenerateGeometry &)
            {
                ++g.degenerate;
            }
        }
        return g;
    }

    DofResult dof_sweep(double alpha, int M, std::span<const double> p_db, std::size_t trials, std::uint64_t seed,
                        SamplerMode mode, unsigned threads)
    {
        if (M < 3)
            throw DomainError("dof_sweep requires M >= 3");
        if (!(alpha > 0.0 && alpha <= M - 1))
            throw DomainError("dof_sweep: alpha must lie in (0, M-1]");
        if (p_db.size() < 2)
            throw InvalidOperands("dof_sweep: need at least two power points");
        const Precoders pre = run_precoders(seed, M);
        DofResult d;
        d.alpha = alpha;
        d.M = M;
        std::vector<double> x, y;
        for (double db : p_db)
        {
            const double p = db_to_linear(db);
            const int B = feedback_bits(alpha, p);
            const SamplerMode m = resolve_mode(mode, B);
            std::optional<Codebook> cb;
            if (m != SamplerMode::ensemble)
                cb = Codebook::generate(codebook_seed(seed, B), M, B);
            const SamplerSetup setup{m, B, &pre, cb ? &*cb : nullptr, 200};
            const auto samples =
                collect_matched(setup, seed, point_tag("dof-sweep", {{"M", M}, {"alpha", alpha}, {"p_db", db}}), trials, threads);
            const GeometryBatch g = geometry_batch(samples, pre);
            d.points.push_back({db, B, rate_report(g.factors, g.a1, db, B, M, g.degenerate)});
            x.push_back(std::log2(p));
            y.push_back(d.points.back().report.mean_log_sinr);
        }
        d.slope = least_squares(x, y).slope;
        d.target = alpha / (M - 1);
        d.total_unscaled = 4.0 / 3.0 * d.slope;
        d.total_scaled = 4.0 / M * d.slope;
        return d;
    }

    RunSummary compute(const RunConfig &cfg)
    {
        validate(cfg);
        const auto start = std::chrono::steady_clock::now();
        RunSummary s;
        switch (cfg.experiment)
        {
        case Experiment::ff_demo: s = ff_demo(cfg); break;
        case Experiment::ff_match_stats: s = ff_match_stats(cfg); break;
        case Experiment::beta_check: s = beta_check(cfg); break;
        case Experiment::lemma1: s = lemma1(cfg); break;
        case Experiment::lemma2: s = lemma2(cfg); break;
        case Experiment::match_stats: s = match_stats(cfg); break;
        case Experiment::rate_gap: s = rate_gap(cfg); break;
        case Experiment::gap_vs_B: s = gap_vs_B(cfg); break;
        case Experiment::dof_sweep: s = dof(cfg); break;
        case Experiment::symmetry_check: s = symmetry(cfg); break;
        }
        s.config = cfg;
        s.version = XALIGN_VERSION;
        s.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return s;
    }

    RunSummary run(const RunConfig &cfg)
    {
        RunSummary s = compute(cfg);
        if (cfg.output)
            emit(s, cfg.format, *cfg.output);
        return s;
    }
} // namespace xalign
