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

#ifndef XALIGN_HARNESS_HPP
#define XALIGN_HARNESS_HPP

#include "xalign/rates.hpp"
#include "xalign/rvq.hpp"
#include "xalign/xsim.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace xalign
{
    enum class Experiment
    {
        ff_demo,
        ff_match_stats,
        beta_check,
        lemma1,
        lemma2,
        match_stats,
        rate_gap,
        gap_vs_B,
        dof_sweep,
        symmetry_check,
    };

    enum class SamplerMode
    {
        automatic,
        stream_search,
        rejection_conditioning,
        ensemble,
    };

    enum class OutputFormat
    {
        csv,
        json,
    };

    std::string_view to_string(Experiment e);
    std::string_view to_string(SamplerMode m);
    std::string_view to_string(OutputFormat f);
    Experiment parse_experiment(std::string_view s);
    SamplerMode parse_mode(std::string_view s);
    OutputFormat parse_format(std::string_view s);

    // Largest B for which `automatic` mode uses the stored codebook.
    inline constexpr int kAutoExplicitMaxBits = 8;

    struct RunConfig
    {
        Experiment experiment = Experiment::ff_demo;
        std::uint32_t q = 0;
        int M = 3;
        std::vector<int> B;
        std::vector<double> alpha;
        std::vector<double> p_db;
        std::size_t n_slots = 200;
        std::size_t trials = 10'000;
        std::uint64_t seed = 0;
        SamplerMode mode = SamplerMode::automatic;
        double loglog_coeff = 4.0;
        std::optional<std::filesystem::path> output;
        OutputFormat format = OutputFormat::csv;
        unsigned threads = 1;
    };

    using KeyValues = std::map<std::string, std::string>;

    // Reads `key = value` lines; '#' starts a comment. Throws UsageError on
    // malformed lines or repeated keys.
    KeyValues read_config_file(const std::filesystem::path &path);
    KeyValues parse_key_values(std::string_view text);

    // Builds a validated config from file values overridden by flag values.
    // Throws UsageError naming the offending key.
    RunConfig parse_config(const KeyValues &file, const KeyValues &flags = {});

    // Experiment-specific validation, also applied by parse_config.
    void validate(const RunConfig &cfg);

    // Key/value echo of a config, as written into the JSON summary.
    KeyValues echo(const RunConfig &cfg);

    struct Check
    {
        std::string name;
        double value = 0.0;
        double threshold = 0.0;
        double tolerance = 0.0;
        bool passed = false;
    };

    struct RunSummary
    {
        RunConfig config;
        std::vector<std::string> columns;
        std::vector<std::vector<double>> rows;
        std::vector<Check> checks;
        double wall_time_s = 0.0;
        std::string version;

        bool all_passed() const;
    };

    // Runs the experiment and, when cfg.output is set, writes the result file.
    RunSummary run(const RunConfig &cfg);

    // Computes the summary without touching the file system.
    RunSummary compute(const RunConfig &cfg);

    void emit(const RunSummary &summary, OutputFormat format, const std::filesystem::path &path);
    std::string render(const RunSummary &summary, OutputFormat format);

    // Calls body(i) for i in [0, n) on `threads` workers. Work is handed out
    // by index, so results stored per index do not depend on scheduling.
    // The first exception thrown by a body is rethrown after all workers stop.
    void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)> &body);

    SamplerMode resolve_mode(SamplerMode requested, int B);

    // Sources of matched realizations for one (M, B) point.
    struct SamplerSetup
    {
        SamplerMode mode = SamplerMode::automatic;
        int B = 0;
        const Precoders *pre = nullptr;
        const Codebook *cb = nullptr; // required except for ensemble
        std::size_t n_slots = 200;    // stream-search only
    };

    // `count` matched samples. Sample i of the rejection and ensemble modes
    // uses substream (seed, tag, i); stream-search scans slot streams
    // (seed, tag, k) for k = 0, 1, ... and keeps sets in stream order.
    std::vector<MatchedSample> collect_matched(const SamplerSetup &setup, std::uint64_t seed, std::string_view tag,
                                               std::size_t count, unsigned threads);

    struct GeometryBatch
    {
        std::vector<PowerFactors> factors;
        std::vector<double> a1;
        std::vector<double> a2;
        std::size_t degenerate = 0;
    };

    // Receiver-1 geometry of each sample; degenerate geometries are counted
    // and dropped.
    GeometryBatch geometry_batch(const std::vector<MatchedSample> &samples, const Precoders &pre);

    // Shared derivation of run-level objects from the seed.
    Precoders run_precoders(std::uint64_t seed, int M);
    std::uint64_t codebook_seed(std::uint64_t seed, int B);

    // B = round(alpha log2 p).
    int feedback_bits(double alpha, double p);

    // B = round(2 log2 p + c log2 log2 p).
    int scaled_feedback_bits(double p, double c);

    struct DofPoint
    {
        double p_db = 0.0;
        int B = 0;
        RateReport report;
    };

    struct DofResult
    {
        double alpha = 0.0;
        int M = 0;
        std::vector<DofPoint> points;
        double slope = 0.0;          // raw per-message slope of E log2(1+SINR)
        double target = 0.0;         // alpha / (M-1)
        double total_unscaled = 0.0; // (4/3) slope, 1/M prefactor dropped
        double total_scaled = 0.0;   // (4/M) slope, 1/M prefactor kept
    };

    DofResult dof_sweep(double alpha, int M, std::span<const double> p_db, std::size_t trials, std::uint64_t seed,
                        SamplerMode mode = SamplerMode::automatic, unsigned threads = 1);
} // namespace xalign

#endif
