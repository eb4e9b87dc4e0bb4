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
#include "xalign/gf.hpp"
#include "xalign/harness.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

namespace xalign
{
    namespace
    {
        constexpr std::array<std::pair<Experiment, std::string_view>, 10> kExperiments{{
            {Experiment::ff_demo, "ff-demo"},
            {Experiment::ff_match_stats, "ff-match-stats"},
            {Experiment::beta_check, "beta-check"},
            {Experiment::lemma1, "lemma1"},
            {Experiment::lemma2, "lemma2"},
            {Experiment::match_stats, "match-stats"},
            {Experiment::rate_gap, "rate-gap"},
            {Experiment::gap_vs_B, "gap-vs-B"},
            {Experiment::dof_sweep, "dof-sweep"},
            {Experiment::symmetry_check, "symmetry-check"},
        }};

        constexpr std::array<std::pair<SamplerMode, std::string_view>, 4> kModes{{
            {SamplerMode::automatic, "auto"},
            {SamplerMode::stream_search, "stream-search"},
            {SamplerMode::rejection_conditioning, "rejection-conditioning"},
            {SamplerMode::ensemble, "ensemble"},
        }};

        constexpr std::array<std::string_view, 14> kKeys{"experiment", "q",      "M",    "B",       "alpha",
                                                         "p_db",       "n_slots", "trials", "seed", "mode",
                                                         "output",     "format", "threads", "loglog_coeff"};

        std::string trim(std::string_view s)
        {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string_view::npos)
                return {};
            const auto e = s.find_last_not_of(" \t\r");
            return std::string(s.substr(b, e - b + 1));
        }

        std::string canonical_key(std::string_view key)
        {
            std::string k = trim(key);
            std::replace(k.begin(), k.end(), '-', '_');
            return k;
        }

        [[noreturn]] void bad_value(const std::string &key, const std::string &value, const char *expected)
        {
            throw UsageError("config key '" + key + "': expected " + expected + ", got '" + value + "'");
        }

        template <class T>
        T parse_number(const std::string &key, const std::string &raw, const char *expected)
        {
            const std::string v = trim(raw);
            T out{};
            const auto *first = v.data();
            const auto *last = v.data() + v.size();
            auto [ptr, ec] = std::from_chars(first, last, out);
            if (v.empty() || ec != std::errc{} || ptr != last)
                bad_value(key, raw, expected);
            return out;
        }

        template <class T>
        std::vector<T> parse_list(const std::string &key, const std::string &raw, const char *expected)
        {
            std::vector<T> out;
            std::stringstream ss(raw);
            std::string item;
            while (std::getline(ss, item, ','))
                out.push_back(parse_number<T>(key, item, expected));
            if (out.empty())
                bad_value(key, raw, expected);
            return out;
        }

        bool fading(Experiment e)
        {
            return e == Experiment::lemma1 || e == Experiment::match_stats || e == Experiment::rate_gap ||
                   e == Experiment::gap_vs_B || e == Experiment::dof_sweep || e == Experiment::symmetry_check;
        }

        bool uses_power(Experiment e)
        {
            return e == Experiment::rate_gap || e == Experiment::gap_vs_B || e == Experiment::dof_sweep ||
                   e == Experiment::symmetry_check;
        }

        template <class T>
        std::string join(const std::vector<T> &v)
        {
            std::ostringstream os;
            os.precision(17);
            for (std::size_t i = 0; i < v.size(); ++i)
                os << (i ? "," : "") << v[i];
            return os.str();
        }
    } // namespace

    std::string_view to_string(Experiment e)
    {
        for (auto &[k, v] : kExperiments)
            if (k == e)
                return v;
        return "?";
    }

    std::string_view to_string(SamplerMode m)
    {
        for (auto &[k, v] : kModes)
            if (k == m)
                return v;
        return "?";
    }

    std::string_view to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

    Experiment parse_experiment(std::string_view s)
    {
        for (auto &[k, v] : kExperiments)
            if (v == s)
                return k;
        throw UsageError("config key 'experiment': unknown experiment '" + std::string(s) + "'");
    }

    SamplerMode parse_mode(std::string_view s)
    {
        for (auto &[k, v] : kModes)
            if (v == s)
                return k;
        throw UsageError("config key 'mode': unknown sampler mode '" + std::string(s) + "'");
    }

    OutputFormat parse_format(std::string_view s)
    {
        if (s == "csv")
            return OutputFormat::csv;
        if (s == "json")
            return OutputFormat::json;
        throw UsageError("config key 'format': expected csv or json, got '" + std::string(s) + "'");
    }

    KeyValues parse_key_values(std::string_view text)
    {
        KeyValues out;
        std::istringstream in{std::string(text)};
        std::string line;
        int lineno = 0;
        while (std::getline(in, line))
        {
            ++lineno;
            if (auto hash = line.find('#'); hash != std::string::npos)
                line.erase(hash);
            if (trim(line).empty())
                continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw UsageError("config line " + std::to_string(lineno) + ": expected key = value");
            const std::string key = canonical_key(line.substr(0, eq));
            if (key.empty())
                throw UsageError("config line " + std::to_string(lineno) + ": empty key");
            if (!out.emplace(key, trim(line.substr(eq + 1))).second)
                throw UsageError("config key '" + key + "': given twice");
        }
        return out;
    }

    KeyValues read_config_file(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        if (!in)
            throw UsageError("cannot read config file: " + path.string());
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse_key_values(ss.str());
    }

    RunConfig parse_config(const KeyValues &file, const KeyValues &flags)
    {
        KeyValues merged;
        for (const auto *src : {&file, &flags})
            for (const auto &[k, v] : *src)
                merged[canonical_key(k)] = v;

        RunConfig cfg;
        bool have_seed = false;
        for (const auto &[key, value] : merged)
        {
            if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end())
                throw UsageError("unknown config key '" + key + "'");
            if (key == "experiment")
                cfg.experiment = parse_experiment(trim(value));
            else if (key == "q")
                cfg.q = parse_number<std::uint32_t>(key, value, "an integer");
            else if (key == "M")
                cfg.M = parse_number<int>(key, value, "an integer");
            else if (key == "B")
                cfg.B = parse_list<int>(key, value, "a comma-separated list of integers");
            else if (key == "alpha")
                cfg.alpha = parse_list<double>(key, value, "a comma-separated list of numbers");
            else if (key == "p_db")
                cfg.p_db = parse_list<double>(key, value, "a comma-separated list of numbers");
            else if (key == "n_slots")
                cfg.n_slots = parse_number<std::size_t>(key, value, "a non-negative integer");
            else if (key == "trials")
                cfg.trials = parse_number<std::size_t>(key, value, "a non-negative integer");
            else if (key == "seed")
            {
                cfg.seed = parse_number<std::uint64_t>(key, value, "a 64-bit unsigned integer");
                have_seed = true;
            }
            else if (key == "mode")
                cfg.mode = parse_mode(trim(value));
            else if (key == "output")
                cfg.output = trim(value);
            else if (key == "format")
                cfg.format = parse_format(trim(value));
            else if (key == "threads")
                cfg.threads = parse_number<unsigned>(key, value, "a positive integer");
            else if (key == "loglog_coeff")
                cfg.loglog_coeff = parse_number<double>(key, value, "a number");
        }
        if (!merged.contains("experiment"))
            throw UsageError("config key 'experiment' is required");
        if (!have_seed)
            throw UsageError("config key 'seed' is required");
        validate(cfg);
        return cfg;
    }

    void validate(const RunConfig &cfg)
    {
        const Experiment e = cfg.experiment;
        if (cfg.threads < 1)
            throw UsageError("config key 'threads': must be at least 1");
        if (cfg.trials < 1)
            throw UsageError("config key 'trials': must be at least 1");
        if (e == Experiment::ff_demo || e == Experiment::ff_match_stats)
        {
            if (cfg.q == 0)
                throw UsageError("config key 'q' is required for " + std::string(to_string(e)));
            if (cfg.q < 3 || !is_prime(cfg.q))
                throw UsageError("config key 'q': must be a prime >= 3");
            if (cfg.M != 3)
                throw UsageError("config key 'M': finite-field experiments use M = 3");
        }
        if (cfg.M < 2 || cfg.M > 8)
            throw UsageError("config key 'M': must lie in [2, 8]");
        if (fading(e) && !cfg.B.empty() && !cfg.alpha.empty())
            throw UsageError("config keys 'B' and 'alpha' are mutually exclusive");
        if (e == Experiment::dof_sweep)
        {
            if (cfg.alpha.empty())
                throw UsageError("config key 'alpha' is required for dof-sweep");
            for (double a : cfg.alpha)
                if (!(a > 0.0 && a <= cfg.M - 1))
                    throw UsageError("config key 'alpha': must lie in (0, M-1]");
        }
        else if (!cfg.alpha.empty())
            throw UsageError("config key 'alpha' is only used by dof-sweep");
        if ((e == Experiment::lemma1 || e == Experiment::match_stats || e == Experiment::rate_gap ||
             e == Experiment::symmetry_check) &&
            cfg.B.empty())
            throw UsageError("config key 'B' is required for " + std::string(to_string(e)));
        for (int b : cfg.B)
            if (b < 0 || b > 60)
                throw UsageError("config key 'B': must lie in [0, 60]");
        if (uses_power(e))
        {
            if (cfg.M < 3)
                throw UsageError("config key 'M': rate experiments need M >= 3");
            if (cfg.p_db.empty())
                throw UsageError("config key 'p_db' is required for " + std::string(to_string(e)));
            if (e == Experiment::dof_sweep || e == Experiment::gap_vs_B)
                for (std::size_t i = 1; i < cfg.p_db.size(); ++i)
                    if (!(cfg.p_db[i] > cfg.p_db[i - 1]))
                        throw UsageError("config key 'p_db': must be strictly increasing");
            if (e == Experiment::gap_vs_B && cfg.B.empty())
                for (double db : cfg.p_db)
                    if (db <= 0.0)
                        throw UsageError("config key 'p_db': the scaled schedule needs p > 1");
        }
        if (e == Experiment::symmetry_check && cfg.mode == SamplerMode::stream_search)
            throw UsageError("config key 'mode': symmetry-check draws fresh precoders per trial and cannot use stream-search");
        if (cfg.mode == SamplerMode::stream_search && cfg.n_slots < static_cast<std::size_t>(cfg.M))
            throw UsageError("config key 'n_slots': must be at least M");
    }

    KeyValues echo(const RunConfig &cfg)
    {
        KeyValues kv{
            {"experiment", std::string(to_string(cfg.experiment))},
            {"M", std::to_string(cfg.M)},
            {"n_slots", std::to_string(cfg.n_slots)},
            {"trials", std::to_string(cfg.trials)},
            {"seed", std::to_string(cfg.seed)},
            {"mode", std::string(to_string(cfg.mode))},
            {"format", std::string(to_string(cfg.format))},
        };
        if (cfg.q)
            kv["q"] = std::to_string(cfg.q);
        if (!cfg.B.empty())
            kv["B"] = join(cfg.B);
        if (!cfg.alpha.empty())
            kv["alpha"] = join(cfg.alpha);
        if (!cfg.p_db.empty())
            kv["p_db"] = join(cfg.p_db);
        if (cfg.experiment == Experiment::gap_vs_B)
            kv["loglog_coeff"] = join(std::vector<double>{cfg.loglog_coeff});
        return kv;
    }
} // namespace xalign
