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

// xalign: batch driver for the X-channel alignment experiments.
//
//   xalign <experiment> [--config FILE] [--seed N] [--out PATH] [--format csv|json]
//          [--q N] [--M N] [--B LIST] [--alpha LIST] [--p-db LIST]
//          [--n-slots N] [--trials N] [--mode MODE] [--threads N]
//
// Exit status: 0 when every check passes, 2 when a check fails (output is
// still written), 1 on usage or runtime errors.

#include "xalign/errors.hpp"
#include "xalign/harness.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

int main(int argc, char **argv)
{
    CLI::App app{"Ergodic interference alignment experiments for the two-user X channel"};
    app.set_version_flag("--version", std::string(XALIGN_VERSION));

    std::string experiment;
    std::string config_file;
    std::map<std::string, std::string> flags;
    const std::vector<std::pair<const char *, const char *>> options = {
        {"seed", "Run seed (64-bit)"},
        {"out", "Output file; stdout when omitted"},
        {"format", "csv or json"},
        {"q", "Field size (finite-field experiments)"},
        {"M", "Dimension / slots per set"},
        {"B", "Feedback bits, comma-separated list"},
        {"alpha", "Feedback exponent list (dof-sweep)"},
        {"p-db", "Transmit powers in dB, comma-separated"},
        {"n-slots", "Slots per stream (stream-search)"},
        {"trials", "Trials or samples per point"},
        {"mode", "auto, stream-search, rejection-conditioning or ensemble"},
        {"threads", "Worker threads"},
        {"loglog-coeff", "c in B = 2 log2 p + c log2 log2 p (gap-vs-B)"},
    };
    app.add_option("experiment", experiment,
                   "ff-demo | ff-match-stats | beta-check | lemma1 | lemma2 | match-stats | rate-gap | gap-vs-B | "
                   "dof-sweep | symmetry-check")
        ->required();
    app.add_option("--config", config_file, "key = value configuration file")->check(CLI::ExistingFile);
    std::vector<std::string> values(options.size());
    for (std::size_t i = 0; i < options.size(); ++i)
        app.add_option(std::string("--") + options[i].first, values[i], options[i].second);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try
    {
        xalign::KeyValues file;
        if (!config_file.empty())
            file = xalign::read_config_file(config_file);
        flags["experiment"] = experiment;
        for (std::size_t i = 0; i < options.size(); ++i)
            if (app.count(std::string("--") + options[i].first) > 0)
                flags[std::string(options[i].first) == "out" ? "output" : options[i].first] = values[i];

        const xalign::RunConfig cfg = xalign::parse_config(file, flags);
        const xalign::RunSummary summary = xalign::run(cfg);
        if (!cfg.output)
            std::cout << xalign::render(summary, cfg.format);

        for (const auto &c : summary.checks)
            std::fprintf(stderr, "%s  %s  value=%.6g threshold=%.6g tol=%.3g\n", c.passed ? "PASS" : "FAIL",
                         c.name.c_str(), c.value, c.threshold, c.tolerance);
        std::fprintf(stderr, "wall time %.2f s\n", summary.wall_time_s);
        return summary.all_passed() ? 0 : 2;
    }
    catch (const xalign::UsageError &e)
    {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 1;
    }
    catch (const std::exception &e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
