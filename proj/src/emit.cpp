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

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <system_error>

namespace xalign
{
    namespace
    {
        std::string format_number(double v)
        {
            if (std::isnan(v))
                return "nan";
            if (std::isinf(v))
                return v > 0 ? "inf" : "-inf";
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            return buf;
        }

        nlohmann::ordered_json number(double v)
        {
            if (std::isfinite(v))
                return v;
            return format_number(v);
        }
    } // namespace

    bool RunSummary::all_passed() const
    {
        for (const auto &c : checks)
            if (!c.passed)
                return false;
        return true;
    }

    std::string render(const RunSummary &s, OutputFormat format)
    {
        if (format == OutputFormat::csv)
        {
            std::string out;
            for (std::size_t i = 0; i < s.columns.size(); ++i)
                out += (i ? "," : "") + s.columns[i];
            out += '\n';
            for (const auto &row : s.rows)
            {
                for (std::size_t i = 0; i < row.size(); ++i)
                    out += (i ? "," : "") + format_number(row[i]);
                out += '\n';
            }
            return out;
        }

        nlohmann::ordered_json j;
        j["version"] = s.version;
        nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
        for (const auto &[k, v] : echo(s.config))
            cfg[k] = v;
        j["config"] = cfg;
        j["columns"] = s.columns;
        auto rows = nlohmann::ordered_json::array();
        for (const auto &row : s.rows)
        {
            auto r = nlohmann::ordered_json::array();
            for (double v : row)
                r.push_back(number(v));
            rows.push_back(std::move(r));
        }
        j["rows"] = std::move(rows);
        auto checks = nlohmann::ordered_json::array();
        for (const auto &c : s.checks)
            checks.push_back({{"name", c.name},
                              {"value", number(c.value)},
                              {"threshold", number(c.threshold)},
                              {"tolerance", number(c.tolerance)},
                              {"passed", c.passed}});
        j["checks"] = std::move(checks);
        j["all_passed"] = s.all_passed();
        return j.dump(2) + "\n";
    }

    void emit(const RunSummary &summary, OutputFormat format, const std::filesystem::path &path)
    {
        const std::string text = render(summary, format);
        std::filesystem::path tmp = path;
        tmp += ".partial";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out)
                throw std::runtime_error("cannot open output file for writing: " + tmp.string());
            out.write(text.data(), static_cast<std::streamsize>(text.size()));
            out.close();
            if (!out)
            {
                std::error_code ec;
                std::filesystem::remove(tmp, ec);
                throw std::runtime_error("error writing output file: " + path.string());
            }
        }
        std::error_code ec;
        std::filesystem::rename(tmp, path, ec);
        if (ec)
        {
            std::filesystem::remove(tmp, ec);
            throw std::runtime_error("cannot move output into place: " + path.string());
        }
    }
} // namespace xalign
