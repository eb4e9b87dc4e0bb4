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

#include "xalign/cgeom.hpp"
#include "xalign/harness.hpp"
#include "xalign/rates.hpp"
#include "xalign/rvq.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace xalign;

namespace
{
    py::dict summary_dict(const RunSummary &s)
    {
        py::list checks;
        for (const auto &c : s.checks)
        {
            py::dict d;
            d["name"] = c.name;
            d["value"] = c.value;
            d["threshold"] = c.threshold;
            d["tolerance"] = c.tolerance;
            d["passed"] = c.passed;
            checks.append(d);
        }
        py::dict out;
        out["config"] = echo(s.config);
        out["columns"] = s.columns;
        out["rows"] = s.rows;
        out["checks"] = checks;
        out["all_passed"] = s.all_passed();
        out["version"] = s.version;
        return out;
    }

    KeyValues to_key_values(const py::dict &d)
    {
        KeyValues kv;
        for (const auto &[k, v] : d)
        {
            std::string value;
            if (py::isinstance<py::list>(v) || py::isinstance<py::tuple>(v))
            {
                for (const auto &item : v)
                    value += (value.empty() ? "" : ",") + py::str(item).cast<std::string>();
            }
            else
                value = py::str(v).cast<std::string>();
            kv[py::str(k).cast<std::string>()] = value;
        }
        return kv;
    }
} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Ergodic interference alignment on the two-user X channel with RVQ feedback";
    m.attr("__version__") = XALIGN_VERSION;

    py::class_<Codebook>(m, "Codebook")
        .def_static("generate", &Codebook::generate, py::arg("seed"), py::arg("M"), py::arg("B"))
        .def_static("load", [](const std::filesystem::path &p) { return Codebook::load(p); }, py::arg("path"))
        .def("save", &Codebook::save, py::arg("path"))
        .def_property_readonly("dim", &Codebook::dim)
        .def_property_readonly("bits", &Codebook::bits)
        .def_property_readonly("seed", &Codebook::seed)
        .def("__len__", &Codebook::size)
        .def("codeword", &Codebook::codeword, py::arg("index"))
        .def("quantize", &Codebook::quantize, py::arg("q"))
        .def("quantization_error", &Codebook::quantization_error, py::arg("q"))
        .def("__eq__", [](const Codebook &a, const Codebook &b) { return a == b; });

    m.def("overlap", &overlap, py::arg("a"), py::arg("b"));
    m.def("sin2", &sin2, py::arg("a"), py::arg("b"));
    m.def("lemma1_bound", &lemma1_bound, py::arg("M"), py::arg("B"));
    m.def("quantization_error_ccdf", &quantization_error_ccdf, py::arg("x"), py::arg("M"), py::arg("B"));
    m.def("gap_bound", &gap_bound, py::arg("p"), py::arg("B"), py::arg("M"));
    m.def("db_to_linear", &db_to_linear, py::arg("db"));
    m.def("feedback_bits", &feedback_bits, py::arg("alpha"), py::arg("p"));
    m.def("scaled_feedback_bits", &scaled_feedback_bits, py::arg("p"), py::arg("c") = 4.0);
    m.def("dof_estimate", [](const std::vector<std::pair<double, double>> &r) { return dof_estimate(r); },
          py::arg("rates"), "Least-squares slope of rate against log2(p) over the upper half of the points.");

    m.def(
        "run",
        [](const py::dict &config) {
            const RunConfig cfg = parse_config(to_key_values(config));
            RunSummary s;
            {
                py::gil_scoped_release release;
                s = run(cfg);
            }
            return summary_dict(s);
        },
        py::arg("config"),
        "Run one experiment from a flat key/value mapping; list values become comma-separated lists.");

    m.def(
        "render",
        [](const py::dict &config, const std::string &format) {
            const RunConfig cfg = parse_config(to_key_values(config));
            py::gil_scoped_release release;
            return render(compute(cfg), parse_format(format));
        },
        py::arg("config"), py::arg("format") = "csv");
}
