// Copyright 2026 The qdeph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qdeph/analytic.h"
#include "qdeph/dephasing.h"
#include "qdeph/nm_analysis.h"
#include "qdeph/noise.h"
#include "qdeph/spectral.h"

namespace py = pybind11;
using namespace qdeph;

namespace {

py::array_t<double> as_array(const std::vector<double> &v) {
    return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::array_t<double> as_matrix(const std::vector<double> &v, std::size_t rows, std::size_t cols) {
    py::array_t<double> out({static_cast<py::ssize_t>(rows), static_cast<py::ssize_t>(cols)});
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

template <class F>
py::array_t<double> vectorize(py::array_t<double, py::array::c_style | py::array::forcecast> x, F f) {
    py::array_t<double> out(x.request().shape);
    const double *in = x.data();
    double *o = out.mutable_data();
    for (py::ssize_t i = 0; i < x.size(); ++i) o[i] = f(in[i]);
    return out;
}

}  // namespace

PYBIND11_MODULE(_qdeph, m) {
    m.doc() = "Qubit dephasing under classical stochastic noise";

    py::enum_<NoiseKind>(m, "NoiseKind")
        .value("ou", NoiseKind::ou)
        .value("rtn", NoiseKind::rtn)
        .value("filtered_ou", NoiseKind::filtered_ou)
        .value("filtered_rtn", NoiseKind::filtered_rtn);

    py::class_<NoiseSpec>(m, "NoiseSpec")
        .def_static("ou", &NoiseSpec::ou, py::arg("gamma"), py::arg("sigma"))
        .def_static("rtn", &NoiseSpec::rtn, py::arg("gamma"))
        .def_static("filtered_ou", &NoiseSpec::filtered_ou, py::arg("gamma"), py::arg("sigma"), py::arg("kappa"))
        .def_static("filtered_rtn", &NoiseSpec::filtered_rtn, py::arg("gamma"), py::arg("mu"))
        .def_readonly("kind", &NoiseSpec::kind)
        .def_readonly("gamma", &NoiseSpec::gamma)
        .def_readonly("sigma", &NoiseSpec::sigma)
        .def_readonly("kappa", &NoiseSpec::kappa)
        .def_readonly("mu", &NoiseSpec::mu)
        .def("__repr__", [](const NoiseSpec &s) { return "NoiseSpec(" + std::string(to_string(s.kind)) + ")"; });

    py::class_<TimeGrid>(m, "TimeGrid")
        .def(py::init<double, std::size_t, std::size_t>(), py::arg("t_max"), py::arg("n_out"), py::arg("substeps") = 1)
        .def_static("with_default_substeps", &TimeGrid::with_default_substeps, py::arg("t_max"), py::arg("n_out"),
                    py::arg("spec"))
        .def_property_readonly("t_max", &TimeGrid::t_max)
        .def_property_readonly("size", &TimeGrid::size)
        .def_property_readonly("substeps", &TimeGrid::substeps)
        .def_property_readonly("dt", &TimeGrid::dt)
        .def("times", [](const TimeGrid &g) { return as_array(g.times()); });

    m.def(
        "sample",
        [](const NoiseSpec &spec, const TimeGrid &grid, std::uint64_t seed, std::size_t n, int threads) {
            TrajectoryEnsemble e;
            {
                py::gil_scoped_release release;
                e = sample(spec, grid, seed, n, threads);
            }
            return py::make_tuple(as_matrix(e.values, e.n_paths, grid.size()),
                                  as_matrix(e.integrals, e.n_paths, grid.size()));
        },
        py::arg("spec"), py::arg("grid"), py::arg("seed"), py::arg("n"), py::arg("threads") = 1,
        "Returns (values, integrals), each of shape (n, grid.size).");

    py::class_<DephasingCurve>(m, "DephasingCurve")
        .def_property_readonly("t", [](const DephasingCurve &c) { return as_array(c.grid.times()); })
        .def_property_readonly("d", [](const DephasingCurve &c) { return as_array(c.d_values); })
        .def_property_readonly("std_err",
                               [](const DephasingCurve &c) -> py::object {
                                   if (!c.std_err) return py::none();
                                   return as_array(*c.std_err);
                               })
        .def_readonly("phasor", &DephasingCurve::phasor)
        .def_readonly("n_realizations", &DephasingCurve::n_realizations);

    m.def(
        "simulate_curve",
        [](const NoiseSpec &spec, const TimeGrid &grid, double omega0, std::size_t n, std::uint64_t seed,
           int threads) {
            py::gil_scoped_release release;
            return simulate_curve(spec, grid, omega0, n, seed, threads);
        },
        py::arg("spec"), py::arg("grid"), py::arg("omega0"), py::arg("n"), py::arg("seed"), py::arg("threads") = 1);

    py::class_<Revival>(m, "Revival")
        .def_readonly("t_start", &Revival::t_start)
        .def_readonly("t_end", &Revival::t_end)
        .def_readonly("depth", &Revival::depth);

    py::class_<RevivalReport>(m, "RevivalReport")
        .def_readonly("revivals", &RevivalReport::revivals)
        .def_readonly("nm_measure", &RevivalReport::nm_measure)
        .def_property_readonly("verdict", [](const RevivalReport &r) { return std::string(to_string(r.verdict)); });

    m.def("detect_revivals", &detect_revivals, py::arg("curve"), py::arg("significance") = 3.0);

    py::class_<SpectrumEstimate>(m, "SpectrumEstimate")
        .def_property_readonly("omega", [](const SpectrumEstimate &s) { return as_array(s.omegas); })
        .def_property_readonly("s", [](const SpectrumEstimate &s) { return as_array(s.s_values); })
        .def_property_readonly("std_err", [](const SpectrumEstimate &s) { return as_array(s.std_err); })
        .def_readonly("bin_width", &SpectrumEstimate::bin_width)
        .def_readonly("sample_variance", &SpectrumEstimate::sample_variance);

    m.def(
        "simulate_periodogram",
        [](const NoiseSpec &spec, const TimeGrid &grid, std::uint64_t seed, std::size_t n, double transient_cut,
           const std::string &window, int threads) {
            Window w = parse_window(window);
            py::gil_scoped_release release;
            return simulate_periodogram(spec, grid, seed, n, transient_cut, w, std::nullopt, threads);
        },
        py::arg("spec"), py::arg("grid"), py::arg("seed"), py::arg("n"), py::arg("transient_cut"),
        py::arg("window") = "hann", py::arg("threads") = 1);
    m.def("peak_frequency", &peak_frequency, py::arg("estimate"), py::arg("omega_lo"), py::arg("omega_hi"),
          py::arg("log_half_width") = 0.5);

    m.def(
        "d_ou", [](py::array_t<double> t, double g, double s, double w) {
            return vectorize(t, [&](double x) { return analytic::d_ou(x, g, s, w); });
        },
        py::arg("t"), py::arg("gamma"), py::arg("sigma"), py::arg("omega0") = 1.0);
    m.def(
        "d_rtn", [](py::array_t<double> t, double g, double w) {
            return vectorize(t, [&](double x) { return analytic::d_rtn(x, g, w); });
        },
        py::arg("t"), py::arg("gamma"), py::arg("omega0") = 1.0);
    m.def(
        "d_y", [](py::array_t<double> t, double g, double s, double k, double w) {
            return vectorize(t, [&](double x) { return analytic::d_y(x, g, s, k, w); });
        },
        py::arg("t"), py::arg("gamma"), py::arg("sigma"), py::arg("kappa"), py::arg("omega0") = 1.0);
    m.def(
        "spectrum_y", [](py::array_t<double> w, double g, double k, double s) {
            return vectorize(w, [&](double x) { return analytic::spectrum_y(x, g, k, s); });
        },
        py::arg("omega"), py::arg("gamma"), py::arg("kappa"), py::arg("sigma"));
}
