// SPDX-License-Identifier: Apache-2.0
#include "wchaos/chaos.hpp"
#include "wchaos/diagnostics.hpp"
#include "wchaos/errors.hpp"
#include "wchaos/experiments.hpp"
#include "wchaos/functionals.hpp"
#include "wchaos/parallel.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

namespace py = pybind11;
using namespace wchaos;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

SymTensor kernelFromArray(const Array& a)
{
    const int order = static_cast<int>(a.ndim());
    if (order == 0) {
        return SymTensor::scalar(*a.data());
    }
    const auto dim = a.shape(0);
    for (int k = 1; k < order; ++k) {
        if (a.shape(k) != dim) {
            throw std::invalid_argument("kernel array must have equal extents on every axis");
        }
    }
    std::vector<double> c(a.data(), a.data() + a.size());
    return symmetrize(Tensor(order, static_cast<int>(dim), std::move(c)));
}

Array kernelToArray(const SymTensor& f)
{
    std::vector<py::ssize_t> shape(static_cast<std::size_t>(f.order()), f.dim());
    Array out(shape);
    std::copy(f.coeffs().begin(), f.coeffs().end(), out.mutable_data());
    return out;
}

GaussianSample toSample(const Array& xi)
{
    if (xi.ndim() != 1) {
        throw std::invalid_argument("xi must be one-dimensional");
    }
    return GaussianSample{std::vector<double>(xi.data(), xi.data() + xi.size())};
}

std::span<const double> view(const Array& a)
{
    return {a.data(), static_cast<std::size_t>(a.size())};
}

py::dict summaryDict(const SampleSummary& s)
{
    py::dict d;
    d["n"] = s.n;
    d["mean"] = s.mean;
    d["variance"] = s.variance;
    d["skewness"] = s.skewness;
    d["kurtosis"] = s.kurtosis;
    d["mean_se"] = s.meanSE;
    d["variance_se"] = s.varianceSE;
    d["skewness_se"] = s.skewnessSE;
    d["kurtosis_se"] = s.kurtosisSE;
    return d;
}

py::dict ksDict(const KSResult& k)
{
    py::dict d;
    d["statistic"] = k.statistic;
    d["n"] = k.n;
    d["threshold"] = k.threshold;
    d["pass"] = k.pass;
    return d;
}

Grid axisGrid(const FunctionalParams& p, int cells, double ratio)
{
    return defaultGrid(p, cells, ratio);
}

}  // namespace

PYBIND11_MODULE(_wchaos, m)
{
    m.doc() = "Wiener chaos kernels, quadratic Gaussian functionals and fourth-moment diagnostics";

    py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

    m.def("set_threads", &setThreadCount, py::arg("n"));
    m.def("threads", &threadCount);

    m.def("hermite", &hermite, py::arg("k"), py::arg("x"));
    m.def("symmetrize", [](const Array& a) { return kernelToArray(kernelFromArray(a)); }, py::arg("kernel"));
    m.def(
        "eval_integral",
        [](const Array& kernel, const Array& xi) { return evalIntegral(kernelFromArray(kernel), toSample(xi)); },
        py::arg("kernel"), py::arg("xi"), "Multiple integral I_n(sym(kernel)) at the coordinates xi.");
    m.def("second_moment", [](const Array& k) { return secondMomentExact(kernelFromArray(k)); }, py::arg("kernel"));
    m.def("fourth_moment", [](const Array& k) { return fourthMomentExact(kernelFromArray(k)); }, py::arg("kernel"));
    m.def(
        "contraction_norm_squared",
        [](const Array& k, int p) { return contractionNormSquared(kernelFromArray(k), p); },
        py::arg("kernel"), py::arg("p"));
    m.def(
        "spectrum",
        [](const Array& k) {
            const Eigen::VectorXd s = hsFromKernel(kernelFromArray(k)).spectrum;
            return std::vector<double>(s.data(), s.data() + s.size());
        },
        py::arg("kernel"));

    py::class_<FunctionalParams>(m, "Params")
        .def_static("f_beta", &FunctionalParams::fBeta, py::arg("hurst"), py::arg("beta"))
        .def_static("l_eps", &FunctionalParams::lEps, py::arg("hurst"), py::arg("eps"))
        .def_static("a_beta", &FunctionalParams::aBeta, py::arg("beta"))
        .def_static("b_eps", &FunctionalParams::bEps, py::arg("dims"), py::arg("eps"))
        .def_static("f_beta_from_delta", &fBetaFromDelta, py::arg("hurst"), py::arg("delta"))
        .def_static("a_beta_from_control", &aBetaFromControl, py::arg("dims"), py::arg("control"))
        .def_property_readonly("family", [](const FunctionalParams& p) { return familyName(p.family); })
        .def_readonly("hurst", &FunctionalParams::hurst)
        .def_readonly("beta", &FunctionalParams::beta)
        .def_readonly("eps", &FunctionalParams::eps)
        .def_readonly("sheet_dims", &FunctionalParams::sheetDims)
        .def_property_readonly("mean", [](const FunctionalParams& p) { return chaosKernel(p).mean; })
        .def_property_readonly("scale", &statisticScale)
        .def("validate", &FunctionalParams::validate)
        .def("__repr__", [](const FunctionalParams& p) { return "<Params " + familyName(p.family) + ">"; });

    m.def(
        "sample_statistic",
        [](const FunctionalParams& p, int cells, std::size_t samples, std::uint64_t seed, double ratio,
           const std::string& method) {
            const StatisticOperator op(p, buildEmbedding(processModel(p), axisGrid(p, cells, ratio)));
            const HSOperator hs = statisticSpectrum(op);
            std::vector<double> draws;
            {
                py::gil_scoped_release release;
                draws = sampleNormalizedStatistic(op, hs, samples, seed, "python", parseMethod(method));
            }
            Array out(static_cast<py::ssize_t>(draws.size()));
            std::copy(draws.begin(), draws.end(), out.mutable_data());
            return out;
        },
        py::arg("params"), py::arg("cells"), py::arg("samples"), py::arg("seed") = 0, py::arg("ratio") = 0.5,
        py::arg("method") = "spectral", "Monte Carlo draws of the normalized statistic on the default grid.");

    m.def(
        "sweep_point",
        [](const FunctionalParams& p, int cells, std::size_t samples, std::uint64_t seed, double ratio,
           const std::string& method) {
            SweepRow r;
            {
                py::gil_scoped_release release;
                r = runSweepPoint(p, axisGrid(p, cells, ratio), samples, seed, "python", parseMethod(method));
            }
            py::dict d;
            d["family"] = familyName(p.family);
            d["cells"] = r.cells;
            d["generators"] = r.generators;
            d["control"] = r.control;
            d["exact_variance"] = r.exactVariance;
            d["exact_excess"] = r.exactExcess;
            d["contraction_ratio"] = r.contractionRatio;
            d["closed_form_variance"] = r.closedFormVariance;
            d["mc"] = summaryDict(r.mc);
            d["ks"] = ksDict(r.ks);
            return d;
        },
        py::arg("params"), py::arg("cells"), py::arg("samples"), py::arg("seed") = 0, py::arg("ratio") = 0.5,
        py::arg("method") = "spectral");

    m.def("variance_closed_form_sheet", [](const std::vector<double>& beta) { return varianceClosedFormSheet(beta); },
          py::arg("beta"));
    m.def("variance_closed_form_sheet_eps", &varianceClosedFormSheetEps, py::arg("dims"), py::arg("eps"));

    m.def("ks_std_normal", [](const Array& x) { return ksDict(ksAgainstStdNormal(view(x))); }, py::arg("samples"));
    m.def("summarize", [](const Array& x) { return summaryDict(summarize(view(x))); }, py::arg("samples"));

    m.def(
        "diagnose",
        [](const std::string& family, std::vector<double> schedule, std::size_t samples, std::uint64_t seed) {
            const KernelSequence seq = builtinSequence(family, std::move(schedule));
            DiagnosticReport rep;
            {
                py::gil_scoped_release release;
                rep = theoremOneReport(seq, samples, seed);
            }
            py::list rows;
            for (const DiagnosticRow& r : rep.rows) {
                py::dict d;
                d["parameter"] = r.parameter;
                d["dim"] = r.dim;
                d["raw_variance"] = r.rawVariance;
                d["fourth_moment"] = r.fourthMoment;
                d["excess"] = r.excess;
                d["contraction_norms"] = r.contractionNorms;
                d["mc"] = summaryDict(r.mc);
                d["ks"] = ksDict(r.ks);
                rows.append(d);
            }
            py::dict out;
            out["name"] = rep.name;
            out["order"] = rep.order;
            out["verdict"] = verdictName(rep.verdict);
            out["reason"] = rep.reason;
            out["rows"] = rows;
            return out;
        },
        py::arg("family"), py::arg("schedule"), py::arg("samples") = 10000, py::arg("seed") = 0);
}
