// Thin binding layer: heavy results cross the boundary as JSON strings
// and the Python package turns them into dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "singlab/exponents.hpp"
#include "singlab/quadrature.hpp"
#include "singlab/report.hpp"
#include "singlab/suite.hpp"
#include "singlab/zero_geometry.hpp"

namespace py = pybind11;
using namespace singlab;

namespace {

Region region_or_cube(const std::string& text, int n) {
    return text.empty() ? Region::cube(n, -1.0, 1.0) : Region::parse(text);
}

}  // namespace

PYBIND11_MODULE(_singlab, m) {
    m.doc() = "numerical laboratory for integrability near polynomial zero sets";

    m.attr("DEFAULT_SEED") = kDefaultSeed;

    py::class_<SparsePolynomial>(m, "Polynomial")
        .def_static("parse", &SparsePolynomial::parse, py::arg("text"),
                    py::arg("min_vars") = 0)
        .def("num_vars", &SparsePolynomial::num_vars)
        .def("total_degree", &SparsePolynomial::total_degree)
        .def("__call__",
             [](const SparsePolynomial& f, const std::vector<double>& x) {
                 return f.eval(x);
             })
        .def("grad",
             [](const SparsePolynomial& f, const std::vector<double>& x) {
                 std::vector<double> g;
                 for (const auto& d : f.gradient()) g.push_back(d.eval(x));
                 return g;
             })
        .def("__repr__", &SparsePolynomial::to_string);

    m.def(
        "integrate_grad_log_json",
        [](const SparsePolynomial& f, double p, const std::string& region,
           std::int64_t samples, int j_max, std::uint64_t seed, int threads) {
            const Region U = region_or_cube(region, f.num_vars());
            return to_json(integrate_grad_log(f, p, U, {samples, j_max}, seed,
                                              threads))
                .dump();
        },
        py::arg("f"), py::arg("p"), py::arg("region") = "",
        py::arg("samples") = 200000, py::arg("j_max") = 24,
        py::arg("seed") = kDefaultSeed, py::arg("threads") = 0);

    m.def(
        "integrate_abs_log_json",
        [](const SparsePolynomial& f, double p, const std::string& region,
           std::int64_t samples, int j_max, std::uint64_t seed, int threads) {
            const Region U = region_or_cube(region, f.num_vars());
            return to_json(integrate_abs_log(f, p, U, {samples, j_max}, seed,
                                             threads))
                .dump();
        },
        py::arg("f"), py::arg("p"), py::arg("region") = "",
        py::arg("samples") = 200000, py::arg("j_max") = 24,
        py::arg("seed") = kDefaultSeed, py::arg("threads") = 0);

    m.def(
        "critical_exponent_json",
        [](const SparsePolynomial& f, double lo, double hi, double tol,
           const std::string& region, std::int64_t samples, int j_max,
           std::uint64_t seed, int threads) {
            const Region U = region_or_cube(region, f.num_vars());
            return to_json(critical_exponent(f, U, lo, hi, tol,
                                             {samples, j_max}, seed, threads))
                .dump();
        },
        py::arg("f"), py::arg("lo"), py::arg("hi"), py::arg("tol") = 0.1,
        py::arg("region") = "", py::arg("samples") = 200000,
        py::arg("j_max") = 24, py::arg("seed") = kDefaultSeed,
        py::arg("threads") = 0);

    m.def(
        "radial_blowup_json",
        [](const SparsePolynomial& f, const std::vector<double>& omega,
           double eps) {
            return to_json(radial_blowup_check(f, omega, eps)).dump();
        },
        py::arg("f"), py::arg("omega"), py::arg("eps") = 0.5);

    m.def(
        "exponent_report_json",
        [](const SparsePolynomial& f, const std::string& region,
           std::uint64_t seed) {
            const Region U = region_or_cube(region, f.num_vars());
            return to_json(exponent_inequality_report(f, U, ExponentBudget{},
                                                      seed))
                .dump();
        },
        py::arg("f"), py::arg("region") = "", py::arg("seed") = kDefaultSeed);

    m.def(
        "sample_zero_set",
        [](const SparsePolynomial& f, const std::string& region, int count,
           double residual_tol, std::uint64_t seed) {
            const Region U = region_or_cube(region, f.num_vars());
            return sample_zero_set(f, U, count, residual_tol, seed).points;
        },
        py::arg("f"), py::arg("region") = "", py::arg("count") = 1000,
        py::arg("residual_tol") = 1e-10, py::arg("seed") = kDefaultSeed);

    m.def(
        "run_suite_json",
        [](std::uint64_t seed, int threads) {
            const SuiteResult res = run_suite({seed, threads});
            nlohmann::json checks = nlohmann::json::array();
            for (const auto& ch : res.checks)
                checks.push_back({{"name", ch.name},
                                  {"passed", ch.passed},
                                  {"wall_s", ch.wall_s},
                                  {"detail", ch.detail}});
            nlohmann::json rows = nlohmann::json::array();
            for (const auto& row : res.rows) rows.push_back(row.to_json());
            return nlohmann::json{{"checks", std::move(checks)},
                                  {"rows", std::move(rows)},
                                  {"all_passed", res.all_passed()}}
                .dump();
        },
        py::arg("seed") = kDefaultSeed, py::arg("threads") = 0);
}
