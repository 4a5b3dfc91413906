#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cli.hpp"
#include "trafficsym/catalog.hpp"
#include "trafficsym/entry_spec.hpp"
#include "trafficsym/error.hpp"
#include "trafficsym/lie.hpp"
#include "trafficsym/wavefront.hpp"

namespace py = pybind11;
using namespace trafficsym;

namespace {

lie::LieCoeffs coeffs(const std::array<double, 4>& w) { return lie::LieCoeffs{w}; }

py::dict report_dict(const VerifyReport& r) {
  py::dict d;
  d["status"] = status_name(r.status);
  d["analytic_partials"] = r.analytic;
  d["max_r1"] = r.max_r1;
  d["max_r2"] = r.max_r2;
  d["points"] = r.points;
  d["skipped"] = r.skipped;
  d["observed_order"] = r.observed_order;
  d["note"] = r.note;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bindings for the trafficsym C++ core";
  m.attr("__version__") = TRAFFICSYM_VERSION;

  // Translators run newest first, so the derived UsageError goes last.
  auto parse_error = py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<UsageError>(m, "UsageError", parse_error.ptr());
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  m.def("commutator", [](const std::array<double, 4>& a, const std::array<double, 4>& b) {
    return lie::commutator(coeffs(a), coeffs(b)).w;
  });
  m.def("killing_form", [](const std::array<double, 4>& a, const std::array<double, 4>& b) {
    return lie::killing_form(coeffs(a), coeffs(b));
  });
  m.def("adjoint_apply", [](const std::array<double, 4>& eps, const std::array<double, 4>& w) {
    return lie::adjoint_apply({eps[0], eps[1], eps[2], eps[3]}, coeffs(w)).w;
  }, py::arg("eps"), py::arg("w"));
  m.def("classify", [](const std::array<double, 4>& w) {
    const lie::Classification c = lie::classify_optimal(coeffs(w));
    py::dict d;
    d["family"] = lie::family_name(c.cls.family);
    d["b"] = c.cls.b;
    d["representative"] = c.cls.representative().w;
    d["eps"] = std::array<double, 4>{c.eps.eps1, c.eps.eps2, c.eps.eps3, c.eps.eps4};
    d["scale"] = c.scale;
    return d;
  });

  m.def("evaluate", [](const std::string& spec, double x, double t) {
    const StatePoint v = eval(parse_entry_spec(spec, std::nullopt, std::nullopt), x, t);
    return std::make_pair(v.rho, v.u);
  }, py::arg("entry"), py::arg("x"), py::arg("t"));

  m.def("verify", [](const std::string& spec, double tol) {
    const CatalogEntry e = parse_entry_spec(spec, std::nullopt, std::nullopt);
    py::dict d = report_dict(verify_entry(e, default_region(e), tol));
    d["entry"] = entry_id(e);
    return d;
  }, py::arg("entry"), py::arg("tol") = 1e-10);

  m.def("amplitude", [](const std::string& background, double pi0, double x0, double t0,
                        double t_end, int n) {
    const CatalogEntry e = parse_entry_spec(background, std::nullopt, std::nullopt);
    AmplitudeProblem p;
    p.background = make_sampler(e);
    p.A = e.model.A;
    p.x0 = x0;
    p.t0 = t0;
    p.pi0 = pi0;
    if (const auto* t1 = std::get_if<T1Params>(&e.kind)) p.t1_shift = t1->b;
    const AmplitudeSolution s = amplitude_quadrature(p, t_end, n);
    py::dict d;
    d["t"] = s.times;
    d["pi"] = s.pi;
    d["pi_c"] = s.pi_c;
    d["shock_time"] = s.shock_time;
    d["regime"] = regime_name(predicted_regime(pi0, s.pi_c));
    return d;
  }, py::arg("background"), py::arg("pi0"), py::arg("x0") = 0.0, py::arg("t0") = 1.0,
     py::arg("t_end") = 20.0, py::arg("n") = 2000);

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run_cli(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, "Runs one command line; returns (exit_code, stdout, stderr).");
}
