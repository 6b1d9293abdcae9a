#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pdk/errors.hpp"
#include "pdk/interpolation.hpp"
#include "pdk/io.hpp"
#include "pdk/kernels.hpp"
#include "pdk/verification.hpp"

namespace py = pybind11;
using namespace pdk;

namespace {

py::dict report_dict(const SuiteReport& r) {
  py::dict d;
  d["suite"] = r.suite;
  d["trials"] = r.trials;
  d["failures"] = r.failures;
  d["worst"] = r.worst;
  d["seed"] = r.seed;
  py::dict details;
  for (const auto& [k, v] : r.details) details[py::str(k)] = v;
  d["details"] = details;
  return d;
}

py::dict psd_dict(const PsdReport& r) {
  py::dict d;
  d["min_eigenvalue"] = r.min_eigenvalue;
  d["max_eigenvalue"] = r.max_eigenvalue;
  d["rank_estimate"] = r.rank_estimate;
  d["is_psd"] = r.is_psd;
  d["is_pd"] = r.is_pd;
  d["psd_tol"] = r.psd_tol;
  d["pd_tol"] = r.pd_tol;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Positive definite kernels on regular domains";

  static py::exception<NumericalError> numerical(m, "NumericalError", PyExc_RuntimeError);
  static py::exception<NotPositiveDefinite> not_pd(m, "NotPositiveDefinite", numerical.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const NotPositiveDefinite& e) {
      py::set_error(not_pd, e.what());
    } catch (const NumericalError& e) {
      py::set_error(numerical, e.what());
    }
  });

  py::class_<CoefficientSeries>(m, "CoefficientSeries")
      .def(py::init([](double lambda, std::vector<double> coeffs, const std::string& parity) {
             return CoefficientSeries(Lambda(lambda), std::move(coeffs), parse_parity(parity));
           }),
           py::arg("lambda_"), py::arg("coeffs"), py::arg("parity") = "any")
      .def_property_readonly("lambda_", [](const CoefficientSeries& s) { return s.lambda().value(); })
      .def_property_readonly("coeffs", &CoefficientSeries::coeffs)
      .def_property_readonly("parity", [](const CoefficientSeries& s) { return std::string(to_string(s.parity())); })
      .def("__call__", &CoefficientSeries::operator())
      .def("to_json", [](const CoefficientSeries& s) { return series_to_json(s).dump(); })
      .def_static("from_json", [](const std::string& text) { return series_from_json(nlohmann::json::parse(text)); });

  py::class_<DomainId>(m, "Domain")
      .def(py::init([](const std::string& spec) { return parse_domain(spec); }), py::arg("spec"))
      .def_property_readonly("spec", &DomainId::spec)
      .def_property_readonly("dim", &DomainId::dim)
      .def_property_readonly("sphere_dim", &DomainId::sphere_dim)
      .def_property_readonly("lambda_", [](const DomainId& d) { return d.lambda().value(); })
      .def_property_readonly("image_quadrant", &DomainId::image_quadrant)
      .def_property_readonly("requires_even", &DomainId::requires_even)
      .def("__eq__", [](const DomainId& a, const DomainId& b) { return a == b; })
      .def("__repr__", [](const DomainId& d) { return "Domain('" + d.spec() + "')"; });

  py::class_<DomainPoint>(m, "Point")
      .def(py::init<DomainId, std::vector<double>>(), py::arg("domain"), py::arg("coords"))
      .def_property_readonly("domain", &DomainPoint::domain)
      .def_property_readonly("coords", &DomainPoint::coords);

  py::class_<Interpolant>(m, "Interpolant")
      .def_property_readonly("weights", &Interpolant::weights)
      .def_property_readonly("centers", &Interpolant::centers)
      .def_property_readonly("condition_estimate",
                             [](const Interpolant& g) { return g.diagnostics().condition_estimate; })
      .def_property_readonly("residual_norm", [](const Interpolant& g) { return g.diagnostics().residual_norm; })
      .def("__call__", &Interpolant::operator());

  m.def("weight_normalization", [](double l) { return weight_normalization(Lambda(l)); });
  m.def("gegenbauer", [](double l, int n, double t) { return gegenbauer(Lambda(l), n, t); });
  m.def("gegenbauer_at_one", [](double l, int n) { return gegenbauer_at_one(Lambda(l), n); });
  m.def("gegenbauer_norm", [](double l, int n) { return gegenbauer_norm(Lambda(l), n); });
  m.def("zonal", [](double l, int n, double t) { return zonal(Lambda(l), n, t); });
  m.def("gauss_rule", [](double l, std::size_t n) {
    auto r = gauss_rule(Lambda(l), n);
    return py::make_tuple(r.nodes, r.weights);
  });
  m.def(
      "project_coefficients",
      [](const std::function<double(double)>& f, double l, int max_degree) {
        const Projection p = project_coefficients(f, Lambda(l), max_degree);
        return py::make_tuple(p.coeffs, p.negative_degrees);
      },
      py::arg("f"), py::arg("lambda_"), py::arg("max_degree"),
      "Returns (coefficients, negative_degrees).");
  m.def("series_eval", &series_eval);

  m.def("cos_distance", &cos_distance);
  m.def("distance", &distance);
  m.def("embed", [](const DomainPoint& p) { return embed(p).components(); });
  m.def("sample", &sample, py::arg("domain"), py::arg("n"), py::arg("seed"));

  m.def("kernel_matrix", [](const CoefficientSeries& s, const std::vector<DomainPoint>& pts) {
    return kernel_matrix(s, pts).entries;
  });
  m.def("psd_check", [](const Eigen::MatrixXd& k) {
    return psd_dict(psd_check(k, default_psd_tol(k), default_pd_tol(k)));
  });
  m.def("reproducing_kernel", [](const DomainId& d, int n, const DomainPoint& p, const DomainPoint& q,
                                 bool rho_free) {
    return reproducing_kernel(d, n, p, q, rho_free ? AdditionVariant::rho_free : AdditionVariant::distance_consistent);
  }, py::arg("domain"), py::arg("n"), py::arg("p"), py::arg("q"), py::arg("rho_free") = false);
  m.def("rank_bound", &rank_bound);

  m.def(
      "fit",
      [](const CoefficientSeries& s, const std::vector<DomainPoint>& pts, const std::vector<double>& values,
         double ridge) { return fit(s, pts, values, FitOptions{ridge}); },
      py::arg("series"), py::arg("points"), py::arg("values"), py::arg("ridge") = 0.0);
  m.def("evaluate", [](const Interpolant& g, const std::vector<DomainPoint>& pts) { return evaluate(g, pts); });

  m.def("verify_distance_preservation",
        [](const DomainId& d, std::size_t trials, std::uint64_t seed) {
          return report_dict(verify_distance_preservation(d, trials, seed));
        });
  m.def("verify_quadrant_integral_identity", [](int d, int n, std::size_t samples, std::uint64_t seed) {
    return report_dict(verify_quadrant_integral_identity(d, n, samples, seed));
  });
  m.def("verify_psd_sufficiency", [](const DomainId& d, const CoefficientSeries& s, std::size_t trials,
                                     std::size_t n_points, std::uint64_t seed) {
    return report_dict(verify_psd_sufficiency(d, s, trials, n_points, seed));
  });
  m.def(
      "verify_rank_collapse",
      [](const DomainId& d, int degree, std::uint64_t seed, std::optional<std::size_t> n_points) {
        return report_dict(verify_rank_collapse(d, degree, seed, n_points));
      },
      py::arg("domain"), py::arg("max_degree"), py::arg("seed"), py::arg("n_points") = py::none());
  m.def("verify_antipodal_failure", [](int d, const CoefficientSeries& s, std::uint64_t seed) {
    return report_dict(verify_antipodal_failure(d, s, seed));
  });
  m.def("verify_reproducing", [](int n, int mm, std::size_t samples, std::uint64_t seed) {
    return report_dict(verify_reproducing(n, mm, samples, seed));
  });
  m.def("compare_addition_variants", [](const DomainId& d, int n, std::size_t samples, std::uint64_t seed) {
    return report_dict(compare_addition_variants(d, n, samples, seed));
  });
}
