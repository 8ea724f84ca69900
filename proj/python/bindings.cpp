#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>

#include "mcpdist/analytic.hpp"
#include "mcpdist/kernels.hpp"
#include "mcpdist/simulate.hpp"
#include "mcpdist/validate.hpp"

namespace py = pybind11;
using namespace mcpdist;

namespace {

SimulationConfig make_config(std::size_t n_samples, double r_max, std::uint64_t seed,
                             std::size_t workers, double reference_radius) {
  SimulationConfig c;
  c.n_samples = n_samples;
  c.r_max = r_max;
  c.seed = seed;
  c.workers = workers;
  c.reference_radius = reference_radius;
  return c;
}

AnalyticOptions tolerance(double rel_tol) {
  AnalyticOptions o;
  o.rel_tol = rel_tol;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Contact and nearest-neighbour distance CDFs of the Matern cluster process.";
  m.attr("__version__") = tool_version();

  py::register_exception<KernelDomainError>(m, "KernelDomainError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<SamplerResourceError>(m, "SamplerResourceError", PyExc_MemoryError);

  py::class_<MCPParams>(m, "MCPParams")
      .def(py::init<double, double, double>(), py::arg("lambda_p"), py::arg("m_bar"),
           py::arg("r_d"))
      .def_property_readonly("lambda_p", &MCPParams::lambda_p)
      .def_property_readonly("m_bar", &MCPParams::m_bar)
      .def_property_readonly("r_d", &MCPParams::r_d)
      .def("intensity", &MCPParams::intensity)
      .def("__repr__", [](const MCPParams& p) {
        return "MCPParams(lambda_p=" + py::repr(py::float_(p.lambda_p())).cast<std::string>() +
               ", m_bar=" + py::repr(py::float_(p.m_bar())).cast<std::string>() +
               ", r_d=" + py::repr(py::float_(p.r_d())).cast<std::string>() + ")";
      });

  m.def("chi1", py::overload_cast<double, double, double>(&chi1), py::arg("z"), py::arg("x"),
        py::arg("r_d"));
  m.def("chi2", py::overload_cast<double, double, double>(&chi2), py::arg("z"), py::arg("x"),
        py::arg("r_d"));
  m.def("chi3", py::overload_cast<double, double, double>(&chi3), py::arg("z"), py::arg("x"),
        py::arg("r_d"));
  m.def("lens_mass", &lens_mass, py::arg("r"), py::arg("x"), py::arg("r_d"));
  m.def("mu", &mu, py::arg("x0"), py::arg("r"), py::arg("r_d"));

  m.def("contact_cdf",
        [](const MCPParams& p, double r, double rel_tol) {
          return contact_cdf(p, r, tolerance(rel_tol));
        },
        py::arg("params"), py::arg("r"), py::arg("rel_tol") = 1e-8);
  m.def("nn_cdf",
        [](const MCPParams& p, double r, double rel_tol) {
          return nn_cdf(p, r, tolerance(rel_tol));
        },
        py::arg("params"), py::arg("r"), py::arg("rel_tol") = 1e-8);
  m.def("ppp_contact_cdf", &ppp_contact_cdf, py::arg("density"), py::arg("r"));
  m.def("cluster_size_pmf", &cluster_size_pmf, py::arg("m_bar"), py::arg("ell"));
  m.def("radial_grid", &radial_grid, py::arg("r_min"), py::arg("r_max"), py::arg("n"),
        py::arg("log_spaced") = false);

  m.def("cdf_curve",
        [](const MCPParams& p, const std::vector<double>& grid, double rel_tol,
           std::size_t workers) {
          const Distribution all[] = {Distribution::contact, Distribution::nearest_neighbor,
                                      Distribution::ppp_baseline};
          const CdfCurve c = cdf_curve(p, grid, all, tolerance(rel_tol), workers);
          py::dict d;
          d["r"] = c.grid;
          for (std::size_t i = 0; i < c.labels.size(); ++i) {
            d[py::str(std::string(to_string(c.labels[i])))] = c.values[i];
          }
          return d;
        },
        py::arg("params"), py::arg("grid"), py::arg("rel_tol") = 1e-8, py::arg("workers") = 1,
        "Dict of lists keyed r, contact, nearest_neighbor and ppp.");

  // Samplers return the sorted samples with censored draws as inf.
  auto samples = [](const EmpiricalCdf& e) {
    std::vector<double> v = e.sorted_samples;
    v.resize(e.n_total, std::numeric_limits<double>::infinity());
    return v;
  };
  m.def("sample_contact_distance",
        [samples](const MCPParams& p, std::size_t n, double r_max, std::uint64_t seed,
                  std::size_t workers) {
          return samples(sample_contact_distance(p, make_config(n, r_max, seed, workers, 0.0)));
        },
        py::arg("params"), py::arg("n_samples"), py::arg("r_max"), py::arg("seed") = 1,
        py::arg("workers") = 1, py::call_guard<py::gil_scoped_release>());
  m.def("sample_nn_distance_palm",
        [samples](const MCPParams& p, std::size_t n, double r_max, std::uint64_t seed,
                  std::size_t workers) {
          return samples(sample_nn_distance_palm(p, make_config(n, r_max, seed, workers, 0.0)));
        },
        py::arg("params"), py::arg("n_samples"), py::arg("r_max"), py::arg("seed") = 1,
        py::arg("workers") = 1, py::call_guard<py::gil_scoped_release>());
  m.def("sample_nn_distance_window",
        [samples](const MCPParams& p, std::size_t n, double r_max, std::uint64_t seed,
                  std::size_t workers, double reference_radius) {
          return samples(sample_nn_distance_window(
              p, make_config(n, r_max, seed, workers, reference_radius)));
        },
        py::arg("params"), py::arg("n_samples"), py::arg("r_max"), py::arg("seed") = 1,
        py::arg("workers") = 1, py::arg("reference_radius") = 0.0,
        py::call_guard<py::gil_scoped_release>());

  m.def("ks_statistic",
        [](std::vector<double> samples, double r_max, const std::string& which,
           const MCPParams& p) {
          const Distribution d = parse_distribution(which);
          const EmpiricalCdf e = make_empirical_cdf(std::move(samples), r_max);
          return ks_statistic(e, [&](double r) {
            switch (d) {
              case Distribution::contact: return contact_cdf(p, r);
              case Distribution::nearest_neighbor: return nn_cdf(p, r);
              case Distribution::ppp_baseline: break;
            }
            return ppp_contact_cdf(p.intensity(), r);
          });
        },
        py::arg("samples"), py::arg("r_max"), py::arg("which"), py::arg("params"),
        "KS distance of samples (censored at r_max) to the named analytic CDF.");
}
