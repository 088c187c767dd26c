#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "helmkit/bounds.hpp"
#include "helmkit/config.hpp"
#include "helmkit/dtn.hpp"
#include "helmkit/experiments.hpp"
#include "helmkit/mie.hpp"
#include "helmkit/raytrace.hpp"
#include "helmkit/types.hpp"

namespace py = pybind11;
using namespace helmkit;

namespace {

py::dict row_dict(const ConvergenceRow& r) {
  py::dict d;
  d["k"] = r.k;
  d["h_target"] = r.h_target;
  d["h"] = r.h;
  d["dofs"] = r.dofs;
  d["energy_error"] = r.energy_error;
  d["best_error"] = r.best_error;
  d["interpolation_error"] = r.interpolation_error;
  d["relative_l2_error"] = r.relative_l2_error;
  d["ratio"] = r.ratio;
  d["threshold_rhs"] = r.threshold_rhs;
  d["admissible"] = r.admissible;
  d["failed"] = r.failed;
  d["reference"] = r.reference;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Finite-element Helmholtz scattering with explicit mesh thresholds.";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<RunConfig>(m, "Config")
      .def(py::init<>())
      .def_static("from_file", &load_config, py::arg("path"))
      .def_static("from_text", &parse_config_text, py::arg("text"))
      .def("serialize", &RunConfig::serialize)
      .def("hash", &RunConfig::hash)
      .def_readwrite("seed", &RunConfig::seed)
      .def_property(
          "k", [](const RunConfig& c) { return c.wave.k; }, [](RunConfig& c, double k) { c.wave.k = k; })
      .def_property(
          "R", [](const RunConfig& c) { return c.geometry.R; }, [](RunConfig& c, double R) { c.geometry.R = R; })
      .def("__eq__", &RunConfig::operator==)
      .def("__repr__", [](const RunConfig& c) { return "<helmkit.Config " + c.hash() + ">"; });

  m.def(
      "volterra_discrete",
      [](double L, int n) {
        const auto v = volterra_discrete(L, n);
        return py::make_tuple(v.sigma, v.iterations, v.converged);
      },
      py::arg("L"), py::arg("n"), "(sigma, iterations, converged) for the n-point Volterra matrix.");

  m.def(
      "longest_ray_length",
      [](const RunConfig& c, double R, unsigned jobs) {
        py::gil_scoped_release release;
        const auto r = longest_ray_length(c.coefficient_field(), c.obstacle_shape(), c.geometry, R, c.ray_config(),
                                          Executor(jobs));
        return r.L;
      },
      py::arg("config"), py::arg("R"), py::arg("jobs") = 1);

  m.def("dtn_coefficients", [](double k, double R, int n_max) { return build_dtn(k, R, n_max).t; }, py::arg("k"),
        py::arg("R"), py::arg("n_max") = -1, "t_n for n = 0..n_max.");
  m.def("default_nmax", &default_nmax, py::arg("k"), py::arg("R"));

  m.def(
      "mesh_threshold",
      [](const std::string& ledger_json, double k, double h) {
        const auto r = mesh_threshold(ConstantsLedger::from_json(ledger_json), k, h);
        py::dict d;
        d["rhs"] = r.rhs;
        d["admissible"] = r.admissible;
        d["h_max"] = r.h_max;
        d["quasioptimality_constant"] = r.quasioptimality_constant;
        return d;
      },
      py::arg("ledger_json"), py::arg("k"), py::arg("h"));

  m.def(
      "quasimode_lower_bound",
      [](double L, double delta, double h) {
        const auto q = quasimode_lower_bound(L, delta, h);
        return py::make_tuple(q.ratio, q.bound);
      },
      py::arg("L"), py::arg("delta"), py::arg("h"), "(ratio, bound) of the 1-D transport quasimode.");

  m.def(
      "sound_soft_disk",
      [](double k, double a, double alpha, double x, double y) { return SoundSoftDisk(k, a, alpha).value(Vec2(x, y)); },
      py::arg("k"), py::arg("a"), py::arg("alpha"), py::arg("x"), py::arg("y"));

  m.def(
      "quasioptimality_study",
      [](const RunConfig& c, const std::vector<double>& k_list, const std::vector<double>& h_list,
         const std::string& ledger_json, unsigned jobs) {
        ConvergenceTable t;
        {
          py::gil_scoped_release release;
          t = quasioptimality_study(c.scene(), k_list, h_list, ConstantsLedger::from_json(ledger_json), c.incident_angle,
                                    Executor(jobs));
        }
        py::list rows;
        for (const auto& r : t.rows) rows.append(row_dict(r));
        return rows;
      },
      py::arg("config"), py::arg("k_list"), py::arg("h_list"), py::arg("ledger_json"), py::arg("jobs") = 1);
}
