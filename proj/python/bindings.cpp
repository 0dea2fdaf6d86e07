#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nsf/errors.hpp"
#include "nsf/io.hpp"

namespace py = pybind11;
using namespace nsf;

namespace {

py::dict as_dict(const ThermoEval& v) {
  py::dict d;
  d["p"] = v.p;
  d["e"] = v.e;
  d["s"] = v.s;
  d["p_rho"] = v.p_rho;
  d["p_theta"] = v.p_theta;
  d["e_rho"] = v.e_rho;
  d["e_theta"] = v.e_theta;
  d["s_rho"] = v.s_rho;
  d["s_theta"] = v.s_theta;
  return d;
}

py::array_t<double> interior(const ScalarField& f) {
  const Grid& g = f.grid();
  py::array_t<double> a(g.dim == 1 ? std::vector<py::ssize_t>{g.nx} : std::vector<py::ssize_t>{g.ny, g.nx});
  double* p = a.mutable_data();
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) *p++ = f(i, j);
  return a;
}

py::dict as_dict(const FieldSet& f) {
  py::dict d;
  d["t"] = f.t;
  d["rho"] = interior(f.rho);
  d["theta"] = interior(f.theta);
  py::list u;
  for (const auto& c : f.u.c) u.append(interior(c));
  d["u"] = u;
  return d;
}

ThermoModel model_from_config(const std::string& ini) { return make_thermo(parse_config(ini).model); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Compressible Navier-Stokes-Fourier toolkit";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<GateError>(m, "GateError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_IOError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

  py::class_<ThermoModel>(m, "ThermoModel")
      .def_static("perfect_gas", &ThermoModel::perfect_gas, py::arg("c_v"))
      .def_static(
          "molecular_radiation",
          [](const std::string& kernel, double a, double pbar) {
            if (kernel == "zero") return ThermoModel::molecular_radiation(MolecularKernel::zero(), a);
            if (kernel == "linear") return ThermoModel::molecular_radiation(MolecularKernel::linear(), a);
            if (kernel == "log_tail") return ThermoModel::molecular_radiation(MolecularKernel::log_tail(pbar), a);
            throw ConfigError("unknown kernel '" + kernel + "'");
          },
          py::arg("kernel"), py::arg("a"), py::arg("pbar") = 1.0)
      .def_static("from_config", &model_from_config, py::arg("ini"),
                  "Gate-checked model from the [model] section of an INI string.")
      .def_property_readonly("c_v", [](const ThermoModel& t) { return t.c_v; })
      .def_property_readonly("a", [](const ThermoModel& t) { return t.a; });

  m.def(
      "eval", [](const ThermoModel& t, double rho, double theta) { return as_dict(eval(t, {rho, theta})); },
      py::arg("model"), py::arg("rho"), py::arg("theta"));
  m.def(
      "gibbs_residual",
      [](const ThermoModel& t, double rho, double theta) {
        const GibbsResidual g = gibbs_residual(t, {rho, theta});
        return py::make_tuple(g.r_rho, g.r_theta);
      },
      py::arg("model"), py::arg("rho"), py::arg("theta"));
  m.def(
      "gibbs_suite", [](const ThermoModel& t, std::uint64_t n, std::uint64_t seed) { return to_json(gibbs_suite(t, n, seed)).dump(); },
      py::arg("model"), py::arg("samples") = 10000, py::arg("seed") = 0, "JSON report.");
  m.def(
      "ballistic_energy",
      [](const ThermoModel& t, double rho, double theta, double Theta) { return ballistic_energy(t, {rho, theta}, Theta); },
      py::arg("model"), py::arg("rho"), py::arg("theta"), py::arg("Theta"));
  m.def(
      "rel_energy_density",
      [](const ThermoModel& t, double rho, double theta, std::vector<double> u, double r, double T, std::vector<double> U) {
        if (u.size() != U.size()) throw DomainError("u and U differ in dimension");
        const Vec uu = Eigen::Map<const Vec>(u.data(), u.size()), UU = Eigen::Map<const Vec>(U.data(), U.size());
        return rel_energy_density(t, rho, theta, uu, StrongState{r, T, UU});
      },
      py::arg("model"), py::arg("rho"), py::arg("theta"), py::arg("u"), py::arg("rho_ref"), py::arg("theta_ref"),
      py::arg("u_ref"));

  m.def(
      "theorem_gate",
      [](int theorem, const std::string& ini) {
        const RunConfig c = parse_config(ini);
        const GateVerdict v = theorem_gate(theorem, c.model, c.transport);
        return py::make_tuple(v.accepted, v.reason);
      },
      py::arg("theorem"), py::arg("ini"), "(accepted, reason) for the [model] and [transport] sections.");

  m.def(
      "parse_config", [](const std::string& ini) { return to_json(parse_config(ini)).dump(); }, py::arg("ini"),
      "Effective configuration as JSON.");
  m.def(
      "simulate",
      [](const std::string& ini) {
        const RunConfig c = parse_config(ini);
        const Grid g = make_grid(c.grid);
        const BoundaryData bd = make_boundary(c.boundary);
        const Models md{make_thermo(c.model), make_transport(c.transport)};
        FieldSet init = decay_initial(g, c.experiment.rho0, c.boundary.theta, c.experiment.amp_u, c.experiment.amp_theta);
        sync_ghosts(init, bd, 0.0);
        Trajectory tr;
        {
          py::gil_scoped_release release;
          tr = simulate(init, make_solver_config(c.solver), md, bd);
        }
        const CsvTable t = totals_table(tr);
        py::dict series;
        for (size_t k = 0; k < t.header.size(); ++k) {
          py::array_t<double> col(static_cast<py::ssize_t>(t.rows.size()));
          for (size_t r = 0; r < t.rows.size(); ++r) col.mutable_at(r) = t.rows[r][k];
          series[py::str(t.header[k])] = col;
        }
        py::dict out;
        out["series"] = series;
        out["final"] = as_dict(tr.frames.back());
        out["steps"] = tr.steps;
        return out;
      },
      py::arg("ini"), "Decay run from an INI string; returns totals per snapshot and the final state.");
  m.def(
      "read_snapshot", [](const std::string& path) { return as_dict(read_snapshot(path)); }, py::arg("path"));
}
