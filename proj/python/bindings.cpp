// Copyright 2026 The spinchain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spinchain/errors.hpp"
#include "spinchain/experiment.hpp"
#include "spinchain/lindblad.hpp"
#include "spinchain/meanfield.hpp"
#include "spinchain/observables.hpp"
#include "spinchain/spin_core.hpp"

namespace py = pybind11;
using namespace spinchain;

namespace {

Axis axis_of(const std::string& s) {
  if (s == "x") return Axis::x;
  if (s == "y") return Axis::y;
  if (s == "z") return Axis::z;
  throw py::value_error("axis must be 'x', 'y' or 'z'");
}

Sign sign_of(const std::string& s) {
  if (s == "+") return Sign::plus;
  if (s == "-") return Sign::minus;
  throw py::value_error("sign must be '+' or '-'");
}

ChainModel make_model(int n_sites, const Vec3& b, const Vec3& v, double gamma_total, double n_b,
                      double g_ratio, bool all_axes) {
  ChainModel m;
  m.n_sites = n_sites;
  m.b_field = b;
  m.couplings = v;
  apply_thermal_rates(m, {gamma_total, n_b, g_ratio, all_axes});
  m.validate();
  return m;
}

py::dict table_dict(const ResultTable& t) {
  py::dict d;
  d["label"] = t.label;
  d["header"] = t.header;
  d["row_labels"] = t.row_labels;
  d["rows"] = t.rows;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Open Heisenberg spin chains: mean-field and exact master-equation dynamics";

  // Translators run newest first, so the ConfigError check precedes Error.
  py::register_exception<Error>(m, "SolverError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<ChainModel>(m, "ChainModel")
      .def(py::init(&make_model), py::arg("n_sites"), py::arg("b_field"), py::arg("couplings"),
           py::arg("gamma_total") = 0.0, py::arg("n_b") = 0.08, py::arg("g_ratio") = 0.1,
           py::arg("all_axes") = false)
      .def_readwrite("n_sites", &ChainModel::n_sites)
      .def_readwrite("b_field", &ChainModel::b_field)
      .def_readwrite("couplings", &ChainModel::couplings)
      .def_readwrite("n_b", &ChainModel::n_b)
      .def("on_site_rate",
           [](const ChainModel& c, const std::string& a, const std::string& s) {
             return c.on_site_rates(axis_of(a), sign_of(s));
           })
      .def("neighbour_rate",
           [](const ChainModel& c, const std::string& a, const std::string& s) {
             return c.neighbour_rates(axis_of(a), sign_of(s));
           })
      .def("set_on_site_rate",
           [](ChainModel& c, const std::string& a, const std::string& s, double v) {
             c.on_site_rates(axis_of(a), sign_of(s)) = v;
           })
      .def("set_neighbour_rate",
           [](ChainModel& c, const std::string& a, const std::string& s, double v) {
             c.neighbour_rates(axis_of(a), sign_of(s)) = v;
           })
      .def("total_damping", &ChainModel::total_damping);

  m.def("pauli", [](const std::string& a) { return pauli(axis_of(a)); });
  m.def("jump_operator",
        [](const std::string& a, const std::string& s) { return jump_operator(axis_of(a), sign_of(s)); });
  m.def("hamiltonian", &build_hamiltonian);
  m.def("liouvillian",
        [](const ChainModel& model, int max_sites) { return build_liouvillian(model, max_sites).matrix; },
        py::arg("model"), py::arg("max_sites") = kDefaultMaxSites);
  m.def("product_state", [](const std::vector<Vec3>& f) { return product_state(f); });
  m.def("steady_state",
        [](const ChainModel& model) { return steady_state_linear(build_liouvillian(model)); });
  m.def("spectrum", [](const ChainModel& model) {
    const auto spec = spectral_decompose(build_liouvillian(model));
    return py::make_tuple(spec.eigenvalues, spec.condition_number);
  });
  m.def(
      "evolve",
      [](const ChainModel& model, const ComplexMatrix& rho0, double t_end, double dt, int stride) {
        const auto traj = evolve_rk4(build_liouvillian(model), rho0, t_end, dt, stride);
        return py::make_tuple(traj.times, traj.states);
      },
      py::arg("model"), py::arg("rho0"), py::arg("t_end"), py::arg("dt"), py::arg("stride") = 1);

  m.def("partial_trace", [](const ComplexMatrix& rho, int n, const std::vector<int>& keep) {
    return partial_trace(rho, n, keep);
  });
  m.def("magnetization", &magnetization);
  m.def("two_point_correlation",
        [](const ComplexMatrix& rho, int n, int i, int j, const std::string& a, const std::string& b) {
          return two_point_correlation(rho, n, i, j, axis_of(a), axis_of(b));
        });
  m.def("concurrence",
        [](const ComplexMatrix& rho, int n, int i, int j) { return concurrence(rho, n, i, j); });

  m.def(
      "ll_rhs",
      [](const Vec3& mvec, const ChainModel& model, double alpha, bool include_noise) {
        MeanFieldConfig c;
        c.model = model;
        c.damping = DampingMode::ll_alpha;
        c.alpha = alpha;
        return ll_rhs(mvec, c, include_noise);
      },
      py::arg("m"), py::arg("model"), py::arg("alpha"), py::arg("include_noise") = true);

  m.def("presets", [] {
    std::vector<std::string> ids;
    for (const auto& p : list_presets()) ids.push_back(p.id);
    return ids;
  });
  m.def("preset_config", [](const std::string& id) { return dump_config(expand_preset(id)); });
  m.def("normalize_config", [](const std::string& text) { return dump_config(parse_config(text)); });
  m.def("run_config", [](const std::string& text) {
    const ExperimentConfig c = parse_config(text);
    ExperimentResult r;
    {
      py::gil_scoped_release release;
      r = compute_experiment(c);
    }
    py::list tables;
    for (const auto& t : r.tables) tables.append(table_dict(t));
    py::dict out;
    out["tables"] = tables;
    out["summary"] = r.summary.dump();
    return out;
  });
}
