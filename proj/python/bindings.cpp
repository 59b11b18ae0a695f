// Copyright 2026 The cvqubit Authors
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

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cvqubit/commands.hpp"
#include "cvqubit/conditioning.hpp"
#include "cvqubit/config.hpp"
#include "cvqubit/errors.hpp"
#include "cvqubit/gaussian_core.hpp"
#include "cvqubit/squeezed_qubit.hpp"
#include "cvqubit/temporal_model.hpp"
#include "cvqubit/tomography.hpp"

namespace py = pybind11;
using namespace cvq;

namespace {

// Grid values as an (x, p) array.
Eigen::MatrixXd grid_array(const WignerGrid& grid) {
  Eigen::MatrixXd out(grid.x_axis.points, grid.p_axis.points);
  for (int i = 0; i < grid.x_axis.points; ++i) {
    for (int j = 0; j < grid.p_axis.points; ++j) out(i, j) = grid.at(i, j);
  }
  return out;
}

Eigen::MatrixXd map_array(const BlochMap& map) {
  Eigen::MatrixXd out(map.theta.size(), map.phi.size());
  for (std::size_t i = 0; i < map.theta.size(); ++i) {
    for (std::size_t j = 0; j < map.phi.size(); ++j) out(i, j) = map.at(i, j);
  }
  return out;
}

QuadratureDataset make_dataset(const std::vector<double>& phases,
                               const std::vector<double>& values) {
  if (phases.size() != values.size()) {
    fail(ErrorKind::kInvalidArgument, "phases and values differ in length");
  }
  QuadratureDataset data;
  for (std::size_t i = 0; i < phases.size(); ++i) {
    data.records.push_back({phases[i], values[i]});
    if (std::find(data.phases.begin(), data.phases.end(), phases[i]) == data.phases.end()) {
      data.phases.push_back(phases[i]);
    }
  }
  std::sort(data.phases.begin(), data.phases.end());
  data.source_tag = "python";
  return data;
}

CommandOptions command_options(std::optional<std::string> config, std::optional<std::string> out,
                               std::optional<std::uint64_t> seed, ParamOverrides params) {
  return {std::move(config), std::move(out), seed, std::move(params)};
}

}  // namespace

PYBIND11_MODULE(_cvqubit, m) {
  m.doc() = "Gaussian model of displaced photon subtraction and squeezed-qubit analysis";
  m.attr("__version__") = tool_version();

  py::exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const py::object type = py::module_::import("cvqubit._cvqubit").attr("Error");
      py::object exc = type(e.what());
      exc.attr("kind") = to_string(e.kind());
      PyErr_SetObject(type.ptr(), exc.ptr());
    }
  });

  py::class_<ExperimentParams>(m, "ExperimentParams")
      .def(py::init<>())
      .def_readwrite("gamma", &ExperimentParams::opo_bandwidth)
      .def_readwrite("epsilon", &ExperimentParams::pump_level)
      .def_readwrite("kappa", &ExperimentParams::filter_bandwidth)
      .def_readwrite("T_t", &ExperimentParams::tap_transmission)
      .def_readwrite("eta_A", &ExperimentParams::signal_efficiency)
      .def_readwrite("eta_B", &ExperimentParams::trigger_efficiency)
      .def_readwrite("R_sq", &ExperimentParams::squeezing_click_rate)
      .def_readwrite("R_disp", &ExperimentParams::displacement_click_rate)
      .def_readwrite("R_dc", &ExperimentParams::dark_count_rate)
      .def_readwrite("phi_disp", &ExperimentParams::displacement_angle)
      .def_readwrite("chi", &ExperimentParams::mode_matching)
      .def_property_readonly("click_ratio", &ExperimentParams::click_ratio)
      .def("validate", &ExperimentParams::validate);

  py::class_<GaussianState>(m, "GaussianState")
      .def(py::init<Eigen::MatrixXd, Eigen::VectorXd>(), py::arg("cov"), py::arg("disp"))
      .def_property_readonly("cov", &GaussianState::cov)
      .def_property_readonly("disp", &GaussianState::disp)
      .def_property_readonly("n_modes", &GaussianState::n_modes)
      .def("is_physical", &GaussianState::is_physical, py::arg("tol") = 1e-9);

  py::class_<GaussianComponent>(m, "GaussianComponent")
      .def_readonly("weight", &GaussianComponent::weight)
      .def_property_readonly("center",
                             [](const GaussianComponent& c) { return py::make_tuple(c.center.x, c.center.p); })
      .def_readonly("width_x", &GaussianComponent::width_x)
      .def_readonly("width_p", &GaussianComponent::width_p);

  py::class_<SignedGaussianMixture>(m, "SignedGaussianMixture")
      .def_property_readonly("components", &SignedGaussianMixture::components)
      .def("total_weight", &SignedGaussianMixture::total_weight)
      .def("__call__", [](const SignedGaussianMixture& s, double x, double p) { return s({x, p}); })
      .def("__len__", &SignedGaussianMixture::size);

  m.def("build_covariance", &build_covariance, py::arg("params"));
  m.def("displacement_vector", &displacement_vector, py::arg("params"), py::arg("state"));
  m.def("symplectic_eigenvalues", py::overload_cast<const GaussianState&>(&symplectic_eigenvalues));
  m.def("output_state", py::overload_cast<const ExperimentParams&>(&output_state), py::arg("params"));
  m.def("mixture_overlap", &mixture_overlap);
  m.def("mixture_purity", &mixture_purity);
  m.def(
      "wigner_grid",
      [](const SignedGaussianMixture& s, double half_width, int points) {
        const GridSpec axis{-half_width, half_width, points};
        return grid_array(tabulate(s, axis, axis));
      },
      py::arg("state"), py::arg("half_width") = 6.0, py::arg("points") = 241);

  m.def("ideal_theta_from_rates", &ideal_theta_from_rates, py::arg("ratio"));
  m.def("qubit_phase_from_displacement", &qubit_phase_from_displacement, py::arg("phi_disp"));
  m.def(
      "squeezed_qubit_fidelity",
      [](const SignedGaussianMixture& s, double r, double theta, double phi) {
        return fidelity({r, theta, phi}, s);
      },
      py::arg("state"), py::arg("r"), py::arg("theta"), py::arg("phi"));
  m.def(
      "cat_fidelity",
      [](const SignedGaussianMixture& s, double alpha, bool even) {
        return cat_fidelity(s, {alpha, even ? CatParity::kEven : CatParity::kOdd});
      },
      py::arg("state"), py::arg("alpha") = 1.0, py::arg("even") = true);
  m.def(
      "bloch_fidelity_map",
      [](const SignedGaussianMixture& s, double r, int n_theta, int n_phi) {
        const auto map = bloch_fidelity_map(s, r, n_theta, n_phi);
        py::dict out;
        out["theta"] = map.theta;
        out["phi"] = map.phi;
        out["values"] = map_array(map);
        out["theta_star"] = map.theta_star;
        out["phi_star"] = map.phi_star;
        out["f_star"] = map.f_star;
        return out;
      },
      py::arg("state"), py::arg("r") = 0.38, py::arg("n_theta") = 181, py::arg("n_phi") = 361);

  py::class_<SweepRow>(m, "SweepRow")
      .def_readonly("ratio", &SweepRow::ratio)
      .def_readonly("theta_ideal", &SweepRow::theta_ideal)
      .def_readonly("theta_model", &SweepRow::theta_model)
      .def_readonly("fidelity_at_target", &SweepRow::fidelity_at_target)
      .def_readonly("fidelity_max", &SweepRow::fidelity_max);
  m.def("sweep_point", &sweep_point, py::arg("params"), py::arg("ratio"), py::arg("phi_disp"),
        py::arg("r") = 0.38, py::arg("n_theta") = 46, py::arg("n_phi") = 91);

  m.def("uniform_phases", &uniform_phases, py::arg("count") = 12);
  m.def(
      "sample_quadratures",
      [](const SignedGaussianMixture& s, const std::vector<double>& phases, int n_per_phase,
         std::uint64_t seed) {
        const auto data = sample_quadratures(s, phases, n_per_phase, seed);
        std::vector<double> ph, val;
        for (const auto& r : data.records) {
          ph.push_back(r.phase);
          val.push_back(r.value);
        }
        return py::make_tuple(ph, val);
      },
      py::arg("state"), py::arg("phases"), py::arg("n_per_phase"), py::arg("seed"));
  m.def(
      "mle_reconstruct",
      [](const std::vector<double>& phases, const std::vector<double>& values, int n_max,
         int max_iters, double tol) {
        const auto result = mle_reconstruct(make_dataset(phases, values), n_max, max_iters, tol);
        py::dict out;
        out["rho"] = Eigen::MatrixXcd(result.rho.elements());
        out["log_likelihood"] = result.log_likelihood;
        out["iterations"] = result.iterations;
        out["converged"] = result.converged;
        return out;
      },
      py::arg("phases"), py::arg("values"), py::arg("n_max") = 10, py::arg("max_iters") = 2000,
      py::arg("tol") = 1e-10);
  m.def("density_from_mixture",
        [](const SignedGaussianMixture& s, int n_max) {
          return density_from_mixture(s, n_max, GridSpec{}, GridSpec{});
        },
        py::arg("state"), py::arg("n_max") = 10);
  m.def("uhlmann_fidelity", &uhlmann_fidelity, py::arg("rho"), py::arg("sigma"));

  m.def(
      "run_state",
      [](std::optional<std::string> config, std::optional<std::string> out,
         std::optional<std::uint64_t> seed, ParamOverrides params) {
        return cmd_state(command_options(config, out, seed, params));
      },
      py::arg("config") = py::none(), py::arg("out") = py::none(), py::arg("seed") = py::none(),
      py::arg("params") = ParamOverrides{});
  m.def(
      "run_sweep",
      [](std::optional<std::string> config, std::optional<std::string> out,
         std::optional<std::uint64_t> seed, ParamOverrides params) {
        return cmd_sweep(command_options(config, out, seed, params));
      },
      py::arg("config") = py::none(), py::arg("out") = py::none(), py::arg("seed") = py::none(),
      py::arg("params") = ParamOverrides{});
  m.def(
      "run_tomography",
      [](std::optional<std::string> config, std::optional<std::string> out,
         std::optional<std::uint64_t> seed, ParamOverrides params) {
        return cmd_tomography(command_options(config, out, seed, params));
      },
      py::arg("config") = py::none(), py::arg("out") = py::none(), py::arg("seed") = py::none(),
      py::arg("params") = ParamOverrides{});
}
