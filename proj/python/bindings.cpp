// Copyright 2026 The psieve Authors
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

#include "psieve/psieve.hpp"

namespace py = pybind11;
using namespace psieve;

namespace {

Part parse_part(const std::string& keep) {
  if (keep == "system") return Part::System;
  if (keep == "environment") return Part::Environment;
  throw InvalidArgument("keep must be 'system' or 'environment'");
}

Ket to_ket(const ComplexVector& v) { return Ket::normalized(v); }

StateChart chart_for(const FactorizedModel& model) {
  return model.system_dim() == 2 ? StateChart::bloch() : StateChart::full_sphere(model.system_dim());
}

py::dict sieve_dict(const SieveResult& r) {
  py::list history;
  for (const auto& rec : r.history) {
    history.append(py::dict(py::arg("start") = rec.start, py::arg("parameters") = rec.parameters,
                            py::arg("objective") = rec.objective, py::arg("iterations") = rec.iterations,
                            py::arg("converged") = rec.converged));
  }
  return py::dict(py::arg("state") = r.state.amplitudes(), py::arg("parameters") = r.parameters,
                  py::arg("objective") = r.objective, py::arg("converged") = r.converged,
                  py::arg("degenerate_manifold") = r.degenerate_manifold, py::arg("ambiguous") = r.ambiguous,
                  py::arg("restart_spread") = r.restart_spread, py::arg("time_spread") = r.time_spread,
                  py::arg("history") = history);
}

OptimizerConfig optimizer(int restarts, std::uint64_t seed) {
  OptimizerConfig cfg;
  cfg.restarts = restarts;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact open-system dynamics and pointer-state sieves.";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<UnsupportedModel>(m, "UnsupportedModel", base.ptr());

  // qcore
  m.def("kron", &kron, py::arg("a"), py::arg("b"));
  m.def(
      "embed",
      [](const ComplexMatrix& op, Index slot, std::vector<Index> dims) {
        return embed(op, slot, SpaceLayout(std::move(dims), {0}));
      },
      py::arg("op"), py::arg("slot"), py::arg("dims"));
  m.def(
      "partial_trace",
      [](const ComplexMatrix& rho, std::vector<Index> dims, std::vector<Index> system_slots, const std::string& keep) {
        const SpaceLayout layout(std::move(dims), std::move(system_slots));
        return partial_trace(DensityMatrix(rho), layout, parse_part(keep)).matrix();
      },
      py::arg("rho"), py::arg("dims"), py::arg("system_slots"), py::arg("keep") = "system");
  m.def("propagator", &propagator, py::arg("h"), py::arg("t"));
  m.def(
      "purity", [](const ComplexMatrix& rho) { return purity(DensityMatrix(rho)); }, py::arg("rho"));
  m.def(
      "mean_dispersion",
      [](const ComplexMatrix& op, const ComplexMatrix& state) {
        const MeanDispersion md = state.cols() == 1 ? mean_dispersion(op, to_ket(state.col(0)))
                                                    : mean_dispersion(op, DensityMatrix(state));
        return py::make_tuple(md.mean, md.disp2);
      },
      py::arg("op"), py::arg("state"));

  // dynamics
  py::class_<FactorizedModel>(m, "FactorizedModel")
      .def(py::init([](const ComplexMatrix& hs, const ComplexMatrix& he,
                       const std::vector<std::pair<ComplexMatrix, ComplexMatrix>>& terms, std::vector<Index> dims,
                       std::vector<Index> system_slots) {
             std::vector<InteractionTerm> list;
             for (const auto& [s, e] : terms) list.push_back({s, e});
             return FactorizedModel(hs, he, std::move(list), SpaceLayout(std::move(dims), std::move(system_slots)));
           }),
           py::arg("hs"), py::arg("he"), py::arg("terms"), py::arg("dims"), py::arg("system_slots"))
      .def_property_readonly("system_dim", &FactorizedModel::system_dim)
      .def_property_readonly("environment_dim", &FactorizedModel::environment_dim)
      .def_property_readonly("term_count", [](const FactorizedModel& f) { return f.terms().size(); })
      .def("assemble_total", &assemble_total);

  m.def(
      "central_spin_model",
      [](int n, double omega, double epsilon, const std::string& coupling) {
        if (coupling != "x" && coupling != "xy") throw InvalidArgument("coupling must be 'x' or 'xy'");
        return spin::central_spin_model(n, omega, epsilon, coupling == "x" ? spin::Coupling::XX : spin::Coupling::XXYY);
      },
      py::arg("n_bath") = 6, py::arg("omega") = 1.0, py::arg("epsilon") = 0.1, py::arg("coupling") = "x");
  m.def(
      "named_state", [](const std::string& name) { return spin::named_state(name).amplitudes(); }, py::arg("name"));
  m.def(
      "mixed_bath", [](int n) { return spin::mixed_bath(n).matrix(); }, py::arg("n_bath"));
  m.def(
      "x_polarized_bath", [](int n) { return spin::x_polarized_bath(n).matrix(); }, py::arg("n_bath"));

  m.def(
      "evolve_product",
      [](const FactorizedModel& model, const ComplexVector& psi, const ComplexMatrix& rho_e, double t) {
        return evolve_product(model, to_ket(psi), DensityMatrix(rho_e), t).matrix();
      },
      py::arg("model"), py::arg("psi"), py::arg("rho_e"), py::arg("t"));
  m.def(
      "purity_series",
      [](const FactorizedModel& model, const ComplexVector& psi, const ComplexMatrix& rho_e,
         const std::vector<double>& times) {
        PuritySeries s = purity_series(model, to_ket(psi), DensityMatrix(rho_e), times);
        return py::dict(py::arg("times") = s.times, py::arg("values") = s.values, py::arg("pmax") = s.pmax);
      },
      py::arg("model"), py::arg("psi"), py::arg("rho_e"), py::arg("times"));
  m.def("uniform_times", &uniform_times, py::arg("t_max"), py::arg("samples"));
  m.def(
      "schmidt_probabilities", [](const ComplexMatrix& rho) { return schmidt_spectrum(DensityMatrix(rho)).probs; },
      py::arg("rho"));
  m.def(
      "pointer_power",
      [](const ComplexMatrix& rho, int k) {
        const PointerEstimate e = pointer_power(DensityMatrix(rho), k);
        return py::dict(py::arg("projector") = e.projector, py::arg("pmax") = e.pmax,
                        py::arg("degenerate") = e.degenerate);
      },
      py::arg("rho"), py::arg("k"));
  m.def(
      "master_equation_residual",
      [](const FactorizedModel& model, const ComplexVector& psi, const ComplexMatrix& rho_e, double t, double h) {
        return master_equation_residual(model, to_ket(psi), DensityMatrix(rho_e), t, h);
      },
      py::arg("model"), py::arg("psi"), py::arg("rho_e"), py::arg("t"), py::arg("h") = 1e-3);

  // sieve
  m.def(
      "short_time_coefficient",
      [](const FactorizedModel& model, const ComplexVector& psi, const ComplexMatrix& rho_e) {
        return short_time_coefficient(model, to_ket(psi), DensityMatrix(rho_e));
      },
      py::arg("model"), py::arg("psi"), py::arg("rho_e"));
  m.def(
      "numeric_second_derivative",
      [](const FactorizedModel& model, const ComplexVector& psi, const ComplexMatrix& rho_e, double h) {
        const PurityDerivatives d = numeric_second_derivative(model, to_ket(psi), DensityMatrix(rho_e), h);
        return py::make_tuple(d.first, d.second);
      },
      py::arg("model"), py::arg("psi"), py::arg("rho_e"), py::arg("h") = 1e-3);
  m.def(
      "effective_hamiltonian",
      [](const FactorizedModel& model, const ComplexMatrix& rho_e) {
        const EffectiveHamiltonian e = effective_hamiltonian(model, DensityMatrix(rho_e));
        return py::make_tuple(e.h_eff, e.kappa);
      },
      py::arg("model"), py::arg("rho_e"));
  m.def(
      "dispersion_integral",
      [](const FactorizedModel& model, const ComplexVector& psi, const ComplexMatrix& rho_e, double t_final,
         int steps, const std::vector<double>& weights) {
        return dispersion_integral(model, to_ket(psi), DensityMatrix(rho_e), t_final, steps, weights);
      },
      py::arg("model"), py::arg("psi"), py::arg("rho_e"), py::arg("t_final"), py::arg("steps") = 64,
      py::arg("weights") = std::vector<double>{});
  m.def(
      "modified_sieve",
      [](const FactorizedModel& model, const ComplexMatrix& rho_e, double t_final, int restarts, std::uint64_t seed,
         const std::vector<double>& weights) {
        return sieve_dict(
            modified_sieve(model, DensityMatrix(rho_e), t_final, chart_for(model), optimizer(restarts, seed), weights));
      },
      py::arg("model"), py::arg("rho_e"), py::arg("t_final"), py::arg("restarts") = 8, py::arg("seed") = 0,
      py::arg("weights") = std::vector<double>{});
  m.def(
      "canonical_sieve",
      [](const FactorizedModel& model, const ComplexMatrix& rho_e, double t_star, int restarts, std::uint64_t seed) {
        return sieve_dict(
            canonical_sieve(model, DensityMatrix(rho_e), t_star, chart_for(model), optimizer(restarts, seed)));
      },
      py::arg("model"), py::arg("rho_e"), py::arg("t_star"), py::arg("restarts") = 8, py::arg("seed") = 0);

  // oscillator
  namespace osc = oscillator;
  py::class_<osc::GaussianState>(m, "GaussianState")
      .def(py::init([](double x_mean, double p_mean, double dx2, double dp2, double sxp) {
             return osc::GaussianState{x_mean, p_mean, dx2, dp2, sxp};
           }),
           py::arg("x_mean") = 0.0, py::arg("p_mean") = 0.0, py::arg("dx2") = 0.5, py::arg("dp2") = 0.5,
           py::arg("sxp") = 0.0)
      .def_readwrite("x_mean", &osc::GaussianState::x_mean)
      .def_readwrite("p_mean", &osc::GaussianState::p_mean)
      .def_readwrite("dx2", &osc::GaussianState::dx2)
      .def_readwrite("dp2", &osc::GaussianState::dp2)
      .def_readwrite("sxp", &osc::GaussianState::sxp)
      .def("uncertainty", &osc::GaussianState::uncertainty)
      .def("__repr__", [](const osc::GaussianState& g) {
        return "GaussianState(dx2=" + std::to_string(g.dx2) + ", dp2=" + std::to_string(g.dp2) +
               ", sxp=" + std::to_string(g.sxp) + ")";
      });

  m.def(
      "omega_tilde",
      [](double M, double m_bath, int N, double Omega, double omega) {
        return osc::omega_tilde({M, m_bath, N, Omega, omega});
      },
      py::arg("M"), py::arg("m"), py::arg("N"), py::arg("Omega"), py::arg("omega"));
  m.def(
      "gaussian_evolve",
      [](const osc::GaussianState& g, double M, double w, double t) { return osc::gaussian_evolve(g, M, w, t); },
      py::arg("g0"), py::arg("M"), py::arg("omega_tilde"), py::arg("t"));
  m.def(
      "period_integrals",
      [](const osc::GaussianState& g, double M, double w) {
        const osc::PeriodIntegrals I = osc::period_integrals(g, M, w);
        return py::make_tuple(I.Ip, I.Ix, I.Ixp);
      },
      py::arg("g0"), py::arg("M"), py::arg("omega_tilde"));
  m.def(
      "qbm_objective",
      [](const osc::GaussianState& g, double a, double b, double M, double w) {
        return osc::qbm_objective(g, {a, b}, M, w);
      },
      py::arg("g0"), py::arg("momentum_weight"), py::arg("position_weight"), py::arg("M"), py::arg("omega_tilde"));
  m.def("qbm_pointer_state", &osc::qbm_pointer_state, py::arg("M"), py::arg("omega_tilde"));
  m.def(
      "qbm_sieve",
      [](double M, double w, double a, double b, int restarts, std::uint64_t seed) {
        const osc::QbmSieveResult r = osc::qbm_sieve(M, w, {a, b}, optimizer(restarts, seed));
        return py::dict(py::arg("state") = r.state, py::arg("objective") = r.objective,
                        py::arg("converged") = r.converged);
      },
      py::arg("M"), py::arg("omega_tilde"), py::arg("momentum_weight") = 1.0, py::arg("position_weight") = 1.0,
      py::arg("restarts") = 8, py::arg("seed") = 0);
}
