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

// Exact unitary evolution of a system coupled to a finite environment
// through factorized interaction terms  V = sum_j s_j (x) e_j.

#pragma once

#include <span>
#include <vector>

#include "psieve/qcore.hpp"

namespace psieve {

/// One factorized interaction term s (x) e. Coupling constants live in the
/// environment factor, so `system` is dimensionless.
struct InteractionTerm {
  ComplexMatrix system;
  ComplexMatrix environment;
};

/// H = H_S (x) 1 + 1 (x) H_E + sum_j s_j (x) e_j on a SpaceLayout.
class FactorizedModel {
 public:
  /// Validates shapes against the layout and Hermiticity of every operator.
  FactorizedModel(ComplexMatrix hs, ComplexMatrix he, std::vector<InteractionTerm> terms, SpaceLayout layout);

  const ComplexMatrix& system_hamiltonian() const { return hs_; }
  const ComplexMatrix& environment_hamiltonian() const { return he_; }
  const std::vector<InteractionTerm>& terms() const { return terms_; }
  const SpaceLayout& layout() const { return layout_; }

  Index system_dim() const { return layout_.system_dim(); }
  Index environment_dim() const { return layout_.environment_dim(); }

 private:
  ComplexMatrix hs_;
  ComplexMatrix he_;
  std::vector<InteractionTerm> terms_;
  SpaceLayout layout_;
};

ComplexMatrix assemble_total(const FactorizedModel& model);

/// Evolution of the product state |psi_S><psi_S| (x) rho_E.
///
/// The initial state is stored as a set of columns X0 with rho(0) = X0 X0^dagger
/// (one column per eigenvector of rho_E with nonzero weight), in system-first
/// ordering, pre-rotated into the eigenbasis of H. Every sample time then
/// costs one d x d x r product.
class ProductTrajectory {
 public:
  ProductTrajectory(const FactorizedModel& model, const Ket& psi_s0, const DensityMatrix& rho_e0);

  /// Full state in layout ordering.
  DensityMatrix state(double t) const;
  DensityMatrix system_state(double t) const;
  DensityMatrix environment_state(double t) const;
  /// tr_E((1 (x) e) rho(t)) for an operator e on the environment.
  ComplexMatrix system_contraction(const ComplexMatrix& env_op, double t) const;

  const FactorizedModel& model() const { return model_; }

 private:
  /// X(t) in system-first ordering.
  ComplexMatrix columns(double t) const;

  FactorizedModel model_;
  RealVector eigenvalues_;
  ComplexMatrix eigenvectors_;  // system-first ordering
  ComplexMatrix initial_columns_;
  ComplexMatrix rotated_columns_;  // eigenvectors^dagger * initial_columns
};

DensityMatrix evolve_product(const FactorizedModel& model, const Ket& psi_s0, const DensityMatrix& rho_e0,
                             double t);

struct PuritySeries {
  std::vector<double> times;
  std::vector<double> values;
  /// Exact largest eigenvalue of rho_S(t).
  std::vector<double> pmax;
};

/// Throws InvalidArgument unless times is ascending and starts at 0.
PuritySeries purity_series(const FactorizedModel& model, const Ket& psi_s0, const DensityMatrix& rho_e0,
                           std::span<const double> times);

struct SchmidtComponent {
  double prob = 0.0;
  int multiplicity = 1;
  /// Projector onto the eigenspace (rank = multiplicity).
  ComplexMatrix projector;
};

struct SchmidtSpectrum {
  /// All eigenvalues, descending, clamped at 0.
  std::vector<double> probs;
  /// Eigenspaces, eigenvalues grouped within group_tol.
  std::vector<SchmidtComponent> components;
};

SchmidtSpectrum schmidt_spectrum(const DensityMatrix& rho, double group_tol = 1e-9);

struct PointerEstimate {
  /// rho^k / tr rho^k
  ComplexMatrix projector;
  /// tr rho^{k+1} / tr rho^k
  double pmax = 0.0;
  int k = 1;
  /// Top two exact eigenvalues closer than 1e-9.
  bool degenerate = false;
};

PointerEstimate pointer_power(const DensityMatrix& rho, int k);

/// Max-norm mismatch between a central-difference derivative of rho_S(t) and
/// the right-hand side  -i[H_S, rho_S] - i sum_j [s_j, tr_E((1 (x) e_j) rho)].
double master_equation_residual(const FactorizedModel& model, const Ket& psi_s0, const DensityMatrix& rho_e0,
                                double t, double h = 1e-3);

/// Uniform grid of `samples` points on [0, t_max], both ends included.
std::vector<double> uniform_times(double t_max, int samples);

}  // namespace psieve
