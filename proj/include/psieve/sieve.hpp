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

// Pointer-state selection for factorized interactions.
//
// Two criteria are provided:
//   * the canonical purity sieve: maximize tr(rho_S(t*)^2) over pure initial
//     system states, using exact evolution of the combined system;
//   * the modified sieve: minimize  int_0^T  <s^2> - <s>^2  dt  along the
//     mean-field trajectory  i d/dt psi = (H_S + sum_j kappa_j s_j) psi,
//     kappa_j = tr(e_j rho_E).
//
// For a single term s (x) e the purity starts as
//   P(t) = 1 - 2 dE^2 dS^2 t^2 + O(t^3),
// see short_time_coefficient().

#pragma once

#include <span>
#include <vector>

#include "psieve/chart.hpp"
#include "psieve/dynamics.hpp"
#include "psieve/optimize.hpp"

namespace psieve {

/// c = 4 dE^2 dS^2 with d^2P/dt^2(0) = -c. Throws UnsupportedModel unless the
/// model has exactly one interaction term; use numeric_second_derivative()
/// for multi-term models.
double short_time_coefficient(const FactorizedModel& model, const Ket& psi_s, const DensityMatrix& rho_e);

struct PurityDerivatives {
  double first = 0.0;
  double second = 0.0;
};

/// Central differences of the exact P(t) at t = 0 with step h in (0, 0.1].
PurityDerivatives numeric_second_derivative(const FactorizedModel& model, const Ket& psi_s,
                                            const DensityMatrix& rho_e, double h = 1e-3);

struct EffectiveHamiltonian {
  ComplexMatrix h_eff;
  std::vector<double> kappa;
};

EffectiveHamiltonian effective_hamiltonian(const FactorizedModel& model, const DensityMatrix& rho_e);

/// Composite Simpson rule on a uniform grid, doubling the step count until
/// successive estimates agree.
struct QuadratureOptions {
  /// Initial step count; must be >= 16. Odd counts are rounded up.
  int steps = 64;
  double rel_tol = 1e-8;
  int max_steps = 1 << 16;
};

struct QuadratureResult {
  double value = 0.0;
  int steps = 0;
  bool converged = false;
};

/// Weighted sum of time-integrated interaction dispersions under the
/// effective Hamiltonian. Precomputes the spectral decomposition once so it
/// can be evaluated many times inside an optimizer.
class DispersionObjective {
 public:
  /// Empty weights means weight 1 for every term. Weights must be non-negative.
  DispersionObjective(const FactorizedModel& model, const DensityMatrix& rho_e, std::vector<double> weights = {});

  /// Instantaneous weighted dispersion sum_j w_j (<s_j^2> - <s_j>^2) at psi(t).
  double dispersion_at(const Ket& psi0, double t) const;
  QuadratureResult integrate(const Ket& psi0, double t_final, const QuadratureOptions& opts = {}) const;

  const EffectiveHamiltonian& effective() const { return effective_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  EffectiveHamiltonian effective_;
  SpectralPropagator propagator_;
  std::vector<ComplexMatrix> system_factors_;
  std::vector<double> weights_;
};

/// int_0^t_final  sum_j w_j dS_j^2(t') dt'.  Throws InvalidArgument on
/// negative t_final or steps < 16.
double dispersion_integral(const FactorizedModel& model, const Ket& psi_s0, const DensityMatrix& rho_e,
                           double t_final, int steps = 64, std::span<const double> weights = {});

enum class SieveMode { Canonical, Modified };

struct RestartRecord {
  std::vector<double> start;
  /// Optimum, folded into the chart's canonical ranges.
  std::vector<double> parameters;
  /// Purity for Canonical, dispersion integral for Modified.
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct SieveResult {
  Ket state;
  std::vector<double> parameters;
  double objective = 0.0;
  SieveMode mode = SieveMode::Modified;
  int restarts = 0;
  bool converged = false;
  std::vector<RestartRecord> history;
  /// Distinct restart optima share the best objective (flat direction or
  /// symmetry-related family of optima).
  bool degenerate_manifold = false;
  /// No stable optimum: restarts end on distinct states with different
  /// objective values, or (canonical sieve) the maximizer moves by more than
  /// ambiguity_tolerance when t_star is shifted within the stability window.
  bool ambiguous = false;
  /// Largest projective distance between any restart optimum and the best one.
  double restart_spread = 0.0;
  /// Canonical sieve: largest distance between a probe-time maximizer and the
  /// nearest equivalent optimum at t_star. Zero when not probed.
  double time_spread = 0.0;
};

/// Maximizes the purity of rho_S(t_star) over the chart. Unless
/// cfg.stability_window is 0, the search is repeated at
/// t_star * (1 -/+ window) to measure how far the maximizer drifts.
SieveResult canonical_sieve(const FactorizedModel& model, const DensityMatrix& rho_e, double t_star,
                            const StateChart& chart, const OptimizerConfig& cfg = {});

/// Minimizes the dispersion integral over [0, t_final].
SieveResult modified_sieve(const FactorizedModel& model, const DensityMatrix& rho_e, double t_final,
                           const StateChart& chart, const OptimizerConfig& cfg = {},
                           std::span<const double> weights = {});

/// One period 2 pi / (E_max - E_min) of the system Hamiltonian.
double default_sieve_time(const FactorizedModel& model);

}  // namespace psieve
