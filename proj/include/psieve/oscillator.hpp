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

// Particle of mass M in a trap of frequency Omega, coupled to N particles of
// mass m in traps of frequency omega. After the change of variables
//   x~ = x,  x~_k = x_k - x,  p~ = p + sum_k p_k,  p~_k = p_k
// the system Hamiltonian is p~^2/2M + M Omega~^2 x~^2 / 2 with
//   Omega~^2 = Omega^2 + (N m / M) omega^2
// and the interaction is  -(p~/M) sum p~_k + m omega^2 x~ sum x~_k.
//
// Everything here works with the first and second moments of Gaussian
// states under the harmonic system Hamiltonian (hbar = 1).

#pragma once

#include <string>
#include <vector>

#include "psieve/optimize.hpp"

namespace psieve::oscillator {

struct QbmParams {
  double M = 1.0;
  double m = 1.0;
  int N = 0;
  double Omega = 1.0;
  double omega = 1.0;
};

/// Throws InvalidArgument for non-positive masses or frequencies or N < 0.
void validate(const QbmParams& params);

double omega_tilde(const QbmParams& params);

enum class SystemFactor { Momentum, Position };

struct TransformedTerm {
  SystemFactor factor;
  /// Prefactor of the system operator: -1/M for p~, m omega^2 for x~.
  double coefficient = 0.0;
  /// Number of bath coordinates in the environment sum.
  int bath_count = 0;
  std::string environment_factor;

  bool vanishes() const { return bath_count == 0; }
};

struct TransformedModel {
  double M = 1.0;
  double omega_tilde = 1.0;
  /// M Omega^2 + N m omega^2  (= M Omega~^2).
  double stiffness = 1.0;
  /// Always two entries: the p~-coupling and the x~-coupling.
  std::vector<TransformedTerm> interaction_terms;
  /// Descriptive only; never enters a computation.
  std::string environment_description;
};

TransformedModel transform_model(const QbmParams& params);

struct GaussianState {
  double x_mean = 0.0;
  double p_mean = 0.0;
  double dx2 = 0.5;
  double dp2 = 0.5;
  /// Symmetrized covariance <xp + px>/2 - <x><p>.
  double sxp = 0.0;

  /// dx2 dp2 - sxp^2; at least 1/4 for a physical state.
  double uncertainty() const { return dx2 * dp2 - sxp * sxp; }
};

/// Throws InvalidArgument if the uncertainty relation is violated beyond 1e-12
/// or a variance is negative.
void validate(const GaussianState& g);

/// Linear terms alpha x + beta p added to the system Hamiltonian, e.g. from a
/// nonzero mean-field shift kappa. They move the means only.
struct LinearDrive {
  double alpha = 0.0;
  double beta = 0.0;
};

/// Exact moment propagation under p^2/2M + M w^2 x^2/2 (+ drive).
GaussianState gaussian_evolve(const GaussianState& g0, double M, double omega_t, double t, LinearDrive drive = {});

struct PeriodIntegrals {
  /// int_0^T dp~^2 dt
  double Ip = 0.0;
  /// int_0^T dx~^2 dt
  double Ix = 0.0;
  /// int_0^T sxp dt
  double Ixp = 0.0;
};

/// Closed-form integrals over one period T = 2 pi / omega_t.
PeriodIntegrals period_integrals(const GaussianState& g0, double M, double omega_t);

struct Weights {
  double momentum = 1.0;
  double position = 1.0;
};

/// a Ip + b Ix. Throws InvalidArgument for non-positive weights.
double qbm_objective(const GaussianState& g0, Weights weights, double M, double omega_t);

/// Minimum-uncertainty state with dx2 = 1/(2 M omega_t).
GaussianState qbm_pointer_state(double M, double omega_t);

struct QbmRestart {
  std::vector<double> start;
  GaussianState state;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct QbmSieveResult {
  GaussianState state;
  double objective = 0.0;
  bool converged = false;
  int restarts = 0;
  std::vector<QbmRestart> history;
};

/// Minimizes qbm_objective over covariances with dx2 dp2 - sxp^2 >= 1/4.
///
/// The covariance is written as L L^T with L lower triangular,
///   L = [[e^u, 0], [c, e^{r^2 - u} / 2]],
/// so det = e^{2 r^2} / 4 >= 1/4 for every (u, r, c).
QbmSieveResult qbm_sieve(double M, double omega_t, Weights weights, const OptimizerConfig& cfg = {});

}  // namespace psieve::oscillator
