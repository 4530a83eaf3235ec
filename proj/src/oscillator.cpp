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

#include "psieve/oscillator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "psieve/errors.hpp"

namespace psieve::oscillator {

namespace {

bool positive(double v) { return v > 0.0 && std::isfinite(v); }

void require_positive(double v, const char* name) {
  if (!positive(v)) throw InvalidArgument(std::string(name) + " must be positive and finite");
}

GaussianState from_factor(const double* p) {
  const double l11 = std::exp(p[0]);
  const double l21 = p[2];
  const double l22 = 0.5 * std::exp(p[1] * p[1] - p[0]);
  GaussianState g;
  g.dx2 = l11 * l11;
  g.sxp = l11 * l21;
  g.dp2 = l21 * l21 + l22 * l22;
  return g;
}

}  // namespace

void validate(const QbmParams& params) {
  require_positive(params.M, "M");
  require_positive(params.m, "m");
  require_positive(params.Omega, "Omega");
  require_positive(params.omega, "omega");
  if (params.N < 0) throw InvalidArgument("N must be >= 0");
}

double omega_tilde(const QbmParams& params) {
  validate(params);
  return std::sqrt(params.Omega * params.Omega + params.N * params.m / params.M * params.omega * params.omega);
}

TransformedModel transform_model(const QbmParams& params) {
  validate(params);
  TransformedModel out;
  out.M = params.M;
  out.omega_tilde = omega_tilde(params);
  out.stiffness = params.M * params.Omega * params.Omega + params.N * params.m * params.omega * params.omega;
  out.interaction_terms.push_back(
      {SystemFactor::Momentum, -1.0 / params.M, params.N, "sum_k p~_k"});
  out.interaction_terms.push_back(
      {SystemFactor::Position, params.m * params.omega * params.omega, params.N, "sum_k x~_k"});
  out.environment_description =
      "sum_k [p~_k^2/2m + m omega^2 x~_k^2/2 + U1(x~_k)] + (sum_k p~_k)^2/2M + sum_{k>j} U2(x~_k - x~_j)";
  return out;
}

void validate(const GaussianState& g) {
  if (!std::isfinite(g.x_mean) || !std::isfinite(g.p_mean) || !std::isfinite(g.sxp)) {
    throw InvalidArgument("GaussianState: non-finite moment");
  }
  if (!(g.dx2 >= 0.0) || !(g.dp2 >= 0.0) || !std::isfinite(g.dx2) || !std::isfinite(g.dp2)) {
    throw InvalidArgument("GaussianState: variances must be non-negative");
  }
  if (g.uncertainty() < 0.25 - 1e-12) {
    throw InvalidArgument("GaussianState: violates dx2 dp2 - sxp^2 >= 1/4");
  }
}

GaussianState gaussian_evolve(const GaussianState& g0, double M, double omega_t, double t, LinearDrive drive) {
  require_positive(M, "M");
  require_positive(omega_t, "omega_tilde");
  const double k = M * omega_t;
  const double c = std::cos(omega_t * t);
  const double s = std::sin(omega_t * t);

  // Linear terms shift the centre of the rotation only.
  const double x_eq = -drive.alpha / (M * omega_t * omega_t);
  const double p_eq = -M * drive.beta;
  const double x0 = g0.x_mean - x_eq;
  const double p0 = g0.p_mean - p_eq;

  GaussianState g;
  g.x_mean = x_eq + c * x0 + s / k * p0;
  g.p_mean = p_eq - k * s * x0 + c * p0;
  g.dx2 = c * c * g0.dx2 + 2.0 * c * s / k * g0.sxp + s * s / (k * k) * g0.dp2;
  g.dp2 = k * k * s * s * g0.dx2 - 2.0 * k * s * c * g0.sxp + c * c * g0.dp2;
  g.sxp = -k * s * c * g0.dx2 + (c * c - s * s) * g0.sxp + s * c / k * g0.dp2;
  return g;
}

PeriodIntegrals period_integrals(const GaussianState& g0, double M, double omega_t) {
  validate(g0);
  require_positive(M, "M");
  require_positive(omega_t, "omega_tilde");
  const double period = 2.0 * std::numbers::pi / omega_t;
  const double k2 = M * M * omega_t * omega_t;
  // cos^2 and sin^2 average to 1/2 over a period, sin cos and cos 2wt to 0.
  return {0.5 * (k2 * g0.dx2 + g0.dp2) * period, 0.5 * (g0.dx2 + g0.dp2 / k2) * period, 0.0};
}

double qbm_objective(const GaussianState& g0, Weights weights, double M, double omega_t) {
  if (!positive(weights.momentum) || !positive(weights.position)) {
    throw InvalidArgument("qbm_objective: weights must be positive");
  }
  const PeriodIntegrals ints = period_integrals(g0, M, omega_t);
  return weights.momentum * ints.Ip + weights.position * ints.Ix;
}

GaussianState qbm_pointer_state(double M, double omega_t) {
  require_positive(M, "M");
  require_positive(omega_t, "omega_tilde");
  GaussianState g;
  g.dx2 = 1.0 / (2.0 * M * omega_t);
  g.dp2 = 0.5 * M * omega_t;
  g.sxp = 0.0;
  return g;
}

QbmSieveResult qbm_sieve(double M, double omega_t, Weights weights, const OptimizerConfig& cfg) {
  require_positive(M, "M");
  require_positive(omega_t, "omega_tilde");
  if (!positive(weights.momentum) || !positive(weights.position)) {
    throw InvalidArgument("qbm_sieve: weights must be positive");
  }
  if (cfg.restarts < 1) throw InvalidArgument("qbm_sieve: restarts must be >= 1");

  // Same quantity as qbm_objective, without re-validating every trial state.
  const double period = 2.0 * std::numbers::pi / omega_t;
  const double k2 = M * M * omega_t * omega_t;
  const Objective objective = [&](std::span<const double> p) {
    const GaussianState g = from_factor(p.data());
    return 0.5 * period *
           (weights.momentum * (k2 * g.dx2 + g.dp2) + weights.position * (g.dx2 + g.dp2 / k2));
  };

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> log_scale(-3.0, 3.0);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  QbmSieveResult out;
  out.restarts = cfg.restarts;
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < cfg.restarts; ++r) {
    QbmRestart rec;
    rec.start = {log_scale(rng), unit(rng), unit(rng)};
    const LocalMinimum local = nelder_mead(objective, rec.start, cfg);
    rec.state = from_factor(local.x.data());
    rec.objective = qbm_objective(rec.state, weights, M, omega_t);
    rec.iterations = local.iterations;
    rec.converged = local.converged;
    if (rec.objective < best) {
      best = rec.objective;
      out.state = rec.state;
      out.objective = rec.objective;
      out.converged = rec.converged;
    }
    out.history.push_back(std::move(rec));
  }
  return out;
}

}  // namespace psieve::oscillator
