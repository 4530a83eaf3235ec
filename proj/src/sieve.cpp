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

#include "psieve/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

namespace psieve {

namespace {

void require_environment_state(const FactorizedModel& model, const DensityMatrix& rho_e) {
  if (rho_e.dim() != model.environment_dim()) {
    throw DimensionError("environment state has dimension " + std::to_string(rho_e.dim()) +
                         ", model environment dimension " + std::to_string(model.environment_dim()));
  }
}

double raw_purity(const DensityMatrix& rho) { return rho.matrix().squaredNorm(); }

double vector_dispersion(const ComplexMatrix& op, const ComplexVector& psi) {
  const ComplexVector op_psi = op * psi;
  const double norm2 = psi.squaredNorm();
  const double mean = psi.dot(op_psi).real() / norm2;
  return std::max(0.0, op_psi.squaredNorm() / norm2 - mean * mean);
}

std::vector<double> checked_weights(std::span<const double> weights, std::size_t n_terms) {
  if (weights.empty()) return std::vector<double>(n_terms, 1.0);
  if (weights.size() != n_terms) {
    throw InvalidArgument("expected " + std::to_string(n_terms) + " weights, got " + std::to_string(weights.size()));
  }
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("weights must be finite and non-negative");
  }
  return {weights.begin(), weights.end()};
}

/// rho_S(t*) as a function of the initial system state, for a fixed t*.
///
/// With rho_E = sum_k q_k |e_k><e_k|, the evolved state is a mixture of the
/// vectors U (psi (x) sqrt(q_k) e_k) = W_k psi, so every evaluation is a few
/// small matrix-vector products.
class PurityAtTime {
 public:
  PurityAtTime(const FactorizedModel& model, const DensityMatrix& rho_e, double t) {
    const Index ds = model.system_dim();
    const Index de = model.environment_dim();
    ds_ = ds;
    de_ = de;
    const ComplexMatrix u = SpectralPropagator(to_system_first(assemble_total(model), model.layout())).at(t);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> env(0.5 * (rho_e.matrix() + rho_e.matrix().adjoint()));
    for (Index k = 0; k < de; ++k) {
      const double q = env.eigenvalues()(k);
      if (q <= 1e-15) continue;
      const ComplexVector e = std::sqrt(q) * env.eigenvectors().col(k);
      ComplexMatrix w(ds * de, ds);
      for (Index a = 0; a < ds; ++a) {
        w.col(a) = u.middleCols(a * de, de) * e;
      }
      maps_.push_back(std::move(w));
    }
  }

  double operator()(const Ket& psi) const {
    ComplexMatrix rho = ComplexMatrix::Zero(ds_, ds_);
    for (const auto& w : maps_) {
      const ComplexVector v = w * psi.amplitudes();
      const Eigen::Map<const ComplexMatrix> block(v.data(), de_, ds_);
      rho.noalias() += block.transpose() * block.conjugate();
    }
    return std::min(1.0, rho.squaredNorm());
  }

 private:
  Index ds_ = 0;
  Index de_ = 0;
  std::vector<ComplexMatrix> maps_;
};

/// Multi-start minimization of `f` over the chart. Reported objectives are
/// report_sign * f.
SieveResult multistart(const std::function<double(const Ket&)>& f, const StateChart& chart,
                       const OptimizerConfig& cfg, SieveMode mode, double report_sign) {
  if (cfg.restarts < 1) throw InvalidArgument("optimizer: restarts must be >= 1");
  std::mt19937_64 rng(cfg.seed);
  const Objective in_chart = [&](std::span<const double> x) { return f(chart.to_ket(x)); };

  std::vector<RestartRecord> history;
  std::vector<Ket> optima;
  std::vector<double> minimized;
  for (int r = 0; r < cfg.restarts; ++r) {
    RestartRecord rec;
    rec.start = chart.random_parameters(rng);
    const LocalMinimum local = nelder_mead(in_chart, rec.start, cfg);
    const Ket optimum = chart.to_ket(local.x);
    rec.parameters = chart.from_ket(optimum);
    const double value = f(optimum);
    rec.objective = report_sign * value;
    rec.iterations = local.iterations;
    rec.converged = local.converged;
    history.push_back(std::move(rec));
    optima.push_back(optimum);
    minimized.push_back(value);
  }

  const auto best = static_cast<std::size_t>(std::min_element(minimized.begin(), minimized.end()) - minimized.begin());
  const double gap_tol = cfg.objective_tolerance * std::max(1.0, std::abs(minimized[best]));
  SieveResult out{.state = optima[best],
                  .parameters = history[best].parameters,
                  .objective = history[best].objective,
                  .mode = mode,
                  .restarts = cfg.restarts,
                  .converged = history[best].converged,
                  .history = {}};
  for (std::size_t r = 0; r < optima.size(); ++r) {
    const double distance = projective_distance(optima[r], optima[best]);
    out.restart_spread = std::max(out.restart_spread, distance);
    if (distance <= cfg.state_tolerance) continue;
    if (minimized[r] - minimized[best] <= gap_tol) {
      out.degenerate_manifold = true;
    } else {
      out.ambiguous = true;
    }
  }
  out.history = std::move(history);
  return out;
}

}  // namespace

// --- short-time law --------------------------------------------------------

double short_time_coefficient(const FactorizedModel& model, const Ket& psi_s, const DensityMatrix& rho_e) {
  if (model.terms().size() != 1) {
    throw UnsupportedModel("short_time_coefficient needs exactly one interaction term, model has " +
                           std::to_string(model.terms().size()) + "; use numeric_second_derivative instead");
  }
  require_environment_state(model, rho_e);
  const auto& term = model.terms().front();
  const double ds2 = mean_dispersion(term.system, psi_s).disp2;
  const double de2 = mean_dispersion(term.environment, rho_e).disp2;
  return 4.0 * de2 * ds2;
}

PurityDerivatives numeric_second_derivative(const FactorizedModel& model, const Ket& psi_s,
                                            const DensityMatrix& rho_e, double h) {
  if (!(h > 0.0 && h <= 0.1)) throw InvalidArgument("numeric_second_derivative: h must lie in (0, 0.1]");
  const ProductTrajectory traj(model, psi_s, rho_e);
  const double p0 = raw_purity(traj.system_state(0.0));
  const double plus = raw_purity(traj.system_state(h));
  const double minus = raw_purity(traj.system_state(-h));
  return {(plus - minus) / (2.0 * h), (plus - 2.0 * p0 + minus) / (h * h)};
}

// --- effective dynamics ----------------------------------------------------

EffectiveHamiltonian effective_hamiltonian(const FactorizedModel& model, const DensityMatrix& rho_e) {
  require_environment_state(model, rho_e);
  EffectiveHamiltonian out;
  out.h_eff = model.system_hamiltonian();
  for (const auto& term : model.terms()) {
    const double kappa = (term.environment * rho_e.matrix()).trace().real();
    out.kappa.push_back(kappa);
    out.h_eff += kappa * term.system;
  }
  return out;
}

DispersionObjective::DispersionObjective(const FactorizedModel& model, const DensityMatrix& rho_e,
                                         std::vector<double> weights)
    : effective_(effective_hamiltonian(model, rho_e)),
      propagator_(effective_.h_eff),
      weights_(checked_weights(weights, model.terms().size())) {
  for (const auto& term : model.terms()) system_factors_.push_back(term.system);
}

double DispersionObjective::dispersion_at(const Ket& psi0, double t) const {
  if (psi0.dim() != effective_.h_eff.rows()) throw DimensionError("dispersion: state has wrong dimension");
  const ComplexVector psi = propagator_.apply(psi0.amplitudes(), t);
  double total = 0.0;
  for (std::size_t j = 0; j < system_factors_.size(); ++j) {
    if (weights_[j] != 0.0) total += weights_[j] * vector_dispersion(system_factors_[j], psi);
  }
  return total;
}

QuadratureResult DispersionObjective::integrate(const Ket& psi0, double t_final, const QuadratureOptions& opts) const {
  if (!std::isfinite(t_final) || t_final < 0.0) throw InvalidArgument("dispersion_integral: t_final must be >= 0");
  if (opts.steps < 16) throw InvalidArgument("dispersion_integral: steps must be >= 16");
  int n = opts.steps + (opts.steps % 2);
  if (t_final == 0.0) return {0.0, n, true};

  std::vector<double> f(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) f[i] = dispersion_at(psi0, t_final * i / n);

  const auto simpson = [&](const std::vector<double>& g, int steps) {
    double odd = 0.0, even = 0.0;
    for (int i = 1; i < steps; ++i) (i % 2 ? odd : even) += g[i];
    return (t_final / steps) / 3.0 * (g.front() + 4.0 * odd + 2.0 * even + g.back());
  };

  double estimate = simpson(f, n);
  const double floor = 1e-14 * t_final;
  while (2 * n <= opts.max_steps) {
    std::vector<double> refined(static_cast<std::size_t>(2 * n) + 1);
    for (int i = 0; i <= n; ++i) refined[2 * i] = f[i];
    for (int i = 0; i < n; ++i) refined[2 * i + 1] = dispersion_at(psi0, t_final * (2 * i + 1) / (2 * n));
    f = std::move(refined);
    n *= 2;
    const double next = simpson(f, n);
    const bool agree = std::abs(next - estimate) <= opts.rel_tol * std::abs(next) + floor;
    estimate = next;
    if (agree) return {estimate, n, true};
  }
  return {estimate, n, false};
}

double dispersion_integral(const FactorizedModel& model, const Ket& psi_s0, const DensityMatrix& rho_e,
                           double t_final, int steps, std::span<const double> weights) {
  const DispersionObjective objective(model, rho_e, checked_weights(weights, model.terms().size()));
  return objective.integrate(psi_s0, t_final, QuadratureOptions{.steps = steps}).value;
}

// --- sieves ----------------------------------------------------------------

SieveResult canonical_sieve(const FactorizedModel& model, const DensityMatrix& rho_e, double t_star,
                            const StateChart& chart, const OptimizerConfig& cfg) {
  if (!(t_star > 0.0) || !std::isfinite(t_star)) throw InvalidArgument("canonical_sieve: t_star must be positive");
  if (chart.dim() != model.system_dim()) throw DimensionError("canonical_sieve: chart dimension != system dimension");
  require_environment_state(model, rho_e);
  const auto search = [&](double t) {
    const PurityAtTime purity_at(model, rho_e, t);
    return multistart([&](const Ket& psi) { return -purity_at(psi); }, chart, cfg, SieveMode::Canonical, -1.0);
  };
  SieveResult out = search(t_star);
  if (cfg.stability_window <= 0.0) return out;

  // Optima equivalent to the best one (symmetry partners, flat directions).
  std::vector<Ket> equivalent;
  const double gap_tol = cfg.objective_tolerance * std::max(1.0, std::abs(out.objective));
  for (const auto& rec : out.history) {
    if (out.objective - rec.objective <= gap_tol) equivalent.push_back(chart.to_ket(rec.parameters));
  }
  for (double factor : {1.0 - cfg.stability_window, 1.0 + cfg.stability_window}) {
    if (!(t_star * factor > 0.0)) continue;
    const SieveResult probe = search(t_star * factor);
    double nearest = 1.0;
    for (const auto& psi : equivalent) nearest = std::min(nearest, projective_distance(probe.state, psi));
    out.time_spread = std::max(out.time_spread, nearest);
  }
  if (out.time_spread > cfg.ambiguity_tolerance) out.ambiguous = true;
  return out;
}

SieveResult modified_sieve(const FactorizedModel& model, const DensityMatrix& rho_e, double t_final,
                           const StateChart& chart, const OptimizerConfig& cfg, std::span<const double> weights) {
  if (!(t_final > 0.0) || !std::isfinite(t_final)) throw InvalidArgument("modified_sieve: t_final must be positive");
  if (chart.dim() != model.system_dim()) throw DimensionError("modified_sieve: chart dimension != system dimension");
  const DispersionObjective objective(model, rho_e, checked_weights(weights, model.terms().size()));
  return multistart([&](const Ket& psi) { return objective.integrate(psi, t_final).value; }, chart, cfg,
                    SieveMode::Modified, 1.0);
}

double default_sieve_time(const FactorizedModel& model) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(model.system_hamiltonian(), Eigen::EigenvaluesOnly);
  const double gap = es.eigenvalues().maxCoeff() - es.eigenvalues().minCoeff();
  if (!(gap > 1e-12)) throw InvalidArgument("default_sieve_time: system Hamiltonian has no nonzero frequency");
  return 2.0 * std::numbers::pi / gap;
}

}  // namespace psieve
