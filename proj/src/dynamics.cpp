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

#include "psieve/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace psieve {

namespace {

constexpr double kDropWeight = 1e-15;

void require_operator(const ComplexMatrix& m, Index dim, const std::string& what) {
  if (m.rows() != dim || m.cols() != dim) {
    throw DimensionError(what + " is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                         ", expected " + std::to_string(dim) + "x" + std::to_string(dim));
  }
  if (!is_hermitian(m)) throw InvalidArgument(what + " is not Hermitian");
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

FactorizedModel::FactorizedModel(ComplexMatrix hs, ComplexMatrix he, std::vector<InteractionTerm> terms,
                                 SpaceLayout layout)
    : hs_(std::move(hs)), he_(std::move(he)), terms_(std::move(terms)), layout_(std::move(layout)) {
  require_operator(hs_, layout_.system_dim(), "system Hamiltonian");
  require_operator(he_, layout_.environment_dim(), "environment Hamiltonian");
  for (std::size_t j = 0; j < terms_.size(); ++j) {
    require_operator(terms_[j].system, layout_.system_dim(), "system factor of term " + std::to_string(j));
    require_operator(terms_[j].environment, layout_.environment_dim(),
                     "environment factor of term " + std::to_string(j));
  }
}

ComplexMatrix assemble_total(const FactorizedModel& model) {
  const auto& layout = model.layout();
  ComplexMatrix h = join(model.system_hamiltonian(), identity(layout.environment_dim()), layout) +
                    join(identity(layout.system_dim()), model.environment_hamiltonian(), layout);
  for (const auto& term : model.terms()) h += join(term.system, term.environment, layout);
  return h;
}

// --- ProductTrajectory -----------------------------------------------------

ProductTrajectory::ProductTrajectory(const FactorizedModel& model, const Ket& psi_s0,
                                     const DensityMatrix& rho_e0)
    : model_(model) {
  const Index ds = model_.system_dim();
  const Index de = model_.environment_dim();
  if (psi_s0.dim() != ds) {
    throw DimensionError("initial system state has dimension " + std::to_string(psi_s0.dim()) +
                         ", system dimension " + std::to_string(ds));
  }
  if (rho_e0.dim() != de) {
    throw DimensionError("initial environment state has dimension " + std::to_string(rho_e0.dim()) +
                         ", environment dimension " + std::to_string(de));
  }

  const ComplexMatrix h = to_system_first(assemble_total(model_), model_.layout());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(h));
  eigenvalues_ = es.eigenvalues();
  eigenvectors_ = es.eigenvectors();

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> env(hermitian_part(rho_e0.matrix()));
  std::vector<Index> kept;
  for (Index k = de - 1; k >= 0; --k) {
    if (env.eigenvalues()(k) > kDropWeight) kept.push_back(k);
  }
  initial_columns_.resize(ds * de, static_cast<Index>(kept.size()));
  for (std::size_t c = 0; c < kept.size(); ++c) {
    const Index k = kept[c];
    const ComplexVector env_vec = std::sqrt(env.eigenvalues()(k)) * env.eigenvectors().col(k);
    for (Index a = 0; a < ds; ++a) {
      initial_columns_.col(static_cast<Index>(c)).segment(a * de, de) = psi_s0.amplitudes()(a) * env_vec;
    }
  }
  rotated_columns_ = eigenvectors_.adjoint() * initial_columns_;
}

ComplexMatrix ProductTrajectory::columns(double t) const {
  if (t == 0.0) return initial_columns_;
  const ComplexVector phases = (eigenvalues_.cast<Complex>() * Complex(0.0, -t)).array().exp();
  return eigenvectors_ * (phases.asDiagonal() * rotated_columns_);
}

DensityMatrix ProductTrajectory::state(double t) const {
  const ComplexMatrix x = columns(t);
  return DensityMatrix::unchecked(from_system_first(hermitian_part(x * x.adjoint()), model_.layout()));
}

DensityMatrix ProductTrajectory::system_state(double t) const {
  const Index ds = model_.system_dim();
  const Index de = model_.environment_dim();
  const ComplexMatrix x = columns(t);
  ComplexMatrix rho = ComplexMatrix::Zero(ds, ds);
  for (Index k = 0; k < x.cols(); ++k) {
    // Column k viewed as a de x ds matrix; its transpose maps E onto S.
    const Eigen::Map<const ComplexMatrix> block(x.col(k).data(), de, ds);
    rho.noalias() += block.transpose() * block.conjugate();
  }
  return DensityMatrix::unchecked(hermitian_part(rho));
}

DensityMatrix ProductTrajectory::environment_state(double t) const {
  const Index ds = model_.system_dim();
  const Index de = model_.environment_dim();
  const ComplexMatrix x = columns(t);
  const Eigen::Map<const ComplexMatrix> all(x.data(), de, ds * x.cols());
  return DensityMatrix::unchecked(hermitian_part(all * all.adjoint()));
}

ComplexMatrix ProductTrajectory::system_contraction(const ComplexMatrix& env_op, double t) const {
  const Index ds = model_.system_dim();
  const Index de = model_.environment_dim();
  if (env_op.rows() != de || env_op.cols() != de) {
    throw DimensionError("system_contraction: environment operator has wrong shape");
  }
  const ComplexMatrix x = columns(t);
  ComplexMatrix out = ComplexMatrix::Zero(ds, ds);
  for (Index k = 0; k < x.cols(); ++k) {
    const Eigen::Map<const ComplexMatrix> block(x.col(k).data(), de, ds);
    out.noalias() += block.transpose() * env_op.transpose() * block.conjugate();
  }
  return out;
}

DensityMatrix evolve_product(const FactorizedModel& model, const Ket& psi_s0, const DensityMatrix& rho_e0,
                             double t) {
  return ProductTrajectory(model, psi_s0, rho_e0).state(t);
}

// --- purity series ---------------------------------------------------------

PuritySeries purity_series(const FactorizedModel& model, const Ket& psi_s0, const DensityMatrix& rho_e0,
                           std::span<const double> times) {
  if (times.empty() || times.front() != 0.0) {
    throw InvalidArgument("purity_series: times must start at 0");
  }
  if (!std::is_sorted(times.begin(), times.end())) {
    throw InvalidArgument("purity_series: times must be ascending");
  }
  const ProductTrajectory traj(model, psi_s0, rho_e0);
  PuritySeries out;
  out.times.assign(times.begin(), times.end());
  out.values.reserve(times.size());
  out.pmax.reserve(times.size());
  for (double t : times) {
    const DensityMatrix rho_s = traj.system_state(t);
    out.values.push_back(purity(rho_s));
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho_s.matrix(), Eigen::EigenvaluesOnly);
    out.pmax.push_back(std::min(1.0, es.eigenvalues().maxCoeff()));
  }
  return out;
}

std::vector<double> uniform_times(double t_max, int samples) {
  if (samples < 2) throw InvalidArgument("uniform_times: need at least 2 samples");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw InvalidArgument("uniform_times: t_max must be positive");
  std::vector<double> times(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) times[i] = t_max * static_cast<double>(i) / static_cast<double>(samples - 1);
  times.back() = t_max;
  return times;
}

// --- Schmidt spectrum and power iteration ----------------------------------

SchmidtSpectrum schmidt_spectrum(const DensityMatrix& rho, double group_tol) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(rho.matrix()));
  const Index d = rho.dim();
  SchmidtSpectrum out;
  out.probs.reserve(d);
  // Eigen sorts ascending; walk from the top.
  for (Index i = d - 1; i >= 0;) {
    SchmidtComponent comp;
    comp.projector = ComplexMatrix::Zero(d, d);
    const double lead = es.eigenvalues()(i);
    double sum = 0.0;
    int count = 0;
    while (i >= 0 && lead - es.eigenvalues()(i) < group_tol) {
      const double p = std::max(0.0, es.eigenvalues()(i));
      out.probs.push_back(p);
      sum += p;
      comp.projector += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
      ++count;
      --i;
    }
    comp.prob = sum / count;
    comp.multiplicity = count;
    out.components.push_back(std::move(comp));
  }
  return out;
}

PointerEstimate pointer_power(const DensityMatrix& rho, int k) {
  if (k < 1) throw InvalidArgument("pointer_power: k must be >= 1");
  const ComplexMatrix& r = rho.matrix();
  // Renormalize every step so high powers neither underflow nor overflow.
  ComplexMatrix power = r / r.trace();
  for (int i = 1; i < k; ++i) {
    power = r * power;
    power = hermitian_part(power) / power.trace().real();
  }
  PointerEstimate out;
  out.k = k;
  out.pmax = (r * power).trace().real();
  out.projector = hermitian_part(power);

  if (rho.dim() >= 2) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(r), Eigen::EigenvaluesOnly);
    const Index d = rho.dim();
    out.degenerate = es.eigenvalues()(d - 1) - es.eigenvalues()(d - 2) < 1e-9;
  }
  return out;
}

// --- master equation -------------------------------------------------------

double master_equation_residual(const FactorizedModel& model, const Ket& psi_s0, const DensityMatrix& rho_e0,
                                double t, double h) {
  if (!(h > 0.0)) throw InvalidArgument("master_equation_residual: step must be positive");
  const ProductTrajectory traj(model, psi_s0, rho_e0);
  const ComplexMatrix forward = traj.system_state(t + h).matrix();
  const ComplexMatrix backward = traj.system_state(t - h).matrix();
  const ComplexMatrix derivative = (forward - backward) / (2.0 * h);

  const ComplexMatrix rho_s = traj.system_state(t).matrix();
  const Complex minus_i(0.0, -1.0);
  const ComplexMatrix& hs = model.system_hamiltonian();
  ComplexMatrix rhs = minus_i * (hs * rho_s - rho_s * hs);
  for (const auto& term : model.terms()) {
    const ComplexMatrix mean_field = traj.system_contraction(term.environment, t);
    rhs += minus_i * (term.system * mean_field - mean_field * term.system);
  }
  return max_abs(derivative - rhs);
}

}  // namespace psieve
