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

#include "psieve/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

namespace psieve {

namespace {

std::string shape(const ComplexMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw DimensionError(std::string(what) + " must be square, got " + shape(m));
  }
}

}  // namespace

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= tol;
}

ComplexMatrix identity(Index dim) { return ComplexMatrix::Identity(dim, dim); }

// --- Ket -------------------------------------------------------------------

Ket::Ket(ComplexVector amplitudes, const Tolerances& tol) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) throw InvalidArgument("Ket: empty amplitude vector");
  const double norm = amplitudes_.norm();
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > tol.ket_norm) {
    throw InvalidArgument("Ket: amplitudes not normalized (norm = " + std::to_string(norm) + ")");
  }
}

Ket Ket::normalized(const ComplexVector& v) {
  const double norm = v.norm();
  if (v.size() == 0 || !(norm > 0.0) || !std::isfinite(norm)) {
    throw InvalidArgument("Ket::normalized: zero or non-finite vector");
  }
  return Ket(v / norm, Trusted{});
}

Ket Ket::basis(Index dim, Index k) {
  if (dim <= 0 || k < 0 || k >= dim) throw InvalidArgument("Ket::basis: index out of range");
  ComplexVector v = ComplexVector::Zero(dim);
  v(k) = 1.0;
  return Ket(std::move(v), Trusted{});
}

// --- DensityMatrix ---------------------------------------------------------

DensityMatrix::DensityMatrix(ComplexMatrix matrix, const Tolerances& tol) : matrix_(std::move(matrix)) {
  require_square(matrix_, "DensityMatrix");
  if (matrix_.rows() == 0) throw InvalidArgument("DensityMatrix: empty matrix");
  if (!matrix_.allFinite()) throw InvalidArgument("DensityMatrix: non-finite entries");
  if (max_abs(matrix_ - matrix_.adjoint()) > tol.density_hermitian) {
    throw InvalidArgument("DensityMatrix: not Hermitian");
  }
  const Complex tr = matrix_.trace();
  if (std::abs(tr - 1.0) > tol.density_trace) {
    throw InvalidArgument("DensityMatrix: trace " + std::to_string(tr.real()) + " != 1");
  }
  const ComplexMatrix herm = 0.5 * (matrix_ + matrix_.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol.negative_eigenvalue) {
    throw InvalidArgument("DensityMatrix: negative eigenvalue " +
                          std::to_string(es.eigenvalues().minCoeff()));
  }
}

DensityMatrix DensityMatrix::from_ket(const Ket& psi) { return DensityMatrix(psi.projector(), Trusted{}); }

DensityMatrix DensityMatrix::maximally_mixed(Index dim) {
  if (dim <= 0) throw InvalidArgument("maximally_mixed: dimension must be positive");
  return DensityMatrix(identity(dim) / static_cast<double>(dim), Trusted{});
}

DensityMatrix DensityMatrix::product(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix(kron(a.matrix(), b.matrix()), Trusted{});
}

DensityMatrix DensityMatrix::unchecked(ComplexMatrix matrix) {
  return DensityMatrix(std::move(matrix), Trusted{});
}

// --- SpaceLayout -----------------------------------------------------------

SpaceLayout::SpaceLayout(std::vector<Index> dims, std::vector<Index> system_slots)
    : dims_(std::move(dims)), system_slots_(std::move(system_slots)) {
  if (dims_.empty()) throw InvalidArgument("SpaceLayout: no factors");
  for (Index d : dims_) {
    if (d <= 0) throw InvalidArgument("SpaceLayout: factor dimensions must be positive");
  }
  std::sort(system_slots_.begin(), system_slots_.end());
  system_slots_.erase(std::unique(system_slots_.begin(), system_slots_.end()), system_slots_.end());
  const auto n = static_cast<Index>(dims_.size());
  if (system_slots_.empty() || static_cast<Index>(system_slots_.size()) >= n) {
    throw InvalidArgument("SpaceLayout: system slots must be a non-empty strict subset of the factors");
  }
  for (Index s : system_slots_) {
    if (s < 0 || s >= n) throw InvalidArgument("SpaceLayout: system slot out of range");
  }
  for (Index s = 0; s < n; ++s) {
    if (!std::binary_search(system_slots_.begin(), system_slots_.end(), s)) environment_slots_.push_back(s);
  }
  for (Index d : dims_) total_dim_ *= d;
  for (Index s : system_slots_) system_dim_ *= dims_[s];

  // Strides of every slot in layout and in system-first ordering.
  std::vector<Index> layout_stride(n), sf_stride(n);
  Index stride = 1;
  for (Index s = n - 1; s >= 0; --s) {
    layout_stride[s] = stride;
    stride *= dims_[s];
  }
  std::vector<Index> order = system_slots_;
  order.insert(order.end(), environment_slots_.begin(), environment_slots_.end());
  stride = 1;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    sf_stride[*it] = stride;
    stride *= dims_[*it];
  }
  perm_.resize(total_dim_);
  for (Index i = 0; i < total_dim_; ++i) {
    Index target = 0;
    for (Index s = 0; s < n; ++s) target += ((i / layout_stride[s]) % dims_[s]) * sf_stride[s];
    perm_[i] = target;
  }
}

// --- tensor products -------------------------------------------------------

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix embed(const ComplexMatrix& op, Index slot, const SpaceLayout& layout) {
  const auto& dims = layout.dims();
  if (slot < 0 || slot >= static_cast<Index>(dims.size())) {
    throw InvalidArgument("embed: slot " + std::to_string(slot) + " out of range");
  }
  require_square(op, "embed operator");
  if (op.rows() != dims[slot]) {
    throw DimensionError("embed: operator is " + shape(op) + " but slot has dimension " +
                         std::to_string(dims[slot]));
  }
  Index left = 1, right = 1;
  for (Index s = 0; s < slot; ++s) left *= dims[s];
  for (Index s = slot + 1; s < static_cast<Index>(dims.size()); ++s) right *= dims[s];
  return kron(kron(identity(left), op), identity(right));
}

ComplexMatrix to_system_first(const ComplexMatrix& m, const SpaceLayout& layout) {
  const auto& perm = layout.system_first_permutation();
  const Index n = layout.total_dim();
  if (m.rows() != n || m.cols() != n) {
    throw DimensionError("operator is " + shape(m) + ", layout dimension " + std::to_string(n));
  }
  ComplexMatrix out(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) out(perm[i], perm[j]) = m(i, j);
  }
  return out;
}

ComplexMatrix from_system_first(const ComplexMatrix& m, const SpaceLayout& layout) {
  const auto& perm = layout.system_first_permutation();
  const Index n = layout.total_dim();
  if (m.rows() != n || m.cols() != n) {
    throw DimensionError("operator is " + shape(m) + ", layout dimension " + std::to_string(n));
  }
  ComplexMatrix out(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) out(i, j) = m(perm[i], perm[j]);
  }
  return out;
}

ComplexMatrix join(const ComplexMatrix& sys, const ComplexMatrix& env, const SpaceLayout& layout) {
  if (sys.rows() != layout.system_dim() || sys.cols() != layout.system_dim()) {
    throw DimensionError("join: system operator is " + shape(sys) + ", system dimension " +
                         std::to_string(layout.system_dim()));
  }
  if (env.rows() != layout.environment_dim() || env.cols() != layout.environment_dim()) {
    throw DimensionError("join: environment operator is " + shape(env) + ", environment dimension " +
                         std::to_string(layout.environment_dim()));
  }
  return from_system_first(kron(sys, env), layout);
}

ComplexMatrix partial_trace(const ComplexMatrix& op, const SpaceLayout& layout, Part keep) {
  const ComplexMatrix sf = to_system_first(op, layout);
  const Index ds = layout.system_dim();
  const Index de = layout.environment_dim();
  if (keep == Part::System) {
    ComplexMatrix out = ComplexMatrix::Zero(ds, ds);
    for (Index a = 0; a < ds; ++a) {
      for (Index b = 0; b < ds; ++b) out(a, b) = sf.block(a * de, b * de, de, de).trace();
    }
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(de, de);
  for (Index a = 0; a < ds; ++a) out += sf.block(a * de, a * de, de, de);
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const SpaceLayout& layout, Part keep) {
  return DensityMatrix::unchecked(partial_trace(rho.matrix(), layout, keep));
}

// --- propagation -----------------------------------------------------------

SpectralPropagator::SpectralPropagator(const ComplexMatrix& h) {
  require_square(h, "Hamiltonian");
  if (!is_hermitian(h)) throw InvalidArgument("propagator: Hamiltonian is not Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (h + h.adjoint()));
  eigenvalues_ = es.eigenvalues();
  eigenvectors_ = es.eigenvectors();
}

ComplexMatrix SpectralPropagator::at(double t) const {
  const ComplexVector phases = (eigenvalues_.cast<Complex>() * Complex(0.0, -t)).array().exp();
  return eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint();
}

ComplexMatrix SpectralPropagator::apply(const ComplexMatrix& v, double t) const {
  const ComplexVector phases = (eigenvalues_.cast<Complex>() * Complex(0.0, -t)).array().exp();
  return eigenvectors_ * (phases.asDiagonal() * (eigenvectors_.adjoint() * v));
}

ComplexMatrix propagator(const ComplexMatrix& h, double t) {
  if (t == 0.0) {
    require_square(h, "Hamiltonian");
    if (!is_hermitian(h)) throw InvalidArgument("propagator: Hamiltonian is not Hermitian");
    return identity(h.rows());
  }
  return SpectralPropagator(h).at(t);
}

// --- observables -----------------------------------------------------------

double purity(const DensityMatrix& rho) {
  // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
  return std::min(1.0, rho.matrix().squaredNorm());
}

MeanDispersion mean_dispersion(const ComplexMatrix& op, const Ket& psi) {
  require_square(op, "observable");
  if (op.rows() != psi.dim()) {
    throw DimensionError("mean_dispersion: observable is " + shape(op) + ", state dimension " +
                         std::to_string(psi.dim()));
  }
  const ComplexVector op_psi = op * psi.amplitudes();
  const double mean = psi.amplitudes().dot(op_psi).real();
  const double second = op_psi.squaredNorm();  // <psi|op^dagger op|psi> = <op^2> for Hermitian op
  return {mean, std::max(0.0, second - mean * mean)};
}

MeanDispersion mean_dispersion(const ComplexMatrix& op, const DensityMatrix& rho) {
  require_square(op, "observable");
  if (op.rows() != rho.dim()) {
    throw DimensionError("mean_dispersion: observable is " + shape(op) + ", state dimension " +
                         std::to_string(rho.dim()));
  }
  const ComplexMatrix op_rho = op * rho.matrix();
  const double mean = op_rho.trace().real();
  const double second = (op * op_rho).trace().real();
  return {mean, std::max(0.0, second - mean * mean)};
}

}  // namespace psieve
