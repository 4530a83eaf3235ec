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

// Dense complex linear algebra on composite Hilbert spaces H = S (x) E.
// Units: hbar = 1.

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "psieve/errors.hpp"

namespace psieve {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Validation thresholds. Defaults are tuned for double precision at
/// dimensions up to 2^10.
struct Tolerances {
  double ket_norm = 1e-12;
  double density_hermitian = 1e-12;
  double density_trace = 1e-12;
  /// Eigenvalues in [-negative_eigenvalue, 0) count as zero.
  double negative_eigenvalue = 1e-10;
  /// Hermiticity check for Hamiltonians and observables.
  double operator_hermitian = 1e-10;
};

inline constexpr Tolerances kDefaultTolerances{};

double max_abs(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double tol = kDefaultTolerances.operator_hermitian);
ComplexMatrix identity(Index dim);

/// Normalized pure state.
class Ket {
 public:
  /// Throws InvalidArgument unless | ||v|| - 1 | <= tol.ket_norm.
  explicit Ket(ComplexVector amplitudes, const Tolerances& tol = kDefaultTolerances);

  /// Rescales v to unit norm; throws on a zero vector.
  static Ket normalized(const ComplexVector& v);
  static Ket basis(Index dim, Index k);

  const ComplexVector& amplitudes() const { return amplitudes_; }
  Index dim() const { return amplitudes_.size(); }
  ComplexMatrix projector() const { return amplitudes_ * amplitudes_.adjoint(); }

 private:
  struct Trusted {};
  Ket(ComplexVector amplitudes, Trusted) : amplitudes_(std::move(amplitudes)) {}

  ComplexVector amplitudes_;
};

/// Hermitian, unit-trace, positive-semidefinite matrix.
class DensityMatrix {
 public:
  /// Validates Hermiticity, trace and spectrum; throws InvalidArgument.
  explicit DensityMatrix(ComplexMatrix matrix, const Tolerances& tol = kDefaultTolerances);

  static DensityMatrix from_ket(const Ket& psi);
  static DensityMatrix maximally_mixed(Index dim);
  static DensityMatrix product(const DensityMatrix& a, const DensityMatrix& b);
  /// Skips validation. For results that are density matrices by construction
  /// (unitary conjugation, partial trace of a valid state).
  static DensityMatrix unchecked(ComplexMatrix matrix);

  const ComplexMatrix& matrix() const { return matrix_; }
  Index dim() const { return matrix_.rows(); }

 private:
  struct Trusted {};
  DensityMatrix(ComplexMatrix matrix, Trusted) : matrix_(std::move(matrix)) {}

  ComplexMatrix matrix_;
};

enum class Part { System, Environment };

/// Tensor-factor layout of the total space. Slot 0 is the most significant
/// factor in the Kronecker ordering.
class SpaceLayout {
 public:
  SpaceLayout(std::vector<Index> dims, std::vector<Index> system_slots);

  const std::vector<Index>& dims() const { return dims_; }
  const std::vector<Index>& system_slots() const { return system_slots_; }
  const std::vector<Index>& environment_slots() const { return environment_slots_; }
  Index total_dim() const { return total_dim_; }
  Index system_dim() const { return system_dim_; }
  Index environment_dim() const { return total_dim_ / system_dim_; }

  /// perm[i] is the index, in system-first ordering (system factors then
  /// environment factors, each in slot order), of layout basis index i.
  const std::vector<Index>& system_first_permutation() const { return perm_; }

 private:
  std::vector<Index> dims_;
  std::vector<Index> system_slots_;
  std::vector<Index> environment_slots_;
  Index total_dim_ = 1;
  Index system_dim_ = 1;
  std::vector<Index> perm_;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// op acting on factor `slot`, identity elsewhere.
ComplexMatrix embed(const ComplexMatrix& op, Index slot, const SpaceLayout& layout);

/// Operator sys (x) env placed in layout ordering.
ComplexMatrix join(const ComplexMatrix& sys, const ComplexMatrix& env, const SpaceLayout& layout);

/// Layout ordering <-> system-first ordering.
ComplexMatrix to_system_first(const ComplexMatrix& m, const SpaceLayout& layout);
ComplexMatrix from_system_first(const ComplexMatrix& m, const SpaceLayout& layout);

/// Partial trace of an arbitrary operator (trace-class maps need not be states).
ComplexMatrix partial_trace(const ComplexMatrix& op, const SpaceLayout& layout, Part keep);
DensityMatrix partial_trace(const DensityMatrix& rho, const SpaceLayout& layout, Part keep);

/// exp(-i h t) via eigendecomposition. Throws InvalidArgument if h is not Hermitian.
ComplexMatrix propagator(const ComplexMatrix& h, double t);

/// Eigendecomposition of a Hermitian generator, reusable across times.
class SpectralPropagator {
 public:
  explicit SpectralPropagator(const ComplexMatrix& h);

  ComplexMatrix at(double t) const;
  /// exp(-iht) v for a column block v.
  ComplexMatrix apply(const ComplexMatrix& v, double t) const;

  const RealVector& eigenvalues() const { return eigenvalues_; }
  const ComplexMatrix& eigenvectors() const { return eigenvectors_; }

 private:
  RealVector eigenvalues_;
  ComplexMatrix eigenvectors_;
};

/// tr(rho^2), clamped to at most 1.
double purity(const DensityMatrix& rho);

struct MeanDispersion {
  double mean = 0.0;
  /// <op^2> - <op>^2, clamped at 0.
  double disp2 = 0.0;
};

MeanDispersion mean_dispersion(const ComplexMatrix& op, const Ket& psi);
MeanDispersion mean_dispersion(const ComplexMatrix& op, const DensityMatrix& rho);

}  // namespace psieve
