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

#include "psieve/spin_models.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace psieve::spin {

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

namespace {

/// sum_i op^i over n_bath qubits.
ComplexMatrix bath_sum(const ComplexMatrix& op, int n_bath) {
  const Index dim = Index{1} << n_bath;
  ComplexMatrix total = ComplexMatrix::Zero(dim, dim);
  for (int i = 0; i < n_bath; ++i) {
    const Index left = Index{1} << i;
    const Index right = Index{1} << (n_bath - i - 1);
    total += kron(kron(identity(left), op), identity(right));
  }
  return total;
}

}  // namespace

FactorizedModel central_spin_model(int n_bath, double omega, double epsilon, Coupling coupling) {
  if (n_bath < 1 || n_bath > 11) throw InvalidArgument("central_spin_model: n_bath must be in [1, 11]");
  if (!std::isfinite(omega) || !std::isfinite(epsilon)) {
    throw InvalidArgument("central_spin_model: non-finite parameter");
  }
  std::vector<Index> dims(static_cast<std::size_t>(n_bath) + 1, 2);
  SpaceLayout layout(std::move(dims), {0});

  ComplexMatrix hs = 0.5 * omega * pauli_z();
  ComplexMatrix he = 0.5 * omega * bath_sum(pauli_z(), n_bath);
  std::vector<InteractionTerm> terms;
  terms.push_back({pauli_x(), epsilon * bath_sum(pauli_x(), n_bath)});
  if (coupling == Coupling::XXYY) terms.push_back({pauli_y(), epsilon * bath_sum(pauli_y(), n_bath)});
  return FactorizedModel(std::move(hs), std::move(he), std::move(terms), std::move(layout));
}

Ket up_z() { return Ket::basis(2, 0); }

Ket up_x() {
  ComplexVector v(2);
  v << std::numbers::sqrt2 / 2.0, std::numbers::sqrt2 / 2.0;
  return Ket::normalized(v);
}

Ket named_state(std::string_view name) {
  if (name == "0z") return up_z();
  if (name == "0x") return up_x();
  throw InvalidArgument("unknown named state '" + std::string(name) + "' (expected 0z or 0x)");
}

DensityMatrix mixed_bath(int n_bath) { return DensityMatrix::maximally_mixed(Index{1} << n_bath); }

DensityMatrix x_polarized_bath(int n_bath) {
  ComplexMatrix rho = up_x().projector();
  for (int i = 1; i < n_bath; ++i) rho = kron(rho, up_x().projector());
  return DensityMatrix::unchecked(std::move(rho));
}

}  // namespace psieve::spin
