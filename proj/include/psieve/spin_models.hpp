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

#pragma once

#include <string_view>

#include "psieve/dynamics.hpp"

namespace psieve::spin {

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

enum class Coupling {
  /// eps * sigma_x (x) sum_i sigma_x^i
  XX,
  /// XX plus eps * sigma_y (x) sum_i sigma_y^i (two interaction terms)
  XXYY,
};

/// Central spin (slot 0) in a field along z, coupled to n_bath spins:
///   H = (w/2) sigma_z + sum_i (w/2) sigma_z^i + eps sigma_x sum_i sigma_x^i.
/// The system factor of each term is the bare Pauli matrix; eps is folded
/// into the environment factor.
FactorizedModel central_spin_model(int n_bath, double omega, double epsilon, Coupling coupling = Coupling::XX);

/// +1 eigenstates of sigma_z and sigma_x.
Ket up_z();
Ket up_x();

/// Named central-spin state: "0z" or "0x". Throws InvalidArgument otherwise.
Ket named_state(std::string_view name);

/// I / 2^n on the bath.
DensityMatrix mixed_bath(int n_bath);
/// Every bath spin in |+x>.
DensityMatrix x_polarized_bath(int n_bath);

}  // namespace psieve::spin
