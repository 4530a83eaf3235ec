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

#include <random>
#include <span>
#include <vector>

#include "psieve/qcore.hpp"

namespace psieve {

enum class ChartKind { Bloch, FullSphere };

/// Real parameterization of pure states with the global phase fixed.
///
/// Bloch (d = 2): (theta, phi) -> cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
/// FullSphere (any d): d-1 hyperspherical angles for the moduli followed by
/// d-1 relative phases; the first amplitude is real and non-negative.
///
/// Every real vector maps to a normalized Ket, so unconstrained optimizers can
/// wander outside the canonical ranges; from_ket() folds back into them.
class StateChart {
 public:
  static StateChart bloch();
  static StateChart full_sphere(Index dim);

  ChartKind kind() const { return kind_; }
  Index dim() const { return dim_; }
  Index parameter_count() const { return 2 * dim_ - 2; }

  Ket to_ket(std::span<const double> params) const;
  std::vector<double> from_ket(const Ket& psi) const;
  /// Parameters of a Haar-random state.
  std::vector<double> random_parameters(std::mt19937_64& rng) const;

 private:
  StateChart(ChartKind kind, Index dim) : kind_(kind), dim_(dim) {}

  ChartKind kind_;
  Index dim_;
};

/// 1 - |<a|b>|^2
double projective_distance(const Ket& a, const Ket& b);

}  // namespace psieve
