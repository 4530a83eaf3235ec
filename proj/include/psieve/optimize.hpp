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

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace psieve {

/// Multi-start derivative-free local search settings.
struct OptimizerConfig {
  int restarts = 8;
  int max_iterations = 4000;
  /// Simplex size at which a local search counts as converged. Objectives
  /// are quadratic near an optimum, so sizes much below sqrt(machine eps)
  /// cannot be resolved.
  double tolerance = 1e-7;
  /// Also stop once the best value has not improved for this many
  /// iterations (flat directions, chart singularities).
  int stall_iterations = 300;
  double initial_step = 0.3;
  std::uint64_t seed = 0;
  /// Restart optima within this (relative) objective gap are equivalent.
  double objective_tolerance = 1e-8;
  /// Projective distance 1 - |<a|b>|^2 above which two optima are distinct states.
  double state_tolerance = 1e-3;
  /// Canonical sieve only: relative half-width of the t_star probe window
  /// used to test whether the maximizer is stable in time (0 disables).
  double stability_window = 0.1;
  /// Projective distance above which a maximizer counts as unstable.
  double ambiguity_tolerance = 1e-2;
};

using Objective = std::function<double(std::span<const double>)>;

struct LocalMinimum {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Nelder-Mead simplex minimization from x0.
LocalMinimum nelder_mead(const Objective& f, std::vector<double> x0, const OptimizerConfig& cfg);

}  // namespace psieve
