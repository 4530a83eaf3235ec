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

#include "psieve/optimize.hpp"

#include <cmath>
#include <limits>
#include <memory>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include "psieve/errors.hpp"

namespace psieve {

namespace {

double trampoline(const gsl_vector* v, void* params) {
  const auto& f = *static_cast<const Objective*>(params);
  const double value = f(std::span<const double>(v->data, v->size));
  return std::isfinite(value) ? value : std::numeric_limits<double>::max();
}

struct VectorDeleter {
  void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};
struct MinimizerDeleter {
  void operator()(gsl_multimin_fminimizer* m) const { gsl_multimin_fminimizer_free(m); }
};

}  // namespace

LocalMinimum nelder_mead(const Objective& f, std::vector<double> x0, const OptimizerConfig& cfg) {
  if (x0.empty()) throw InvalidArgument("nelder_mead: empty starting point");
  static const bool handler_off = [] {
    gsl_set_error_handler_off();
    return true;
  }();
  (void)handler_off;

  const std::size_t n = x0.size();
  std::unique_ptr<gsl_vector, VectorDeleter> start(gsl_vector_alloc(n));
  std::unique_ptr<gsl_vector, VectorDeleter> steps(gsl_vector_alloc(n));
  for (std::size_t i = 0; i < n; ++i) gsl_vector_set(start.get(), i, x0[i]);
  gsl_vector_set_all(steps.get(), cfg.initial_step);

  gsl_multimin_function fn;
  fn.n = n;
  fn.f = &trampoline;
  fn.params = const_cast<Objective*>(&f);

  std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter> solver(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n));
  gsl_multimin_fminimizer_set(solver.get(), &fn, start.get(), steps.get());

  LocalMinimum out;
  int status = GSL_CONTINUE;
  double best = gsl_multimin_fminimizer_minimum(solver.get());
  int last_improvement = 0;
  while (status == GSL_CONTINUE && out.iterations < cfg.max_iterations) {
    ++out.iterations;
    if (gsl_multimin_fminimizer_iterate(solver.get()) != GSL_SUCCESS) break;
    status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(solver.get()), cfg.tolerance);
    const double current = gsl_multimin_fminimizer_minimum(solver.get());
    if (current < best - 1e-15 * (1.0 + std::abs(best))) {
      best = current;
      last_improvement = out.iterations;
    } else if (out.iterations - last_improvement >= cfg.stall_iterations) {
      status = GSL_SUCCESS;
    }
  }
  out.converged = status == GSL_SUCCESS;
  out.value = gsl_multimin_fminimizer_minimum(solver.get());
  const gsl_vector* argmin = gsl_multimin_fminimizer_x(solver.get());
  out.x.assign(argmin->data, argmin->data + n);
  return out;
}

}  // namespace psieve
