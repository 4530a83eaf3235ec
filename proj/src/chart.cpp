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

#include "psieve/chart.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace psieve {

namespace {

double wrap_phase(double phi) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::fmod(phi, two_pi);
  if (w < 0.0) w += two_pi;
  if (w >= two_pi) w = 0.0;
  return w;
}

}  // namespace

StateChart StateChart::bloch() { return StateChart(ChartKind::Bloch, 2); }

StateChart StateChart::full_sphere(Index dim) {
  if (dim < 2) throw InvalidArgument("StateChart: full-sphere chart needs dimension >= 2");
  return StateChart(ChartKind::FullSphere, dim);
}

Ket StateChart::to_ket(std::span<const double> params) const {
  if (static_cast<Index>(params.size()) != parameter_count()) {
    throw DimensionError("StateChart: expected " + std::to_string(parameter_count()) + " parameters, got " +
                         std::to_string(params.size()));
  }
  ComplexVector amps(dim_);
  if (kind_ == ChartKind::Bloch) {
    const double theta = params[0];
    const double phi = params[1];
    amps(0) = std::cos(0.5 * theta);
    amps(1) = std::polar(1.0, phi) * std::sin(0.5 * theta);
    return Ket::normalized(amps);
  }
  const Index n_angles = dim_ - 1;
  double sin_product = 1.0;
  for (Index k = 0; k < dim_; ++k) {
    double modulus = sin_product;
    if (k < n_angles) {
      modulus *= std::cos(params[k]);
      sin_product *= std::sin(params[k]);
    }
    amps(k) = k == 0 ? Complex(modulus, 0.0) : std::polar(1.0, params[n_angles + k - 1]) * modulus;
  }
  return Ket::normalized(amps);
}

std::vector<double> StateChart::from_ket(const Ket& psi) const {
  if (psi.dim() != dim_) throw DimensionError("StateChart: state dimension does not match chart");
  const ComplexVector& a = psi.amplitudes();

  // Global phase: make the first non-negligible amplitude real and positive.
  Complex gauge(1.0, 0.0);
  for (Index k = 0; k < dim_; ++k) {
    if (std::abs(a(k)) > 1e-14) {
      gauge = std::conj(a(k)) / std::abs(a(k));
      break;
    }
  }
  const ComplexVector b = a * gauge;

  const Index n_angles = dim_ - 1;
  std::vector<double> params(static_cast<std::size_t>(parameter_count()));
  for (Index k = 0; k < n_angles; ++k) {
    const double head = std::abs(b(k));
    const double tail = b.tail(dim_ - k - 1).norm();
    params[k] = std::atan2(tail, head);
    params[n_angles + k] = std::abs(b(k + 1)) > 1e-14 ? wrap_phase(std::arg(b(k + 1))) : 0.0;
  }
  if (kind_ == ChartKind::Bloch) params[0] *= 2.0;
  return params;
}

std::vector<double> StateChart::random_parameters(std::mt19937_64& rng) const {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexVector v(dim_);
  for (Index k = 0; k < dim_; ++k) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    v(k) = Complex(re, im);
  }
  return from_ket(Ket::normalized(v));
}

double projective_distance(const Ket& a, const Ket& b) {
  if (a.dim() != b.dim()) throw DimensionError("projective_distance: dimension mismatch");
  return std::max(0.0, 1.0 - std::norm(a.amplitudes().dot(b.amplitudes())));
}

}  // namespace psieve
