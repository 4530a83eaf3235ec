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

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "psieve/sieve.hpp"
#include "psieve/spin_models.hpp"

namespace psieve {
namespace {

using spin::pauli_x;
using spin::pauli_y;
using spin::pauli_z;
constexpr double kPi = std::numbers::pi;

FactorizedModel fig1_model() { return spin::central_spin_model(6, 1.0, 0.1); }

Ket bloch_ket(double theta, double phi) {
  ComplexVector v(2);
  v << std::cos(theta / 2), std::polar(std::sin(theta / 2), phi);
  return Ket::normalized(v);
}

// ---------------------------------------------------------------- chart

TEST(Chart, BlochRoundTrip) {
  const StateChart chart = StateChart::bloch();
  EXPECT_EQ(chart.parameter_count(), 2);
  const std::vector<double> params{1.1, 4.0};
  const Ket psi = chart.to_ket(params);
  const auto back = chart.from_ket(psi);
  EXPECT_NEAR(back[0], 1.1, 1e-12);
  EXPECT_NEAR(back[1], 4.0, 1e-12);
  EXPECT_LT(projective_distance(psi, bloch_ket(1.1, 4.0)), 1e-14);
}

TEST(Chart, FullSphereIsNormalizedAndGaugeFixed) {
  std::mt19937_64 rng(1);
  for (Index d : {2, 3, 5}) {
    const StateChart chart = StateChart::full_sphere(d);
    EXPECT_EQ(chart.parameter_count(), 2 * d - 2);
    for (int trial = 0; trial < 10; ++trial) {
      const Ket psi = chart.to_ket(chart.random_parameters(rng));
      EXPECT_NEAR(psi.amplitudes().norm(), 1.0, 1e-12);
      const ComplexVector phased = std::polar(1.0, 0.7) * psi.amplitudes();
      const Ket again = chart.to_ket(chart.from_ket(Ket::normalized(phased)));
      EXPECT_LT(projective_distance(psi, again), 1e-12);
      EXPECT_LT((again.amplitudes() - psi.amplitudes()).norm(), 1e-10);
    }
  }
}

TEST(Chart, RejectsWrongParameterCount) {
  const std::vector<double> three{0.1, 0.2, 0.3};
  EXPECT_THROW(StateChart::bloch().to_ket(three), DimensionError);
  EXPECT_THROW(StateChart::full_sphere(1), InvalidArgument);
}

// ------------------------------------------------------------ optimizer

TEST(NelderMead, FindsRosenbrockMinimum) {
  const Objective rosen = [](std::span<const double> x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  const LocalMinimum m = nelder_mead(rosen, {-1.2, 1.0}, OptimizerConfig{.max_iterations = 10000});
  EXPECT_TRUE(m.converged);
  EXPECT_NEAR(m.x[0], 1.0, 1e-5);
  EXPECT_NEAR(m.x[1], 1.0, 1e-5);
  EXPECT_THROW(nelder_mead(rosen, {}, {}), InvalidArgument);
}

// ----------------------------------------------------- short-time law

TEST(ShortTime, CentralSpinCoefficient) {
  const FactorizedModel model = fig1_model();
  const double c = short_time_coefficient(model, spin::up_z(), spin::mixed_bath(6));
  EXPECT_NEAR(c, 4.0 * 0.1 * 0.1 * 6 * 1.0, 1e-14);
  const PurityDerivatives d = numeric_second_derivative(model, spin::up_z(), spin::mixed_bath(6), 1e-3);
  EXPECT_LT(std::abs(d.second + c) / c, 1e-3);
  EXPECT_LT(std::abs(d.first), 1e-8);
}

TEST(ShortTime, RichardsonReference) {
  const FactorizedModel model = fig1_model();
  const double c = short_time_coefficient(model, spin::up_z(), spin::mixed_bath(6));
  const double coarse = numeric_second_derivative(model, spin::up_z(), spin::mixed_bath(6), 2e-2).second;
  const double fine = numeric_second_derivative(model, spin::up_z(), spin::mixed_bath(6), 1e-2).second;
  const double ref = oracle::richardson(coarse, fine);
  EXPECT_LT(std::abs(ref + c) / c, 1e-5);
  const double at_1e3 = numeric_second_derivative(model, spin::up_z(), spin::mixed_bath(6), 1e-3).second;
  EXPECT_LT(std::abs(at_1e3 - ref) / c, 1e-4);
}

TEST(ShortTime, InteractionEigenstateHasZeroCoefficient) {
  const FactorizedModel model = fig1_model();
  EXPECT_NEAR(short_time_coefficient(model, spin::up_x(), spin::mixed_bath(6)), 0.0, 1e-15);
  EXPECT_LT(std::abs(numeric_second_derivative(model, spin::up_x(), spin::mixed_bath(6)).second), 1e-6);
}

TEST(ShortTime, EnvironmentEigenstateHasZeroCoefficient) {
  const FactorizedModel model = fig1_model();
  EXPECT_NEAR(short_time_coefficient(model, spin::up_z(), spin::x_polarized_bath(6)), 0.0, 1e-12);
}

TEST(ShortTime, InvariantUnderFactorRescaling) {
  std::mt19937_64 rng(2);
  for (double scale : {0.1, -3.0, 17.0}) {
    const ComplexMatrix hs = oracle::random_hermitian(2, rng);
    const ComplexMatrix he = oracle::random_hermitian(3, rng);
    const ComplexMatrix s = oracle::random_hermitian(2, rng);
    const ComplexMatrix e = oracle::random_hermitian(3, rng);
    const SpaceLayout layout({2, 3}, {0});
    const FactorizedModel a(hs, he, {{s, e}}, layout);
    const FactorizedModel b(hs, he, {{scale * s, e / scale}}, layout);
    const Ket psi = Ket::normalized(oracle::random_state(2, rng));
    const DensityMatrix rho_e(oracle::random_density(3, rng));
    const double ca = short_time_coefficient(a, psi, rho_e);
    EXPECT_NEAR(short_time_coefficient(b, psi, rho_e), ca, 1e-10 * ca);
  }
}

TEST(ShortTime, RandomSingleTermModelsAgreeWithNumeric) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const FactorizedModel model(oracle::random_hermitian(2, rng), oracle::random_hermitian(3, rng),
                                {{oracle::random_hermitian(2, rng), oracle::random_hermitian(3, rng)}},
                                SpaceLayout({2, 3}, {0}));
    const Ket psi = Ket::normalized(oracle::random_state(2, rng));
    const DensityMatrix rho_e(oracle::random_density(3, rng));
    const double c = short_time_coefficient(model, psi, rho_e);
    const PurityDerivatives d = numeric_second_derivative(model, psi, rho_e, 1e-3);
    if (c < 1e-8) {
      EXPECT_LT(std::abs(d.second), 1e-6);
    } else {
      EXPECT_LT(std::abs(d.second + c) / c, 1e-3);
    }
    // Truncation of the first difference is h^2 P'''(0) / 6; these models
    // have O(1) operator norms, so a smaller step resolves the zero.
    EXPECT_LT(std::abs(numeric_second_derivative(model, psi, rho_e, 1e-5).first), 1e-8);
  }
}

TEST(ShortTime, FirstDerivativeShrinksQuadratically) {
  std::mt19937_64 rng(4);
  const FactorizedModel model(oracle::random_hermitian(2, rng), oracle::random_hermitian(3, rng),
                              {{oracle::random_hermitian(2, rng), oracle::random_hermitian(3, rng)},
                               {oracle::random_hermitian(2, rng), oracle::random_hermitian(3, rng)}},
                              SpaceLayout({2, 3}, {0}));
  const Ket psi = Ket::normalized(oracle::random_state(2, rng));
  const DensityMatrix rho_e(oracle::random_density(3, rng));
  const double big = std::abs(numeric_second_derivative(model, psi, rho_e, 0.08).first);
  const double small = std::abs(numeric_second_derivative(model, psi, rho_e, 0.02).first);
  // |estimate| <= C h^2 with C taken from the larger step.
  EXPECT_LE(small, big / (0.08 * 0.08) * 0.02 * 0.02 * 1.5 + 1e-12);
}

TEST(ShortTime, MultiTermModelIsRejected) {
  const FactorizedModel model = spin::central_spin_model(2, 1.0, 0.1, spin::Coupling::XXYY);
  EXPECT_THROW(short_time_coefficient(model, spin::up_z(), spin::mixed_bath(2)), UnsupportedModel);
  const PurityDerivatives d = numeric_second_derivative(model, spin::up_z(), spin::mixed_bath(2));
  EXPECT_LT(std::abs(d.first), 1e-8);
  EXPECT_LT(d.second, 0.0);
}

TEST(ShortTime, StepOutOfRange) {
  EXPECT_THROW(numeric_second_derivative(fig1_model(), spin::up_z(), spin::mixed_bath(6), 0.0), InvalidArgument);
  EXPECT_THROW(numeric_second_derivative(fig1_model(), spin::up_z(), spin::mixed_bath(6), 0.2), InvalidArgument);
}

TEST(ShortTime, QuadraticLawWithCubicRemainder) {
  const FactorizedModel model = fig1_model();
  const auto times = uniform_times(0.2, 41);
  const PuritySeries s = purity_series(model, spin::up_z(), spin::mixed_bath(6), times);
  double worst = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double t = times[i];
    worst = std::max(worst, std::abs(s.values[i] - (1.0 - 0.12 * t * t)) / (t * t * t));
  }
  EXPECT_LT(worst, 1.0);
}

TEST(ShortTime, EigenstatePurityLossIsCubic) {
  const FactorizedModel model = fig1_model();
  const auto times = uniform_times(0.2, 41);
  const PuritySeries s = purity_series(model, spin::up_x(), spin::mixed_bath(6), times);
  // Least-squares fit of 1 - P by a t^2 + b t^3 + ... + t^6. The loss here
  // starts at t^4, so higher columns keep it from leaking into a.
  const Index n = static_cast<Index>(times.size()) - 1;
  Eigen::MatrixXd design(n, 5);
  Eigen::VectorXd loss(n);
  double c_bound = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double t = times[i + 1];
    for (int p = 0; p < 5; ++p) design(i, p) = std::pow(t, p + 2);
    loss(i) = 1.0 - s.values[i + 1];
    c_bound = std::max(c_bound, loss(i) / (t * t * t));
  }
  const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(loss);
  EXPECT_LT(std::abs(coef(0)), 1e-6);
  EXPECT_TRUE(std::isfinite(c_bound));
  EXPECT_LT(c_bound, 1.0);
}

// ------------------------------------------------ effective dynamics

TEST(EffectiveHamiltonian, MixedBathGivesZeroShift) {
  const EffectiveHamiltonian eff = effective_hamiltonian(fig1_model(), spin::mixed_bath(6));
  ASSERT_EQ(eff.kappa.size(), 1u);
  EXPECT_NEAR(eff.kappa[0], 0.0, 1e-15);
  EXPECT_LT(max_abs(eff.h_eff - 0.5 * pauli_z()), 1e-15);
}

TEST(EffectiveHamiltonian, PolarizedBathShift) {
  const FactorizedModel model = fig1_model();
  const DensityMatrix rho = spin::x_polarized_bath(6);
  // Oracle: full trace of the environment factor against the polarized state.
  const double oracle_kappa = (model.terms()[0].environment * rho.matrix()).trace().real();
  const EffectiveHamiltonian eff = effective_hamiltonian(model, rho);
  EXPECT_NEAR(eff.kappa[0], 0.6, 1e-12);
  EXPECT_NEAR(eff.kappa[0], oracle_kappa, 1e-14);
  EXPECT_LT(max_abs(eff.h_eff - (0.5 * pauli_z() + 0.6 * pauli_x())), 1e-12);
  EXPECT_TRUE(is_hermitian(eff.h_eff, 1e-10));
}

TEST(EffectiveHamiltonian, NoTerms) {
  std::mt19937_64 rng(5);
  const ComplexMatrix hs = oracle::random_hermitian(2, rng);
  const FactorizedModel model(hs, identity(2), {}, SpaceLayout({2, 2}, {0}));
  const EffectiveHamiltonian eff = effective_hamiltonian(model, DensityMatrix::maximally_mixed(2));
  EXPECT_TRUE(eff.kappa.empty());
  EXPECT_LT(max_abs(eff.h_eff - hs), 1e-15);
}

TEST(DispersionIntegral, LarmorClosedForms) {
  const FactorizedModel model = fig1_model();
  EXPECT_NEAR(dispersion_integral(model, spin::up_z(), spin::mixed_bath(6), 2 * kPi), 2 * kPi, 1e-9);
  EXPECT_NEAR(dispersion_integral(model, spin::up_x(), spin::mixed_bath(6), 2 * kPi), kPi, 1e-9);
  // T (1 - sin^2(theta) / 2) across the sphere.
  for (double theta : {0.3, 1.0, 2.0}) {
    const double expected = 2 * kPi * (1.0 - 0.5 * std::sin(theta) * std::sin(theta));
    EXPECT_NEAR(dispersion_integral(model, bloch_ket(theta, 0.4), spin::mixed_bath(6), 2 * kPi), expected, 1e-9);
  }
}

TEST(DispersionIntegral, MatchesIndependentQuadrature) {
  // Reference: RK4 propagation of the mean-field state plus dense Simpson.
  const FactorizedModel model = fig1_model();
  const DensityMatrix rho = spin::x_polarized_bath(6);
  const ComplexMatrix h_eff = 0.5 * pauli_z() + 0.6 * pauli_x();
  const Ket psi = bloch_ket(0.8, 1.9);
  const auto dispersion = [&](double t) {
    const ComplexVector v = oracle::rk4_schrodinger(h_eff, psi.amplitudes(), t, 400);
    const double m = v.dot(pauli_x() * v).real();
    return 1.0 - m * m;
  };
  const double ref = oracle::simpson(dispersion, 0.0, 3.0, 400);
  EXPECT_NEAR(dispersion_integral(model, psi, rho, 3.0), ref, 1e-8);
}

TEST(DispersionIntegral, EigenstateOfCommutingModel) {
  // h_eff = sigma_x commutes with s = sigma_x.
  const FactorizedModel model(pauli_x(), pauli_z(), {{pauli_x(), pauli_z()}}, SpaceLayout({2, 2}, {0}));
  EXPECT_NEAR(dispersion_integral(model, spin::up_x(), DensityMatrix::maximally_mixed(2), 5.0), 0.0, 1e-14);
}

TEST(DispersionIntegral, MonotoneInFinalTime) {
  const FactorizedModel model = fig1_model();
  const Ket psi = bloch_ket(1.2, 0.3);
  double previous = 0.0;
  for (double t = 0.0; t <= 8.0; t += 0.5) {
    const double value = dispersion_integral(model, psi, spin::x_polarized_bath(6), t);
    EXPECT_GE(value, previous - 1e-12);
    previous = value;
  }
}

TEST(DispersionIntegral, WeightedMultiTerm) {
  const FactorizedModel model = spin::central_spin_model(2, 1.0, 0.1, spin::Coupling::XXYY);
  const DensityMatrix rho = spin::mixed_bath(2);
  const Ket psi = bloch_ket(0.7, 0.2);
  const std::vector<double> only_x{1.0, 0.0}, only_y{0.0, 1.0}, mix{2.0, 3.0};
  const double x = dispersion_integral(model, psi, rho, 4.0, 64, only_x);
  const double y = dispersion_integral(model, psi, rho, 4.0, 64, only_y);
  // Each call refines its own grid to 1e-8 relative.
  EXPECT_NEAR(dispersion_integral(model, psi, rho, 4.0, 64, mix), 2 * x + 3 * y, 1e-8 * (2 * x + 3 * y));
  EXPECT_NEAR(dispersion_integral(model, psi, rho, 4.0), x + y, 1e-8 * (x + y));
  const std::vector<double> negative{-1.0, 1.0};
  EXPECT_THROW(dispersion_integral(model, psi, rho, 4.0, 64, negative), InvalidArgument);
}

TEST(DispersionIntegral, Errors) {
  const FactorizedModel model = fig1_model();
  EXPECT_THROW(dispersion_integral(model, spin::up_z(), spin::mixed_bath(6), -1.0), InvalidArgument);
  EXPECT_THROW(dispersion_integral(model, spin::up_z(), spin::mixed_bath(6), 1.0, 0), InvalidArgument);
  EXPECT_THROW(dispersion_integral(model, spin::up_z(), spin::mixed_bath(6), 1.0, 8), InvalidArgument);
}

// --------------------------------------------------------- sieves

TEST(ModifiedSieve, SelectsEquatorInCentralSpinModel) {
  const FactorizedModel model = fig1_model();
  const SieveResult r = modified_sieve(model, spin::mixed_bath(6), 2 * kPi, StateChart::bloch());
  EXPECT_EQ(r.mode, SieveMode::Modified);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.parameters[0], kPi / 2, 1e-3);
  EXPECT_NEAR(r.objective, kPi, 1e-6);
  EXPECT_TRUE(r.degenerate_manifold);
  EXPECT_FALSE(r.ambiguous);
  EXPECT_EQ(r.history.size(), 8u);
  for (const auto& rec : r.history) EXPECT_NEAR(rec.parameters[0], kPi / 2, 1e-3);
  // Self-consistency with a fresh evaluation.
  EXPECT_NEAR(dispersion_integral(model, r.state, spin::mixed_bath(6), 2 * kPi), r.objective, 1e-12);
}

TEST(ModifiedSieve, CommutingModelSelectsInteractionEigenstates) {
  const FactorizedModel model(pauli_x(), pauli_z(), {{pauli_x(), pauli_z()}}, SpaceLayout({2, 2}, {0}));
  const SieveResult r = modified_sieve(model, DensityMatrix::maximally_mixed(2), 3.0, StateChart::bloch());
  EXPECT_NEAR(r.objective, 0.0, 1e-9);
  EXPECT_LT(mean_dispersion(pauli_x(), r.state).disp2, 1e-6);
}

TEST(ModifiedSieve, ObjectiveIgnoresGlobalPhase) {
  const FactorizedModel model = fig1_model();
  const Ket psi = bloch_ket(0.9, 2.2);
  const Ket phased = Ket::normalized(std::polar(1.0, 1.3) * psi.amplitudes());
  const DensityMatrix rho = spin::x_polarized_bath(6);
  EXPECT_NEAR(dispersion_integral(model, psi, rho, 5.0), dispersion_integral(model, phased, rho, 5.0), 1e-13);
}

TEST(ModifiedSieve, DeterministicForFixedSeed) {
  const FactorizedModel model = spin::central_spin_model(2, 1.0, 0.1);
  const OptimizerConfig cfg{.restarts = 4, .seed = 42};
  const SieveResult a = modified_sieve(model, spin::x_polarized_bath(2), 3.0, StateChart::bloch(), cfg);
  const SieveResult b = modified_sieve(model, spin::x_polarized_bath(2), 3.0, StateChart::bloch(), cfg);
  ASSERT_EQ(a.history.size(), b.history.size());
  for (std::size_t i = 0; i < a.history.size(); ++i) EXPECT_EQ(a.history[i].parameters, b.history[i].parameters);
  EXPECT_EQ(a.objective, b.objective);
}

TEST(ModifiedSieve, Errors) {
  const FactorizedModel model = fig1_model();
  EXPECT_THROW(modified_sieve(model, spin::mixed_bath(6), 0.0, StateChart::bloch()), InvalidArgument);
  EXPECT_THROW(modified_sieve(model, spin::mixed_bath(6), 1.0, StateChart::full_sphere(3)), DimensionError);
}

TEST(CanonicalSieve, ShortTimeSelectsInteractionEigenstates) {
  const FactorizedModel model = fig1_model();
  const SieveResult r = canonical_sieve(model, spin::mixed_bath(6), 0.05, StateChart::bloch());
  EXPECT_EQ(r.mode, SieveMode::Canonical);
  EXPECT_GT(r.objective, 0.0);
  EXPECT_LE(r.objective, 1.0);
  EXPECT_FALSE(r.ambiguous);
  const double at_eigenstate =
      purity_series(model, spin::up_x(), spin::mixed_bath(6), std::vector<double>{0.0, 0.05}).values[1];
  EXPECT_LT(std::abs(r.objective - at_eigenstate), 1e-6);
  EXPECT_LT(mean_dispersion(pauli_x(), r.state).disp2, 1e-2);
}

TEST(CanonicalSieve, NoInteractionIsFlat) {
  std::mt19937_64 rng(6);
  const FactorizedModel model(oracle::random_hermitian(2, rng), oracle::random_hermitian(2, rng), {},
                              SpaceLayout({2, 2}, {0}));
  const SieveResult r = canonical_sieve(model, DensityMatrix::maximally_mixed(2), 1.0, StateChart::bloch(),
                                        OptimizerConfig{.stability_window = 0.0});
  EXPECT_NEAR(r.objective, 1.0, 1e-12);
  for (const auto& rec : r.history) EXPECT_NEAR(rec.objective, 1.0, 1e-12);
  EXPECT_TRUE(r.degenerate_manifold);
  EXPECT_FALSE(r.ambiguous);
}

TEST(CanonicalSieve, LongTimesAreAmbiguous) {
  const FactorizedModel model = fig1_model();
  for (double t_star : {30.0, 40.0}) {
    const SieveResult r = canonical_sieve(model, spin::mixed_bath(6), t_star, StateChart::bloch());
    EXPECT_TRUE(r.ambiguous) << "t*=" << t_star;
    EXPECT_GT(r.time_spread, 1e-2);
  }
}

TEST(CanonicalSieve, Errors) {
  EXPECT_THROW(canonical_sieve(fig1_model(), spin::mixed_bath(6), 0.0, StateChart::bloch()), InvalidArgument);
  EXPECT_THROW(canonical_sieve(fig1_model(), spin::mixed_bath(6), 1.0, StateChart::bloch(),
                               OptimizerConfig{.restarts = 0}),
               InvalidArgument);
}

TEST(DefaultSieveTime, OnePeriod) {
  EXPECT_NEAR(default_sieve_time(fig1_model()), 2 * kPi, 1e-12);
  const FactorizedModel flat(identity(2), identity(2), {}, SpaceLayout({2, 2}, {0}));
  EXPECT_THROW(default_sieve_time(flat), InvalidArgument);
}

TEST(MultiTermModel, YCouplingIsHermitianAndTraced) {
  const FactorizedModel model = spin::central_spin_model(3, 1.0, 0.2, spin::Coupling::XXYY);
  ASSERT_EQ(model.terms().size(), 2u);
  EXPECT_LT(max_abs(model.terms()[1].system - pauli_y()), 1e-15);
  EXPECT_NEAR(mean_dispersion(model.terms()[1].environment, spin::mixed_bath(3)).disp2, 0.2 * 0.2 * 3, 1e-12);
}

}  // namespace
}  // namespace psieve
