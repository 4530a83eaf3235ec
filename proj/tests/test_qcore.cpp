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
#include "psieve/qcore.hpp"
#include "psieve/spin_models.hpp"

namespace psieve {
namespace {

using spin::pauli_x;
using spin::pauli_y;
using spin::pauli_z;

TEST(Kron, IdentityTimesIdentity) { EXPECT_LT(max_abs(kron(identity(2), identity(2)) - identity(4)), 1e-15); }

TEST(Kron, SigmaZWithIdentityIsDiagonal) {
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected.diagonal() << 1.0, 1.0, -1.0, -1.0;
  EXPECT_LT(max_abs(kron(pauli_z(), identity(2)) - expected), 1e-15);
}

TEST(Kron, DoubleBitFlip) {
  const ComplexVector out = kron(pauli_x(), pauli_x()) * Ket::basis(4, 0).amplitudes();
  EXPECT_LT((out - Ket::basis(4, 3).amplitudes()).norm(), 1e-15);
}

TEST(Kron, AssociativeOnRandomOperands) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix a = oracle::random_hermitian(2, rng);
    const ComplexMatrix b = oracle::random_hermitian(3, rng);
    const ComplexMatrix c = oracle::random_hermitian(2, rng);
    EXPECT_LT(max_abs(kron(kron(a, b), c) - kron(a, kron(b, c))), 1e-14);
  }
}

TEST(Embed, SlotZeroIsKronWithIdentity) {
  const SpaceLayout layout({2, 2}, {0});
  EXPECT_LT(max_abs(embed(pauli_x(), 0, layout) - kron(pauli_x(), identity(2))), 1e-15);
}

TEST(Embed, IdentityEmbedsToIdentity) {
  const SpaceLayout layout({2, 3, 2}, {1});
  EXPECT_LT(max_abs(embed(identity(3), 1, layout) - identity(12)), 1e-15);
}

TEST(Embed, TracelessFactorStaysTraceless) {
  const SpaceLayout layout({2, 2, 2}, {0});
  EXPECT_NEAR(std::abs(embed(pauli_z(), 1, layout).trace()), 0.0, 1e-15);
}

TEST(Embed, Errors) {
  const SpaceLayout layout({2, 2}, {0});
  EXPECT_THROW(embed(pauli_x(), 2, layout), InvalidArgument);
  EXPECT_THROW(embed(identity(3), 0, layout), DimensionError);
}

TEST(SpaceLayout, RejectsBadSlots) {
  EXPECT_THROW(SpaceLayout({2, 2}, {}), InvalidArgument);
  EXPECT_THROW(SpaceLayout({2, 2}, {0, 1}), InvalidArgument);
  EXPECT_THROW(SpaceLayout({2, 2}, {5}), InvalidArgument);
  EXPECT_THROW(SpaceLayout({2, 0}, {0}), InvalidArgument);
}

TEST(PartialTrace, ProductState) {
  std::mt19937_64 rng(3);
  const DensityMatrix a(oracle::random_density(2, rng));
  const DensityMatrix b(oracle::random_density(3, rng));
  const SpaceLayout layout({2, 3}, {0});
  const DensityMatrix ab = DensityMatrix::product(a, b);
  EXPECT_LT(max_abs(partial_trace(ab, layout, Part::System).matrix() - a.matrix()), 1e-14);
  EXPECT_LT(max_abs(partial_trace(ab, layout, Part::Environment).matrix() - b.matrix()), 1e-14);
}

TEST(PartialTrace, BellStateGivesMaximallyMixed) {
  ComplexVector phi(4);
  phi << 1.0, 0.0, 0.0, 1.0;
  const DensityMatrix bell = DensityMatrix::from_ket(Ket::normalized(phi));
  const SpaceLayout layout({2, 2}, {0});
  EXPECT_LT(max_abs(partial_trace(bell, layout, Part::System).matrix() - identity(2) / 2.0), 1e-15);
}

TEST(PartialTrace, MatchesIndexSummationOracle) {
  std::mt19937_64 rng(11);
  const SpaceLayout layout({2, 4}, {0});
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix rho = oracle::random_density(8, rng);
    const DensityMatrix dm(rho);
    const DensityMatrix sys = partial_trace(dm, layout, Part::System);
    const DensityMatrix env = partial_trace(dm, layout, Part::Environment);
    EXPECT_LT(max_abs(sys.matrix() - oracle::partial_trace_indices(rho, 2, 4, true)), 1e-14);
    EXPECT_LT(max_abs(env.matrix() - oracle::partial_trace_indices(rho, 2, 4, false)), 1e-14);
    EXPECT_NEAR(sys.matrix().trace().real(), 1.0, 1e-12);
  }
}

TEST(PartialTrace, NonContiguousSystemSlot) {
  // System is the middle qubit of three. Oracle: explicit summation over the
  // outer two indices.
  std::mt19937_64 rng(5);
  const ComplexMatrix rho = oracle::random_density(8, rng);
  ComplexMatrix expected = ComplexMatrix::Zero(2, 2);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k) expected(a, b) += rho(4 * i + 2 * a + k, 4 * i + 2 * b + k);
  const SpaceLayout layout({2, 2, 2}, {1});
  EXPECT_LT(max_abs(partial_trace(DensityMatrix(rho), layout, Part::System).matrix() - expected), 1e-14);
}

TEST(PartialTrace, JoinPlacesFactorsInLayoutOrder) {
  const SpaceLayout layout({2, 2, 2}, {2});
  // System on the last slot: sys (x) env in system-first order is env (x) sys here.
  const ComplexMatrix env = kron(pauli_x(), pauli_z());
  EXPECT_LT(max_abs(join(pauli_y(), env, layout) - kron(env, pauli_y())), 1e-15);
}

TEST(PartialTrace, DimensionMismatchThrows) {
  const SpaceLayout layout({2, 2}, {0});
  EXPECT_THROW(partial_trace(DensityMatrix::maximally_mixed(3), layout, Part::System), DimensionError);
}

TEST(Propagator, ZeroTimeIsIdentity) {
  std::mt19937_64 rng(1);
  EXPECT_LT(max_abs(propagator(oracle::random_hermitian(4, rng), 0.0) - identity(4)), 1e-15);
}

TEST(Propagator, SigmaZAtPi) {
  const ComplexMatrix u = propagator(pauli_z(), std::numbers::pi);
  ComplexMatrix expected = ComplexMatrix::Zero(2, 2);
  expected(0, 0) = std::exp(Complex(0.0, -std::numbers::pi));
  expected(1, 1) = std::exp(Complex(0.0, std::numbers::pi));
  EXPECT_LT(max_abs(u - expected), 1e-14);
  EXPECT_LT(max_abs(u + identity(2)), 1e-14);
}

TEST(Propagator, SigmaXMatchesRungeKuttaOracle) {
  for (double t : {0.3, 1.0, 2.5}) {
    const ComplexVector out = propagator(pauli_x(), t) * Ket::basis(2, 0).amplitudes();
    const ComplexVector ref = oracle::rk4_schrodinger(pauli_x(), Ket::basis(2, 0).amplitudes(), t, 4000);
    EXPECT_LT((out - ref).norm(), 1e-10);
    EXPECT_NEAR(out(0).real(), std::cos(t), 1e-12);
    EXPECT_NEAR(out(1).imag(), -std::sin(t), 1e-12);
  }
}

TEST(Propagator, UnitaryForRandomHermitian) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> time(-10.0, 10.0);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix u = propagator(oracle::random_hermitian(8, rng), time(rng));
    EXPECT_LT(max_abs(u.adjoint() * u - identity(8)), 1e-10);
  }
}

TEST(Propagator, RejectsNonHermitian) {
  ComplexMatrix m = pauli_x();
  m(0, 1) = 2.0;
  EXPECT_THROW(propagator(m, 1.0), InvalidArgument);
}

TEST(Purity, Examples) {
  EXPECT_DOUBLE_EQ(purity(DensityMatrix::from_ket(spin::up_x())), 1.0);
  EXPECT_NEAR(purity(DensityMatrix::maximally_mixed(8)), 1.0 / 8.0, 1e-15);
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d.diagonal() << 0.7, 0.3;
  EXPECT_NEAR(purity(DensityMatrix(d)), 0.58, 1e-15);
}

TEST(Purity, BoundedByOneOverDAndOne) {
  std::mt19937_64 rng(8);
  for (int d : {2, 3, 5, 8}) {
    for (int trial = 0; trial < 10; ++trial) {
      const double p = purity(DensityMatrix(oracle::random_density(d, rng)));
      EXPECT_GE(p, 1.0 / d - 1e-14);
      EXPECT_LE(p, 1.0);
    }
  }
}

TEST(MeanDispersion, PauliExamples) {
  const MeanDispersion on_x = mean_dispersion(pauli_x(), spin::up_x());
  EXPECT_NEAR(on_x.mean, 1.0, 1e-15);
  EXPECT_NEAR(on_x.disp2, 0.0, 1e-15);
  const MeanDispersion on_z = mean_dispersion(pauli_x(), spin::up_z());
  EXPECT_NEAR(on_z.mean, 0.0, 1e-15);
  EXPECT_NEAR(on_z.disp2, 1.0, 1e-15);
}

TEST(MeanDispersion, BathCouplingOnMixedBath) {
  // Oracle: build eps * sum_i sigma_x^i by hand and take full-matrix traces.
  const int n = 6;
  const double eps = 0.1;
  const Index dim = 64;
  ComplexMatrix e = ComplexMatrix::Zero(dim, dim);
  for (int i = 0; i < n; ++i) {
    ComplexMatrix term = ComplexMatrix::Ones(1, 1);
    for (int j = 0; j < n; ++j) term = kron(term, j == i ? pauli_x() : identity(2));
    e += eps * term;
  }
  const ComplexMatrix rho = identity(dim) / static_cast<double>(dim);
  const double oracle_mean = (e * rho).trace().real();
  const double oracle_disp2 = (e * e * rho).trace().real() - oracle_mean * oracle_mean;
  EXPECT_NEAR(oracle_disp2, eps * eps * n, 1e-14);

  const MeanDispersion md = mean_dispersion(e, spin::mixed_bath(n));
  EXPECT_NEAR(md.mean, 0.0, 1e-15);
  EXPECT_NEAR(md.disp2, 0.06, 1e-14);
  EXPECT_NEAR(md.disp2, oracle_disp2, 1e-14);
}

TEST(MeanDispersion, ZeroExactlyForEigenvectors) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix h = oracle::random_hermitian(5, rng);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
    EXPECT_LT(mean_dispersion(h, Ket::normalized(es.eigenvectors().col(trial % 5))).disp2, 1e-12);
    EXPECT_GT(mean_dispersion(h, Ket::normalized(oracle::random_state(5, rng))).disp2, 1e-6);
  }
}

TEST(MeanDispersion, DimensionMismatchThrows) {
  EXPECT_THROW(mean_dispersion(identity(3), spin::up_x()), DimensionError);
}

TEST(Validation, KetAndDensityMatrix) {
  ComplexVector v(2);
  v << 1.0, 1.0;
  EXPECT_THROW(Ket{v}, InvalidArgument);
  EXPECT_THROW(Ket::normalized(ComplexVector::Zero(2)), InvalidArgument);

  ComplexMatrix not_hermitian = identity(2) / 2.0;
  not_hermitian(0, 1) = 0.1;
  EXPECT_THROW(DensityMatrix{not_hermitian}, InvalidArgument);
  EXPECT_THROW(DensityMatrix{identity(2)}, InvalidArgument);  // trace 2

  ComplexMatrix negative = ComplexMatrix::Zero(2, 2);
  negative.diagonal() << 1.1, -0.1;
  EXPECT_THROW(DensityMatrix{negative}, InvalidArgument);

  ComplexMatrix tiny_negative = ComplexMatrix::Zero(2, 2);
  tiny_negative.diagonal() << 1.0 + 5e-11, -5e-11;
  EXPECT_NO_THROW(DensityMatrix{tiny_negative});
}

}  // namespace
}  // namespace psieve
