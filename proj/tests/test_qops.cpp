// Copyright 2026 The Somrep Authors
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "somrep/qops.hpp"
#include "somrep/spinmech.hpp"

using namespace somrep;
using namespace somrep::qops;

namespace {

Matrix pauli_x() {
  Matrix s(2, 2);
  s << 0, 1, 1, 0;
  return s;
}

Matrix projector(Eigen::Index dim, Eigen::Index k) { return ket_bra(dim, k, k); }

}  // namespace

TEST_CASE("kron basics") {
  const Matrix i2 = identity(2);
  CHECK((kron(i2, i2) - identity(4)).norm() == doctest::Approx(0.0));

  Matrix d(2, 2);
  d << 1, 0, 0, 0;
  Matrix expect = Matrix::Zero(4, 4);
  expect(0, 0) = 1.0;
  CHECK((kron(d, d) - expect).norm() == doctest::Approx(0.0));

  // (sigma_x kron sigma_x) |00> = |11>
  Vector v00 = Vector::Zero(4);
  v00(0) = 1.0;
  Vector flipped = kron(pauli_x(), pauli_x()) * v00;
  CHECK(std::abs(flipped(3) - Complex(1.0, 0.0)) < 1e-15);
  CHECK(flipped.head(3).norm() < 1e-15);
}

TEST_CASE("dissipator ladder algebra") {
  const Matrix sm = destroy(2);
  LindbladTerm decay{1.0, sm};

  Matrix excited = projector(2, 1);
  Matrix out = dissipator_apply(decay, excited);
  Matrix expect = projector(2, 0) - projector(2, 1);
  CHECK((out - expect).norm() < 1e-14);

  Matrix ground = projector(2, 0);
  CHECK(dissipator_apply(decay, ground).norm() < 1e-15);

  const Matrix a3 = destroy(3);
  Matrix two = projector(3, 2);
  Matrix out3 = dissipator_apply(LindbladTerm{1.0, a3}, two);
  Matrix expect3 = 2.0 * projector(3, 1) - 2.0 * projector(3, 2);
  CHECK((out3 - expect3).norm() < 1e-14);

  CHECK(std::abs(out3.trace()) < 1e-12);  // trace-free generator
}

TEST_CASE("liouvillian of the closed trivial system is zero") {
  Matrix h = Matrix::Zero(3, 3);
  CHECK(build_liouvillian(h, {}).norm() == doctest::Approx(0.0));
}

TEST_CASE("unitary coherence rotation preserves magnitude") {
  const double omega = 2.0;
  Matrix h = omega * projector(2, 1);
  const Matrix l = build_liouvillian(h, {});
  Matrix rho(2, 2);
  rho << 0.5, 0.5, 0.5, 0.5;
  const double t = 0.77;
  DensityMatrix out = propagate(l, {rho, true}, t);
  // <0|rho|1> rotates by exp(i omega t) at constant magnitude.
  const Complex expected = 0.5 * std::exp(Complex(0.0, omega * t));
  CHECK(std::abs(out.rho(0, 1) - expected) < 1e-12);
  CHECK(std::abs(std::abs(out.rho(0, 1)) - 0.5) < 1e-12);
}

TEST_CASE("four-level node generator has a zero mode") {
  // Single-excitation truncation of the heralding node: basis
  // {|0,0>, |D,0>, |B,0>, |D,1>} with the operating-point rates.
  const double kappa1 = kTwoPi * 2e4;
  const double omega = 0.5 * kappa1;
  const Matrix a = ket_bra(4, 1, 3);        // |D,0><D,1|
  const Matrix sm = ket_bra(4, 1, 2);       // |D,0><B,0|
  const Matrix coupling = ket_bra(4, 3, 2); // a^+ sigma_- -> |D,1><B,0|
  Matrix sz = -identity(4);
  sz(2, 2) = 1.0;

  Matrix h = omega * (coupling + coupling.adjoint());
  h += omega * projector(4, 2) + omega * projector(4, 3);  // level shifts
  std::vector<LindbladTerm> terms = {{kappa1, a},
                                     {0.01 * kappa1, sz},
                                     {1e-3 * kappa1, sm},
                                     {1e-3 * kappa1, sm.adjoint()}};
  const Matrix l = build_liouvillian(h, terms);
  Eigen::ComplexEigenSolver<Matrix> es(l);
  double max_re = -1e300;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    max_re = std::max(max_re, es.eigenvalues()(i).real());
  CHECK(std::abs(max_re) < 1e-9 * kappa1);
}

TEST_CASE("propagate: identity at t = 0 and analytic cavity decay") {
  const double kappa = 3.0;
  const Matrix a = destroy(3);
  const Matrix l =
      build_liouvillian(Matrix::Zero(3, 3), {{kappa, a}});
  Matrix rho0 = projector(3, 1);

  DensityMatrix same = propagate(l, {rho0, true}, 0.0);
  CHECK((same.rho - rho0).norm() < 1e-14);

  const Matrix num = a.adjoint() * a;
  for (double t : {0.1, 0.5, 1.3}) {
    DensityMatrix out = propagate(l, {rho0, true}, t);
    CHECK(expectation(num, out.rho) ==
          doctest::Approx(std::exp(-kappa * t)).epsilon(1e-8));
  }
}

TEST_CASE("semigroup property of the cached propagator") {
  const Matrix a = destroy(2);
  Matrix h = 1.7 * projector(2, 1);
  const Matrix l = build_liouvillian(h, {{0.8, a}});
  Matrix rho(2, 2);
  rho << 0.25, 0.3, 0.3, 0.75;
  DensityMatrix full = propagate(l, {rho, true}, 1.0);
  DensityMatrix half = propagate(l, propagate(l, {rho, true}, 0.5), 0.5);
  CHECK((full.rho - half.rho).norm() < 1e-9);
}

TEST_CASE("steady states") {
  SUBCASE("pure decay lands in the ground state") {
    const Matrix l =
        build_liouvillian(Matrix::Zero(2, 2), {{1.0, destroy(2)}});
    DensityMatrix ss = steady_state(l);
    CHECK((ss.rho - projector(2, 0)).norm() < 1e-10);
  }
  SUBCASE("balanced flip-flop is maximally mixed") {
    const Matrix sm = destroy(2);
    const Matrix l = build_liouvillian(
        Matrix::Zero(2, 2), {{0.7, sm}, {0.7, sm.adjoint()}});
    DensityMatrix ss = steady_state(l);
    CHECK((ss.rho - 0.5 * identity(2)).norm() < 1e-10);
  }
  SUBCASE("thermally driven cavity occupation") {
    // Decay kappa1 against incoherent pumping kappa2: the mean
    // occupation is kappa2/(kappa1 - kappa2) once the Fock space is
    // deep enough for the geometric tail to vanish.
    const double kappa1 = 1.0, kappa2 = 1e-3;
    const Eigen::Index levels = 8;
    const Matrix a = destroy(levels);
    const Matrix l = build_liouvillian(
        Matrix::Zero(levels, levels), {{kappa1, a}, {kappa2, a.adjoint()}});
    DensityMatrix ss = steady_state(l);
    const double n = expectation(a.adjoint() * a, ss.rho);
    CHECK(std::abs(n - kappa2 / (kappa1 - kappa2)) < 1e-10);
  }
  SUBCASE("degenerate kernel is reported, not picked") {
    // Two disconnected two-level systems -> two independent steady states.
    Matrix h = Matrix::Zero(2, 2);
    CHECK_THROWS_AS(steady_state(build_liouvillian(h, {})), NumericalError);
  }
}

TEST_CASE("propagation invariants on random dissipative systems") {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_matrix = [&](Eigen::Index d) {
    Matrix m(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j)
        m(i, j) = Complex(gauss(rng), gauss(rng));
    return m;
  };

  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::Index d = 2 + trial % 3;
    Matrix h = random_matrix(d);
    h = 0.5 * (h + h.adjoint()).eval();
    std::vector<LindbladTerm> terms = {{0.5, random_matrix(d)},
                                       {0.25, random_matrix(d)}};
    const Matrix l = build_liouvillian(h, terms);

    Matrix g = random_matrix(d);
    Matrix rho = g * g.adjoint();
    rho /= rho.trace();

    DensityMatrix state{rho, true};
    for (double t : {0.05, 0.4, 2.0}) {
      DensityMatrix out = propagate(l, state, t);
      CHECK(std::abs(out.trace() - 1.0) < 1e-9);
      CHECK((out.rho - out.rho.adjoint()).norm() < 1e-10);
      CHECK(min_eigenvalue(out.rho) > -1e-8);
      out.validate(1e-8);
    }

    // Linearity of the propagator.
    Matrix g2 = random_matrix(d);
    Matrix rho2 = g2 * g2.adjoint();
    rho2 /= rho2.trace();
    const double t = 0.3;
    Matrix lhs =
        propagate(l, {Matrix(0.6 * rho + 0.4 * rho2), true}, t).rho;
    Matrix rhs = 0.6 * propagate(l, {rho, true}, t).rho +
                 0.4 * propagate(l, {rho2, true}, t).rho;
    CHECK((lhs - rhs).norm() < 1e-10);
  }
}

TEST_CASE("partial trace keeps the right marginals") {
  Matrix ra(2, 2), rb(3, 3);
  ra << 0.7, 0.1, 0.1, 0.3;
  rb = Matrix::Zero(3, 3);
  rb(0, 0) = 0.5;
  rb(1, 1) = 0.25;
  rb(2, 2) = 0.25;
  const Matrix composite = kron(ra, rb);
  CHECK((partial_trace(composite, 2, 3, 0) - ra).norm() < 1e-14);
  CHECK((partial_trace(composite, 2, 3, 1) - rb).norm() < 1e-14);
}

TEST_CASE("integrated expectation matches the analytic decay integral") {
  const double kappa = 2.0;
  const Matrix a = destroy(2);
  const Matrix l = build_liouvillian(Matrix::Zero(2, 2), {{kappa, a}});
  DensityMatrix excited{projector(2, 1), true};
  const double T = 1.5;
  const double integral =
      integrate_expectation(l, excited, a.adjoint() * a, T, 200);
  CHECK(integral ==
        doctest::Approx((1.0 - std::exp(-kappa * T)) / kappa).epsilon(1e-8));
}
