#include <doctest.h>

#include "liouflow/core.hpp"
#include "liouflow/trajectory.hpp"
#include "support/random_inputs.hpp"

using namespace liouflow;

namespace {

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m / std::sqrt(2.0);
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return m / std::sqrt(2.0);
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << -1, 0, 0, 1;
  return m / std::sqrt(2.0);
}

}  // namespace

TEST_SUITE("core") {

TEST_CASE("two-level basis is the normalized Pauli set") {
  const HermitianBasis basis(2);
  REQUIRE(basis.size() == 4);
  CHECK((basis.element(0) - ComplexMatrix::Identity(2, 2) / std::sqrt(2.0)).norm() < 1e-15);
  CHECK((basis.element(1) - pauli_x()).norm() < 1e-15);
  CHECK((basis.element(2) - pauli_y()).norm() < 1e-15);
  CHECK((basis.element(3) - pauli_z()).norm() < 1e-15);
}

TEST_CASE("basis orthonormality for N = 2, 3, 4") {
  for (int n : {2, 3, 4}) {
    const HermitianBasis basis(n);
    REQUIRE(basis.size() == n * n);
    for (int i = 0; i < basis.size(); ++i) {
      CHECK((basis.element(i) - basis.element(i).adjoint()).norm() < 1e-14);
      if (i > 0) CHECK(std::abs(basis.element(i).trace()) < 1e-14);
      for (int j = 0; j < basis.size(); ++j) {
        const double expected = i == j ? 1.0 : 0.0;
        CHECK(std::abs(trace_inner(basis.element(i), basis.element(j)) - expected) <= 1e-12);
      }
    }
  }
}

TEST_CASE("basis rejects dimension below two") {
  CHECK_THROWS_AS(HermitianBasis(1), std::invalid_argument);
  CHECK_THROWS_AS(HermitianBasis(0), std::invalid_argument);
}

TEST_CASE("trace inner product basics") {
  const HermitianBasis basis(2);
  CHECK(std::abs(trace_inner(basis.element(1), basis.element(1)) - 1.0) < 1e-15);
  CHECK(std::abs(trace_inner(basis.element(1), basis.element(2))) < 1e-15);

  // Identity component of any unit-trace matrix is 1/sqrt(2).
  const CounterRng rng(11);
  std::uint64_t counter = 0;
  const ComplexMatrix sigma = testgen::density(rng, counter, 2);
  CHECK(std::abs(trace_inner(basis.element(0), sigma) - 1.0 / std::sqrt(2.0)) < 1e-14);

  const ComplexMatrix a = testgen::complex_gaussian(rng, counter, 3);
  const ComplexMatrix b = testgen::complex_gaussian(rng, counter, 3);
  CHECK(std::abs(trace_inner(a, b) - std::conj(trace_inner(b, a))) < 1e-13);

  CHECK_THROWS_AS(trace_inner(a, ComplexMatrix::Identity(2, 2)), std::invalid_argument);
}

TEST_CASE("to_coords pins the Bloch conventions") {
  const HermitianBasis basis(2);

  ComplexMatrix ground = ComplexMatrix::Zero(2, 2);
  ground(0, 0) = 1.0;  // |1><1|
  const RealVector ground_coords = to_coords(ground, basis);
  CHECK(ground_coords.isApprox(Eigen::Vector3d(0, 0, -1), 1e-14));

  const RealVector mixed = to_coords(ComplexMatrix::Identity(2, 2) / 2.0, basis);
  CHECK(mixed.norm() < 1e-15);

  ComplexMatrix plus(2, 2);  // (|1>+|2>)(<1|+<2|)/2
  plus << 0.5, 0.5, 0.5, 0.5;
  CHECK(to_coords(plus, basis).isApprox(Eigen::Vector3d(1, 0, 0), 1e-14));

  ComplexMatrix skew(2, 2);
  skew << 0.5, 0.3, -0.3, 0.5;
  CHECK_THROWS_AS(to_coords(skew, basis), std::invalid_argument);
}

TEST_CASE("from_coords pins the inverse map") {
  const HermitianBasis basis(2);

  CHECK((from_coords(Eigen::Vector3d(0, 0, 0), basis) -
         ComplexMatrix::Identity(2, 2) / 2.0)
            .norm() < 1e-15);

  ComplexMatrix excited = ComplexMatrix::Zero(2, 2);
  excited(1, 1) = 1.0;  // |2><2|
  CHECK((from_coords(Eigen::Vector3d(0, 0, 1), basis) - excited).norm() < 1e-15);

  // Out-of-body coordinates still give Hermitian unit trace, but not positive.
  const ComplexMatrix outside = from_coords(Eigen::Vector3d(2, 0, 0), basis);
  CHECK(std::abs(outside.trace() - Complex(1, 0)) < 1e-15);
  CHECK((outside - outside.adjoint()).norm() < 1e-15);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(outside);
  CHECK(es.eigenvalues().minCoeff() < -1e-3);
}

TEST_CASE("round trip is the identity on valid states") {
  const CounterRng rng(21);
  std::uint64_t counter = 0;
  for (int n : {2, 3, 4}) {
    const HermitianBasis basis(n);
    for (int rep = 0; rep < 20; ++rep) {
      const ComplexMatrix sigma = testgen::density(rng, counter, n);
      const RealVector coords = to_coords(sigma, basis);
      CHECK((from_coords(coords, basis) - sigma).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK((to_coords(from_coords(coords, basis), basis) - coords).cwiseAbs().maxCoeff() <=
            1e-12);
    }
  }
}

TEST_CASE("coordinate isometry: trace inner product = dot(coords)/N") {
  const CounterRng rng(31);
  std::uint64_t counter = 0;
  for (int n : {2, 3, 4}) {
    const HermitianBasis basis(n);
    const double scale = std::sqrt(double(n));
    for (int rep = 0; rep < 10; ++rep) {
      ComplexMatrix a = testgen::hermitian(rng, counter, n);
      ComplexMatrix b = testgen::hermitian(rng, counter, n);
      a -= (a.trace() / double(n)) * ComplexMatrix::Identity(n, n);
      b -= (b.trace() / double(n)) * ComplexMatrix::Identity(n, n);
      RealVector ca = scale * hermitian_coords(a, basis).tail(n * n - 1);
      RealVector cb = scale * hermitian_coords(b, basis).tail(n * n - 1);
      CHECK(trace_inner(a, b).real() == doctest::Approx(ca.dot(cb) / double(n)).epsilon(1e-12));
    }
  }
}

TEST_CASE("vec follows column stacking and the Kronecker identity") {
  ComplexVector id_vec = vec(ComplexMatrix::Identity(2, 2));
  CHECK((id_vec - ComplexVector(Eigen::Vector4cd(1, 0, 0, 1))).norm() < 1e-15);

  const CounterRng rng(41);
  std::uint64_t counter = 0;
  const ComplexMatrix a3 = testgen::complex_gaussian(rng, counter, 3);
  CHECK((unvec(vec(a3)) - a3).norm() == 0.0);

  for (int n : {2, 3}) {
    const ComplexMatrix x = testgen::complex_gaussian(rng, counter, n);
    const ComplexMatrix a = testgen::complex_gaussian(rng, counter, n);
    const ComplexMatrix y = testgen::complex_gaussian(rng, counter, n);
    const ComplexVector lhs = vec(x * a * y);
    const ComplexVector rhs = kron(y.transpose(), x) * vec(a);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
  }

  CHECK_THROWS_AS(unvec(ComplexVector::Zero(5)), std::invalid_argument);
}

TEST_CASE("check_density diagnostics") {
  const DensityCheck good = check_density(ComplexMatrix::Identity(2, 2) / 2.0);
  CHECK(good.pass);
  CHECK(good.min_eigenvalue == doctest::Approx(0.5));

  ComplexMatrix bad(2, 2);
  bad << 1.5, 0, 0, -0.5;
  const DensityCheck chk = check_density(bad);
  CHECK_FALSE(chk.pass);
  CHECK(chk.trace_error < 1e-15);
  CHECK(chk.min_eigenvalue == doctest::Approx(-0.5));
}

TEST_CASE("spin-boson endpoint at t = 10/Gamma is a valid state") {
  const double omega = 1.0;
  const double gamma = omega / 3.0;
  const HermitianBasis basis(2);
  const FlowField field = spin_boson_flow(omega, gamma, gamma);
  const Trajectory traj =
      integrate(field, basis, Eigen::Vector3d(0, 0, 1), 10.0 / gamma, 1e-3 / omega);
  const DensityCheck chk = check_density(from_coords(traj.points.back(), basis));
  CHECK(chk.pass);
}

}  // TEST_SUITE
