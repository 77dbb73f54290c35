#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <vector>

namespace liouflow {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Tolerance for state validity checks (hermiticity, trace, positivity).
inline constexpr double kStateTol = 1e-10;
/// Tolerance for algebraic identities (orthonormality, round trips).
inline constexpr double kAlgebraTol = 1e-12;

/// Thrown when a computation leaves the valid numerical regime
/// (state drift, pathological sampling, ...), as opposed to bad input.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Orthonormal Hermitian operator basis of an N-dimensional Hilbert space.
///
/// Element 0 is Identity/sqrt(N); the remaining N^2-1 elements are traceless
/// and orthonormal under the trace inner product. For N = 2 the elements are
/// the normalized Pauli matrices in the order [I/sqrt(2), X, Y, Z] with
/// Z = diag(-1, +1)/sqrt(2), so that the ground state |0><0| has coordinate
/// z = -1. For larger N the generalized Gell-Mann construction is used:
/// symmetric off-diagonal pairs, then antisymmetric pairs, then diagonal
/// generators, each block in lexicographic (i, j) order.
class HermitianBasis {
 public:
  explicit HermitianBasis(int dim);

  int dim() const { return dim_; }
  /// Number of basis elements, dim^2.
  int size() const { return static_cast<int>(elements_.size()); }
  const ComplexMatrix& element(int k) const { return elements_.at(k); }
  const std::vector<ComplexMatrix>& elements() const { return elements_; }

 private:
  int dim_;
  std::vector<ComplexMatrix> elements_;
};

/// Diagnostics for the three density-matrix invariants at a given tolerance.
struct DensityCheck {
  double hermiticity_error = 0.0;  // max |sigma_ij - conj(sigma_ji)|
  double trace_error = 0.0;        // |Tr sigma - 1|
  double min_eigenvalue = 0.0;     // smallest eigenvalue of the Hermitian part
  bool pass = false;
};

/// Trace inner product <A, B> = Tr(A^dag B) = sum_ij conj(A_ij) B_ij.
Complex trace_inner(const ComplexMatrix& a, const ComplexMatrix& b);

/// Checks hermiticity, unit trace and positive semidefiniteness at `tol`.
/// Diagnostic only; never throws on a failing matrix.
DensityCheck check_density(const ComplexMatrix& sigma, double tol = kStateTol);

/// Throws std::invalid_argument unless check_density passes at `tol`.
void validate_density(const ComplexMatrix& sigma, double tol = kStateTol);

/// Coefficients of a Hermitian operator on all basis elements (unscaled):
/// c_k = Tr(B_k^dag A). Real for Hermitian A; expansion A = sum_k c_k B_k.
RealVector hermitian_coords(const ComplexMatrix& a, const HermitianBasis& basis);

/// State coordinates of a density matrix: the N^2-1 real coefficients on the
/// traceless basis elements, scaled by sqrt(N) so that for N = 2 they equal
/// the Bloch vector [x, y, z]. The trace coefficient is fixed at 1/sqrt(N).
/// Requires hermiticity and unit trace at `kStateTol` (positivity is not
/// required, so out-of-body coordinates round-trip exactly).
RealVector to_coords(const ComplexMatrix& sigma, const HermitianBasis& basis);

/// Inverse of to_coords: I/N + sum_k coords_k B_k / sqrt(N). Always Hermitian
/// with unit trace; positive only for coordinates inside the state body.
ComplexMatrix from_coords(const RealVector& coords, const HermitianBasis& basis);

/// Column-stacking vectorization: vec(A)[i + j*N] = A(i, j).
ComplexVector vec(const ComplexMatrix& a);

/// Inverse of vec. Throws std::invalid_argument if the length is not a
/// perfect square.
ComplexMatrix unvec(const ComplexVector& v);

/// Kronecker product, (A x B)[(i*p+k),(j*q+l)] = A(i,j) B(k,l).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace liouflow
