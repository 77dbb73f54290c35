#include "liouflow/core.hpp"

#include <cmath>

namespace liouflow {

namespace {

ComplexMatrix matrix_unit(int dim, int r, int c) {
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  m(r, c) = 1.0;
  return m;
}

}  // namespace

HermitianBasis::HermitianBasis(int dim) : dim_(dim) {
  if (dim < 2) {
    throw std::invalid_argument("HermitianBasis: dimension must be >= 2");
  }
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  elements_.reserve(static_cast<std::size_t>(dim) * dim);

  elements_.push_back(ComplexMatrix::Identity(dim, dim) / std::sqrt(double(dim)));

  // Symmetric off-diagonal generators, (|i><j| + |j><i|)/sqrt(2).
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      ComplexMatrix m = matrix_unit(dim, i, j) + matrix_unit(dim, j, i);
      elements_.push_back(m * inv_sqrt2);
    }
  }
  // Antisymmetric generators, -i(|i><j| - |j><i|)/sqrt(2).
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      ComplexMatrix m = matrix_unit(dim, i, j) - matrix_unit(dim, j, i);
      elements_.push_back(Complex(0.0, -1.0) * m * inv_sqrt2);
    }
  }
  // Diagonal generators. Signs are chosen so that for N = 2 the single
  // diagonal element is diag(-1, +1)/sqrt(2), putting the ground state
  // |0><0| at coordinate -1.
  for (int l = 1; l < dim; ++l) {
    ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
    for (int j = 0; j < l; ++j) m(j, j) = -1.0;
    m(l, l) = static_cast<double>(l);
    elements_.push_back(m / std::sqrt(double(l) * (l + 1)));
  }
}

Complex trace_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw std::invalid_argument("trace_inner: operands must be square and of equal dimension");
  }
  return (a.adjoint() * b).trace();
}

DensityCheck check_density(const ComplexMatrix& sigma, double tol) {
  if (sigma.rows() != sigma.cols()) {
    throw std::invalid_argument("check_density: matrix must be square");
  }
  DensityCheck out;
  out.hermiticity_error = (sigma - sigma.adjoint()).cwiseAbs().maxCoeff();
  out.trace_error = std::abs(sigma.trace() - Complex(1.0, 0.0));
  ComplexMatrix herm = 0.5 * (sigma + sigma.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm);
  out.min_eigenvalue = es.eigenvalues().minCoeff();
  out.pass = out.hermiticity_error <= tol && out.trace_error <= tol &&
             out.min_eigenvalue >= -tol;
  return out;
}

void validate_density(const ComplexMatrix& sigma, double tol) {
  DensityCheck chk = check_density(sigma, tol);
  if (!chk.pass) {
    throw std::invalid_argument("validate_density: matrix is not a valid density matrix");
  }
}

RealVector hermitian_coords(const ComplexMatrix& a, const HermitianBasis& basis) {
  if (a.rows() != basis.dim() || a.cols() != basis.dim()) {
    throw std::invalid_argument("hermitian_coords: dimension mismatch with basis");
  }
  RealVector coords(basis.size());
  for (int k = 0; k < basis.size(); ++k) {
    coords(k) = trace_inner(basis.element(k), a).real();
  }
  return coords;
}

RealVector to_coords(const ComplexMatrix& sigma, const HermitianBasis& basis) {
  const int n = basis.dim();
  if (sigma.rows() != n || sigma.cols() != n) {
    throw std::invalid_argument("to_coords: dimension mismatch with basis");
  }
  const double herm_err = (sigma - sigma.adjoint()).cwiseAbs().maxCoeff();
  const double trace_err = std::abs(sigma.trace() - Complex(1.0, 0.0));
  if (herm_err > kStateTol || trace_err > kStateTol) {
    throw std::invalid_argument("to_coords: input is not Hermitian with unit trace");
  }
  const double scale = std::sqrt(double(n));
  RealVector coords(basis.size() - 1);
  for (int k = 1; k < basis.size(); ++k) {
    coords(k - 1) = scale * trace_inner(basis.element(k), sigma).real();
  }
  return coords;
}

ComplexMatrix from_coords(const RealVector& coords, const HermitianBasis& basis) {
  const int n = basis.dim();
  if (coords.size() != basis.size() - 1) {
    throw std::invalid_argument("from_coords: coordinate vector has wrong length");
  }
  ComplexMatrix sigma = ComplexMatrix::Identity(n, n) / double(n);
  const double scale = 1.0 / std::sqrt(double(n));
  for (int k = 1; k < basis.size(); ++k) {
    sigma += scale * coords(k - 1) * basis.element(k);
  }
  return sigma;
}

ComplexVector vec(const ComplexMatrix& a) {
  return Eigen::Map<const ComplexVector>(a.data(), a.size());
}

ComplexMatrix unvec(const ComplexVector& v) {
  const auto len = v.size();
  const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(double(len))));
  if (n * n != len) {
    throw std::invalid_argument("unvec: length is not a perfect square");
  }
  return Eigen::Map<const ComplexMatrix>(v.data(), n, n);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace liouflow
