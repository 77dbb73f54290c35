#include "liouflow/flow.hpp"

#include <cmath>

namespace liouflow {

namespace {

void require_hermitian(const ComplexMatrix& h, const char* who) {
  if (h.rows() != h.cols()) {
    throw std::invalid_argument(std::string(who) + ": Hamiltonian must be square");
  }
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > kStateTol * std::max(1.0, h.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument(std::string(who) + ": Hamiltonian must be Hermitian");
  }
}

void require_rates(const std::vector<LindbladTerm>& terms, int dim, const char* who) {
  for (const auto& term : terms) {
    if (term.rate < 0.0) {
      throw std::invalid_argument(std::string(who) + ": dissipation rate must be >= 0");
    }
    if (term.op.rows() != dim || term.op.cols() != dim) {
      throw std::invalid_argument(std::string(who) + ": jump operator has wrong dimension");
    }
  }
}

/// Projects the generator onto the traceless coordinate chart.
FlowField assemble_field(const ComplexMatrix& hamiltonian,
                         const std::vector<LindbladTerm>& terms,
                         const HermitianBasis& basis) {
  const int n = basis.dim();
  const int m = basis.size() - 1;
  const double sqrt_n = std::sqrt(double(n));

  FlowField field;
  field.dim = n;
  field.linear.resize(m, m);
  field.offset.resize(m);

  // cdot_k = sum_j Tr(B_k G(B_j)) c_j + Tr(B_k G(I)) / sqrt(N)
  for (int j = 1; j <= m; ++j) {
    const ComplexMatrix gen = generator_rhs(hamiltonian, terms, basis.element(j));
    for (int k = 1; k <= m; ++k) {
      field.linear(k - 1, j - 1) = trace_inner(basis.element(k), gen).real();
    }
  }
  const ComplexMatrix gen_id =
      generator_rhs(hamiltonian, terms, ComplexMatrix::Identity(n, n));
  for (int k = 1; k <= m; ++k) {
    field.offset(k - 1) = trace_inner(basis.element(k), gen_id).real() / sqrt_n;
  }
  field.kappa = -field.linear.trace();
  return field;
}

}  // namespace

ComplexMatrix generator_rhs(const ComplexMatrix& hamiltonian,
                            const std::vector<LindbladTerm>& terms,
                            const ComplexMatrix& sigma) {
  const Complex minus_i(0.0, -1.0);
  ComplexMatrix out = minus_i * (hamiltonian * sigma - sigma * hamiltonian);
  for (const auto& term : terms) {
    const ComplexMatrix& l = term.op;
    const ComplexMatrix ll = l.adjoint() * l;
    out += term.rate * (l * sigma * l.adjoint() - 0.5 * (ll * sigma + sigma * ll));
  }
  return out;
}

FlowField closed_flow(const ComplexMatrix& hamiltonian, const HermitianBasis& basis) {
  require_hermitian(hamiltonian, "closed_flow");
  return assemble_field(hamiltonian, {}, basis);
}

FlowField gksl_flow(const ComplexMatrix& hamiltonian,
                    const std::vector<LindbladTerm>& terms,
                    const HermitianBasis& basis) {
  require_hermitian(hamiltonian, "gksl_flow");
  require_rates(terms, basis.dim(), "gksl_flow");
  return assemble_field(hamiltonian, terms, basis);
}

FlowField gksl_flow_at(const std::function<ComplexMatrix(double)>& hamiltonian,
                       const std::vector<LindbladTerm>& terms,
                       const HermitianBasis& basis, double t) {
  return gksl_flow(hamiltonian(t), terms, basis);
}

FlowField spin_boson_flow(double omega, double gamma_phi, double gamma_relax) {
  if (gamma_phi < 0.0 || gamma_relax < 0.0) {
    throw std::invalid_argument("spin_boson_flow: rates must be >= 0");
  }
  const double lambda = gamma_phi + 0.5 * gamma_relax;
  FlowField field;
  field.dim = 2;
  field.linear.resize(3, 3);
  field.linear << -lambda, -omega, 0.0,
                   omega, -lambda, 0.0,
                   0.0, 0.0, -gamma_relax;
  field.offset.resize(3);
  field.offset << 0.0, 0.0, -gamma_relax;
  field.kappa = 2.0 * (gamma_phi + gamma_relax);
  return field;
}

double compressibility_numeric(const std::function<RealVector(const RealVector&)>& field,
                               const RealVector& c, double h) {
  if (h <= 0.0) {
    throw std::invalid_argument("compressibility_numeric: step must be > 0");
  }
  double div = 0.0;
  RealVector probe = c;
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    probe(k) = c(k) + h;
    const double fwd = field(probe)(k);
    probe(k) = c(k) - h;
    const double bwd = field(probe)(k);
    probe(k) = c(k);
    div += (fwd - bwd) / (2.0 * h);
  }
  return -div;
}

double compressibility_numeric(const FlowField& field, const RealVector& c, double h) {
  return compressibility_numeric(
      [&field](const RealVector& x) { return field(x); }, c, h);
}

std::function<RealVector(const RealVector&)> coordinate_flow(
    const ComplexMatrix& hamiltonian, const std::vector<LindbladTerm>& terms,
    const HermitianBasis& basis) {
  require_hermitian(hamiltonian, "coordinate_flow");
  require_rates(terms, basis.dim(), "coordinate_flow");
  const double sqrt_n = std::sqrt(double(basis.dim()));
  return [hamiltonian, terms, &basis, sqrt_n](const RealVector& c) {
    const ComplexMatrix gen = generator_rhs(hamiltonian, terms, from_coords(c, basis));
    RealVector out(c.size());
    for (Eigen::Index k = 0; k < c.size(); ++k) {
      out(k) = sqrt_n * trace_inner(basis.element(int(k) + 1), gen).real();
    }
    return out;
  };
}

}  // namespace liouflow
