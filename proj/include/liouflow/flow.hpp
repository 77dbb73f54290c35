#pragma once

#include <functional>
#include <vector>

#include "liouflow/core.hpp"

namespace liouflow {

/// One dissipation channel: a jump operator and its nonnegative rate (1/time).
/// A term is "canonical" when the operator is traceless and unit-normalized
/// under the trace inner product; for canonical sets the flow compressibility
/// is exactly N * sum of rates.
struct LindbladTerm {
  ComplexMatrix op;
  double rate = 0.0;
};

/// Affine flow field on state coordinates: cdot(c) = linear * c + offset.
///
/// `kappa` is the (uniform) compressibility -div(cdot) = -trace(linear),
/// in units of 1/time.
struct FlowField {
  int dim = 0;  // Hilbert dimension N; coordinates have length N^2-1
  RealMatrix linear;
  RealVector offset;
  double kappa = 0.0;

  RealVector operator()(const RealVector& c) const { return linear * c + offset; }
};

/// Right-hand side of the GKSL master equation applied to one operator:
/// -i [H, sigma] + sum_a rate_a (L sigma L^dag - (L^dag L sigma + sigma L^dag L)/2).
/// Works for any square sigma (hbar = 1).
ComplexMatrix generator_rhs(const ComplexMatrix& hamiltonian,
                            const std::vector<LindbladTerm>& terms,
                            const ComplexMatrix& sigma);

/// Flow field of the Liouville-von Neumann equation sdot = -i[H, s].
/// The offset vanishes and kappa = 0 (closed dynamics is incompressible).
/// Throws std::invalid_argument for non-Hermitian H.
FlowField closed_flow(const ComplexMatrix& hamiltonian, const HermitianBasis& basis);

/// Flow field of the GKSL equation with the given dissipation channels.
/// Throws std::invalid_argument for non-Hermitian H or negative rates.
FlowField gksl_flow(const ComplexMatrix& hamiltonian,
                    const std::vector<LindbladTerm>& terms,
                    const HermitianBasis& basis);

/// Time-frozen snapshot of a GKSL flow with a time-dependent Hamiltonian:
/// evaluates H(t) and builds the affine field at that instant.
FlowField gksl_flow_at(const std::function<ComplexMatrix(double)>& hamiltonian,
                       const std::vector<LindbladTerm>& terms,
                       const HermitianBasis& basis, double t);

/// The standard two-level spin-boson flow field on Bloch coordinates:
///   xdot = -omega y - (gamma_phi + Gamma/2) x
///   ydot =  omega x - (gamma_phi + Gamma/2) y
///   zdot = -Gamma (1 + z)
/// with dephasing rate gamma_phi and relaxation rate gamma_relax (= Gamma).
/// kappa = 2 (gamma_phi + Gamma). Throws for negative rates.
FlowField spin_boson_flow(double omega, double gamma_phi, double gamma_relax);

/// Central-difference estimate of the compressibility -sum_k d cdot_k / d c_k
/// of a black-box coordinate flow at point c, with step h per coordinate.
double compressibility_numeric(const std::function<RealVector(const RealVector&)>& field,
                               const RealVector& c, double h = 1e-5);

double compressibility_numeric(const FlowField& field, const RealVector& c,
                               double h = 1e-5);

/// Black-box coordinate flow c -> coords(G(from_coords(c))) for the GKSL
/// generator; used for derivative checks that bypass the affine assembly.
std::function<RealVector(const RealVector&)> coordinate_flow(
    const ComplexMatrix& hamiltonian, const std::vector<LindbladTerm>& terms,
    const HermitianBasis& basis);

}  // namespace liouflow
