#pragma once

#include <functional>

#include "liouflow/core.hpp"

namespace liouflow {

/// Finite system-bath composite H = H_S (x) I + I (x) H_B + V with a
/// stationary bath reference state. Composite indices are system-major:
/// (i, alpha) -> i * n_bath + alpha. hbar = 1 throughout; energies are
/// angular frequencies.
class CompositeModel {
 public:
  /// Validates shapes, hermiticity, that bath_state is a density matrix, and
  /// that it commutes with h_bath. When enforce_zero_mean_field is set, the
  /// coupling is shifted by its bath average, V -> V - Tr_B{V (I x rho_B)} (x) I,
  /// which makes P L(t) P vanish identically.
  CompositeModel(ComplexMatrix h_sys, ComplexMatrix h_bath, ComplexMatrix coupling,
                 ComplexMatrix bath_state, bool enforce_zero_mean_field = false);

  int n_sys() const { return n_sys_; }
  int n_bath() const { return n_bath_; }
  int dim() const { return n_sys_ * n_bath_; }

  const ComplexMatrix& h_sys() const { return h_sys_; }
  const ComplexMatrix& h_bath() const { return h_bath_; }
  const ComplexMatrix& coupling() const { return coupling_; }
  const ComplexMatrix& bath_state() const { return bath_state_; }

  /// Free Hamiltonian H_S (x) I + I (x) H_B on the composite.
  const ComplexMatrix& h_free() const { return h_free_; }
  /// Interaction-picture coupling V(t) = e^{i H0 t} V e^{-i H0 t}.
  ComplexMatrix coupling_at(double t) const;
  /// Spectral norm of the coupling (sets the default kernel time step).
  double coupling_norm() const { return coupling_norm_; }

 private:
  int n_sys_ = 0;
  int n_bath_ = 0;
  ComplexMatrix h_sys_, h_bath_, coupling_, bath_state_, h_free_;
  Eigen::VectorXd h_free_evals_;
  ComplexMatrix h_free_evecs_;
  double coupling_norm_ = 0.0;
};

/// Partial trace over the bath factor, (Tr_B X)(i,j) = sum_a X(ia, ja).
ComplexMatrix partial_trace_bath(const ComplexMatrix& composite, int n_sys, int n_bath);

/// Matrix of a superoperator (column-stacking convention) from its action.
ComplexMatrix superoperator_from_map(
    int dim, const std::function<ComplexMatrix(const ComplexMatrix&)>& action);

/// Relevant projector P sigma = Tr_B{sigma} (x) rho_B as a D^2 x D^2 matrix.
ComplexMatrix projector_p(const CompositeModel& model);
/// Irrelevant projector Q = I - P.
ComplexMatrix projector_q(const CompositeModel& model);

/// Interaction-picture Liouvillian L(t) sigma = -i [V(t), sigma] as a matrix.
/// With include_prefactor = false the bare commutator [V(t), .] is returned
/// (literal-formula comparisons).
ComplexMatrix interaction_liouvillian(const CompositeModel& model, double t,
                                      bool include_prefactor = true);

/// Time-ordered propagator dG/dt = Q L(t) G, G(s, s) = I, by fixed-step RK4
/// with n = ceil((t - s)/dt) uniform steps. dt <= 0 selects the default
/// 1e-3 / ||V||. Throws std::domain_error for t < s.
ComplexMatrix propagator_g(const CompositeModel& model, double t, double s,
                           double dt = 0.0);

/// Memory-kernel evaluation K(t, s) = P L(t) G(t, s) Q L(s) P together with
/// the bath-contracted divergence of the induced reduced flow.
struct KernelEvaluation {
  double t = 0.0;
  double s = 0.0;
  ComplexMatrix kernel;
  double compressibility = 0.0;  // -divergence of the reduced kernel flow
};

KernelEvaluation kernel_k(const CompositeModel& model, double t, double s,
                          double dt = 0.0);

/// Negated divergence of the equal-time reduced kernel flow
/// sigma_S -> Tr_B{K(t,t)(sigma_S (x) rho_B)}: the contraction
/// sum_{i,j,a,d,g} K[(ia),(ja); (id),(jg)] rho_B(d,g), negated. Raises
/// NumericalError if the contraction has a non-negligible imaginary part
/// (an index-convention mismatch).
double nz_compressibility(const CompositeModel& model, double t);

/// The index contraction above for an arbitrary composite superoperator;
/// exposed for convention checks.
double kernel_divergence_contraction(const ComplexMatrix& kernel,
                                     const ComplexMatrix& bath_state, int n_sys,
                                     int n_bath);

}  // namespace liouflow
