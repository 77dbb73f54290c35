#include "liouflow/nonmarkovian.hpp"

#include <cmath>

namespace liouflow {

namespace {

void require_square_hermitian(const ComplexMatrix& m, const char* name) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument(std::string("CompositeModel: ") + name + " must be square");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw std::invalid_argument(std::string("CompositeModel: ") + name + " must be Hermitian");
  }
}

}  // namespace

CompositeModel::CompositeModel(ComplexMatrix h_sys, ComplexMatrix h_bath,
                               ComplexMatrix coupling, ComplexMatrix bath_state,
                               bool enforce_zero_mean_field)
    : h_sys_(std::move(h_sys)),
      h_bath_(std::move(h_bath)),
      coupling_(std::move(coupling)),
      bath_state_(std::move(bath_state)) {
  require_square_hermitian(h_sys_, "h_sys");
  require_square_hermitian(h_bath_, "h_bath");
  require_square_hermitian(coupling_, "coupling");
  n_sys_ = int(h_sys_.rows());
  n_bath_ = int(h_bath_.rows());
  if (coupling_.rows() != dim()) {
    throw std::invalid_argument("CompositeModel: coupling must act on the composite space");
  }
  if (bath_state_.rows() != n_bath_ || bath_state_.cols() != n_bath_) {
    throw std::invalid_argument("CompositeModel: bath_state must act on the bath space");
  }
  validate_density(bath_state_);
  if ((h_bath_ * bath_state_ - bath_state_ * h_bath_).cwiseAbs().maxCoeff() >
      1e-10 * std::max(1.0, h_bath_.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("CompositeModel: bath_state must be stationary under h_bath");
  }

  if (enforce_zero_mean_field) {
    const ComplexMatrix bath_weight =
        kron(ComplexMatrix::Identity(n_sys_, n_sys_), bath_state_);
    const ComplexMatrix mean_field =
        partial_trace_bath(coupling_ * bath_weight, n_sys_, n_bath_);
    coupling_ -= kron(mean_field, ComplexMatrix::Identity(n_bath_, n_bath_));
  }

  h_free_ = kron(h_sys_, ComplexMatrix::Identity(n_bath_, n_bath_)) +
            kron(ComplexMatrix::Identity(n_sys_, n_sys_), h_bath_);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h_free_);
  h_free_evals_ = es.eigenvalues();
  h_free_evecs_ = es.eigenvectors();

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> vs(coupling_);
  coupling_norm_ = vs.eigenvalues().cwiseAbs().maxCoeff();
}

ComplexMatrix CompositeModel::coupling_at(double t) const {
  if (t == 0.0) return coupling_;
  const ComplexVector phase =
      (Complex(0.0, 1.0) * t * h_free_evals_.cast<Complex>()).array().exp();
  const ComplexMatrix rotate = h_free_evecs_ * phase.asDiagonal() * h_free_evecs_.adjoint();
  return rotate * coupling_ * rotate.adjoint();
}

ComplexMatrix partial_trace_bath(const ComplexMatrix& composite, int n_sys, int n_bath) {
  if (composite.rows() != Eigen::Index(n_sys) * n_bath || composite.rows() != composite.cols()) {
    throw std::invalid_argument("partial_trace_bath: dimension mismatch");
  }
  ComplexMatrix reduced = ComplexMatrix::Zero(n_sys, n_sys);
  for (int i = 0; i < n_sys; ++i) {
    for (int j = 0; j < n_sys; ++j) {
      Complex acc = 0.0;
      for (int a = 0; a < n_bath; ++a) {
        acc += composite(i * n_bath + a, j * n_bath + a);
      }
      reduced(i, j) = acc;
    }
  }
  return reduced;
}

ComplexMatrix superoperator_from_map(
    int dim, const std::function<ComplexMatrix(const ComplexMatrix&)>& action) {
  ComplexMatrix super(dim * dim, dim * dim);
  ComplexMatrix unit = ComplexMatrix::Zero(dim, dim);
  for (int c = 0; c < dim; ++c) {
    for (int r = 0; r < dim; ++r) {
      unit(r, c) = 1.0;
      super.col(r + c * dim) = vec(action(unit));
      unit(r, c) = 0.0;
    }
  }
  return super;
}

ComplexMatrix projector_p(const CompositeModel& model) {
  const int ns = model.n_sys();
  const int nb = model.n_bath();
  return superoperator_from_map(model.dim(), [&](const ComplexMatrix& sigma) {
    return kron(partial_trace_bath(sigma, ns, nb), model.bath_state());
  });
}

ComplexMatrix projector_q(const CompositeModel& model) {
  const int d2 = model.dim() * model.dim();
  return ComplexMatrix::Identity(d2, d2) - projector_p(model);
}

ComplexMatrix interaction_liouvillian(const CompositeModel& model, double t,
                                      bool include_prefactor) {
  const int d = model.dim();
  const ComplexMatrix v_t = model.coupling_at(t);
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  ComplexMatrix commutator = kron(id, v_t) - kron(v_t.transpose(), id);
  if (include_prefactor) commutator *= Complex(0.0, -1.0);
  return commutator;
}

ComplexMatrix propagator_g(const CompositeModel& model, double t, double s, double dt) {
  if (t < s) {
    throw std::domain_error("propagator_g: requires t >= s");
  }
  const int d2 = model.dim() * model.dim();
  ComplexMatrix g = ComplexMatrix::Identity(d2, d2);
  if (t == s) return g;

  if (dt <= 0.0) {
    dt = model.coupling_norm() > 0.0 ? 1e-3 / model.coupling_norm() : (t - s);
  }
  const auto steps = std::max<std::size_t>(1, std::size_t(std::ceil((t - s) / dt - 1e-12)));
  const double h = (t - s) / double(steps);

  const ComplexMatrix q = projector_q(model);
  const auto rhs = [&](double when, const ComplexMatrix& current) -> ComplexMatrix {
    return q * (interaction_liouvillian(model, when) * current);
  };

  double when = s;
  for (std::size_t step = 0; step < steps; ++step) {
    const ComplexMatrix k1 = rhs(when, g);
    const ComplexMatrix k2 = rhs(when + 0.5 * h, g + 0.5 * h * k1);
    const ComplexMatrix k3 = rhs(when + 0.5 * h, g + 0.5 * h * k2);
    const ComplexMatrix k4 = rhs(when + h, g + h * k3);
    g += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    when = s + double(step + 1) * h;
  }
  return g;
}

KernelEvaluation kernel_k(const CompositeModel& model, double t, double s, double dt) {
  if (t < s) {
    throw std::domain_error("kernel_k: requires t >= s");
  }
  const ComplexMatrix p = projector_p(model);
  const ComplexMatrix q = projector_q(model);
  const ComplexMatrix l_t = interaction_liouvillian(model, t);
  const ComplexMatrix l_s = (t == s) ? l_t : interaction_liouvillian(model, s);

  KernelEvaluation eval;
  eval.t = t;
  eval.s = s;
  if (t == s) {
    eval.kernel = p * l_t * q * l_s * p;
  } else {
    eval.kernel = p * l_t * propagator_g(model, t, s, dt) * q * l_s * p;
  }
  eval.compressibility = kernel_divergence_contraction(eval.kernel, model.bath_state(),
                                                       model.n_sys(), model.n_bath());
  return eval;
}

double kernel_divergence_contraction(const ComplexMatrix& kernel,
                                     const ComplexMatrix& bath_state, int n_sys,
                                     int n_bath) {
  const int d = n_sys * n_bath;
  if (kernel.rows() != Eigen::Index(d) * d || kernel.rows() != kernel.cols()) {
    throw std::invalid_argument("kernel_divergence_contraction: dimension mismatch");
  }
  Complex divergence = 0.0;
  for (int i = 0; i < n_sys; ++i) {
    for (int j = 0; j < n_sys; ++j) {
      for (int a = 0; a < n_bath; ++a) {
        const int row = (i * n_bath + a) + (j * n_bath + a) * d;
        for (int dlt = 0; dlt < n_bath; ++dlt) {
          for (int gma = 0; gma < n_bath; ++gma) {
            const int col = (i * n_bath + dlt) + (j * n_bath + gma) * d;
            divergence += kernel(row, col) * bath_state(dlt, gma);
          }
        }
      }
    }
  }
  if (std::abs(divergence.imag()) > 1e-8 * std::max(1.0, std::abs(divergence))) {
    throw NumericalError(
        "kernel_divergence_contraction: contraction is not real; index convention mismatch");
  }
  return -divergence.real();
}

double nz_compressibility(const CompositeModel& model, double t) {
  return kernel_k(model, t, t).compressibility;
}

}  // namespace liouflow
