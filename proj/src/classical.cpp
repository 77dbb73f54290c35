#include "liouflow/classical.hpp"

#include <cmath>

#include "liouflow/rng.hpp"

namespace liouflow {

namespace {

void require_oscillator_params(double mass, double omega, const char* who) {
  if (mass <= 0.0 || omega <= 0.0) {
    throw std::invalid_argument(std::string(who) + ": mass and omega must be > 0");
  }
}

}  // namespace

PhaseState symmetrize(const PhaseState& state, double mass, double omega) {
  require_oscillator_params(mass, omega, "symmetrize");
  if (state.symmetrized) return state;
  const double root = std::sqrt(mass * omega);
  return {state.q * root, state.p / root, true};
}

PhaseState unsymmetrize(const PhaseState& state, double mass, double omega) {
  require_oscillator_params(mass, omega, "unsymmetrize");
  if (!state.symmetrized) return state;
  const double root = std::sqrt(mass * omega);
  return {state.q / root, state.p * root, false};
}

RealVector stack_phase(const PhaseState& state) {
  if (state.q.size() != state.p.size()) {
    throw std::invalid_argument("stack_phase: q and p must have equal length");
  }
  RealVector x(2 * state.q.size());
  x << state.q, state.p;
  return x;
}

ClassicalFlow harmonic_flow(double mass, double omega) {
  require_oscillator_params(mass, omega, "harmonic_flow");
  ClassicalFlow flow;
  flow.linear.resize(2, 2);
  flow.linear << 0.0, omega,
                 -omega, 0.0;
  flow.offset = RealVector::Zero(2);
  flow.kappa = 0.0;
  return flow;
}

ClassicalFlow damped_harmonic_flow(double mass, double omega, double gamma) {
  if (gamma < 0.0) {
    throw std::invalid_argument("damped_harmonic_flow: gamma must be >= 0");
  }
  RealMatrix damping = RealMatrix::Zero(2, 2);
  damping(1, 1) = gamma;
  return with_linear_dissipator(harmonic_flow(mass, omega), damping);
}

ClassicalFlow with_linear_dissipator(const ClassicalFlow& closed,
                                     const RealMatrix& damping) {
  if (damping.rows() != closed.dim() || damping.cols() != closed.dim()) {
    throw std::invalid_argument("with_linear_dissipator: damping has wrong dimension");
  }
  const RealMatrix sym = 0.5 * (damping + damping.transpose());
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(sym);
  if (es.eigenvalues().minCoeff() < -1e-12 * std::max(1.0, sym.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("with_linear_dissipator: damping must be positive semidefinite");
  }
  ClassicalFlow flow = closed;
  flow.linear -= damping;
  flow.kappa = -flow.linear.trace();
  return flow;
}

double PhaseGaussian::density(const RealVector& x) const {
  const RealVector d = x - mean;
  const Eigen::LLT<RealMatrix> llt(cov);
  const double quad = d.dot(llt.solve(d));
  const double log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  const double dim = double(mean.size());
  return std::exp(-0.5 * quad - 0.5 * log_det - 0.5 * dim * std::log(2.0 * M_PI));
}

void PhaseGaussian::validate() const {
  if (cov.rows() != cov.cols() || cov.rows() != mean.size()) {
    throw std::invalid_argument("PhaseGaussian: inconsistent dimensions");
  }
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(0.5 * (cov + cov.transpose()));
  if (es.eigenvalues().minCoeff() <= 0.0) {
    throw std::invalid_argument("PhaseGaussian: covariance must be positive definite");
  }
}

AffineMap classical_map(const ClassicalFlow& flow, double t) {
  return flow_exponential(flow.linear, flow.offset, t);
}

std::vector<RealVector> classical_pushforward(const std::vector<RealVector>& points,
                                              const ClassicalFlow& flow, double t) {
  const AffineMap map = classical_map(flow, t);
  std::vector<RealVector> moved;
  moved.reserve(points.size());
  for (const RealVector& x : points) moved.push_back(map(x));
  return moved;
}

double classical_density_at(const PhaseGaussian& dist0, const ClassicalFlow& flow,
                            const RealVector& x, double t) {
  const AffineMap inverse = classical_map(flow, -t);
  return std::exp(flow.kappa * t) * dist0.density(inverse(x));
}

std::vector<RealVector> sample_phase_gaussian(const PhaseGaussian& dist,
                                              std::size_t n, std::uint64_t seed) {
  dist.validate();
  const Eigen::Index dim = dist.mean.size();
  const RealMatrix chol = Eigen::LLT<RealMatrix>(dist.cov).matrixL();
  const CounterRng rng(seed);
  const std::uint64_t pairs_per_draw = (std::uint64_t(dim) + 1) / 2;

  std::vector<RealVector> points;
  points.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    RealVector z(dim);
    for (std::uint64_t j = 0; j < pairs_per_draw; ++j) {
      double z0, z1;
      rng.normal_pair(i * pairs_per_draw + j, z0, z1);
      z(2 * j) = z0;
      if (Eigen::Index(2 * j + 1) < dim) z(2 * j + 1) = z1;
    }
    points.push_back(dist.mean + chol * z);
  }
  return points;
}

ClassicalFluxRecord classical_flux_check(const ClassicalFlow& flow,
                                         const PhaseGaussian& dist0,
                                         const Eigen::Vector2d& center, double radius,
                                         double t, const ClassicalFluxOptions& opts) {
  if (flow.dim() != 2) {
    throw std::invalid_argument("classical_flux_check: flow must be two-dimensional");
  }
  if (radius <= 0.0) {
    throw std::invalid_argument("classical_flux_check: radius must be > 0");
  }

  const std::vector<RealVector> points =
      sample_phase_gaussian(dist0, opts.samples, opts.seed);
  const auto occupancy_at = [&](double when) {
    const AffineMap map = classical_map(flow, when);
    std::size_t inside = 0;
    for (const RealVector& x : points) {
      if ((RealVector(map(x)) - RealVector(center)).norm() <= radius) ++inside;
    }
    return double(inside) / double(points.size());
  };

  ClassicalFluxRecord rec;
  const double t_plus = t + opts.dt_occupancy;
  const double t_minus = std::max(0.0, t - opts.dt_occupancy);
  rec.occupancy = occupancy_at(t);
  rec.dpdt_mc = (occupancy_at(t_plus) - occupancy_at(t_minus)) / (t_plus - t_minus);

  std::vector<double> contributions(opts.quadrature_points);
  const double patch = 2.0 * M_PI * radius / double(opts.quadrature_points);
  for (int k = 0; k < opts.quadrature_points; ++k) {
    const double angle = 2.0 * M_PI * (k + 0.5) / double(opts.quadrature_points);
    const Eigen::Vector2d normal(std::cos(angle), std::sin(angle));
    const RealVector point = center + radius * normal;
    const RealVector velocity = flow(point);
    const double density = classical_density_at(dist0, flow, point, t);
    contributions[std::size_t(k)] = density * velocity.dot(RealVector(normal)) * patch;
  }
  rec.edge_flux = pairwise_sum(contributions);
  rec.discrepancy = std::abs(rec.dpdt_mc + rec.edge_flux);
  return rec;
}

}  // namespace liouflow
