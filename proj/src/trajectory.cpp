#include "liouflow/trajectory.hpp"

#include <cmath>

#include "liouflow/affine.hpp"

namespace liouflow {

namespace {

constexpr double kDriftTol = 1e-6;

RealVector rk4_step(const FlowField& field, const RealVector& c, double h) {
  const RealVector k1 = field(c);
  const RealVector k2 = field(c + 0.5 * h * k1);
  const RealVector k3 = field(c + 0.5 * h * k2);
  const RealVector k4 = field(c + h * k3);
  return c + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

void check_integration_inputs(const FlowField& field, const RealVector& c0,
                              double t_end, double dt) {
  if (t_end < 0.0) {
    throw std::domain_error("integrate: t_end must be >= 0");
  }
  if (dt <= 0.0) {
    throw std::invalid_argument("integrate: dt must be > 0");
  }
  if (c0.size() != field.linear.rows()) {
    throw std::invalid_argument("integrate: initial coordinates have wrong length");
  }
}

}  // namespace

Trajectory integrate(const FlowField& field, const HermitianBasis& basis,
                     const RealVector& c0, double t_end, double dt) {
  check_integration_inputs(field, c0, t_end, dt);

  Trajectory traj;
  const auto n_full = static_cast<std::size_t>(std::floor(t_end / dt + 1e-12));
  const double remainder = t_end - double(n_full) * dt;
  traj.times.reserve(n_full + 2);
  traj.points.reserve(n_full + 2);

  double t = 0.0;
  RealVector c = c0;
  traj.times.push_back(t);
  traj.points.push_back(c);
  for (std::size_t step = 0; step < n_full; ++step) {
    c = rk4_step(field, c, dt);
    t = double(step + 1) * dt;
    traj.times.push_back(t);
    traj.points.push_back(c);
  }
  if (remainder > 1e-12 * dt) {
    c = rk4_step(field, c, remainder);
    traj.times.push_back(t_end);
    traj.points.push_back(c);
  }

  for (const RealVector& point : traj.points) {
    if (!check_density(from_coords(point, basis), kDriftTol).pass) {
      throw NumericalError("integrate: trajectory drifted outside the state body");
    }
  }
  return traj;
}

RealVector integrate_endpoint(const FlowField& field, const RealVector& c0,
                              double t_end, double dt) {
  check_integration_inputs(field, c0, t_end, dt);
  const auto n_full = static_cast<std::size_t>(std::floor(t_end / dt + 1e-12));
  const double remainder = t_end - double(n_full) * dt;
  RealVector c = c0;
  for (std::size_t step = 0; step < n_full; ++step) {
    c = rk4_step(field, c, dt);
  }
  if (remainder > 1e-12 * dt) {
    c = rk4_step(field, c, remainder);
  }
  return c;
}

Eigen::Vector3d spin_boson_analytic(const Eigen::Vector3d& c0, double omega,
                                    double gamma_phi, double gamma_relax, double t) {
  if (t < 0.0) {
    throw std::domain_error("spin_boson_analytic: t must be >= 0");
  }
  return spin_boson_map(omega, gamma_phi, gamma_relax, t)(c0);
}

double purity(const ComplexMatrix& sigma) {
  return (sigma * sigma).trace().real();
}

}  // namespace liouflow
