#pragma once

#include <vector>

#include "liouflow/flow.hpp"

namespace liouflow {

/// A propagated state-space trajectory: sampled times (starting at 0,
/// strictly increasing) and the state coordinates at each time.
struct Trajectory {
  std::vector<double> times;
  std::vector<RealVector> points;
};

/// Fixed-step RK4 integration of cdot = field(c) from c0 over [0, t_end],
/// recording every step (plus a final partial step landing exactly on t_end).
/// Each recorded point is validated through from_coords/check_density;
/// drift beyond 1e-6 raises NumericalError. Throws std::domain_error for
/// t_end < 0 and std::invalid_argument for dt <= 0.
Trajectory integrate(const FlowField& field, const HermitianBasis& basis,
                     const RealVector& c0, double t_end, double dt);

/// Endpoint-only RK4 propagation (no per-step recording or validation).
RealVector integrate_endpoint(const FlowField& field, const RealVector& c0,
                              double t_end, double dt);

/// Closed-form spin-boson solution on Bloch coordinates: the transverse
/// components rotate counterclockwise by omega*t while contracting with rate
/// gamma_phi + gamma_relax/2, and z relaxes toward -1 with rate gamma_relax.
/// [0, 0, -1] is the fixed point. Throws std::domain_error for t < 0.
Eigen::Vector3d spin_boson_analytic(const Eigen::Vector3d& c0, double omega,
                                    double gamma_phi, double gamma_relax, double t);

/// Tr(sigma^2); 1 for pure states, 1/N for the maximally mixed state.
double purity(const ComplexMatrix& sigma);

}  // namespace liouflow
