#pragma once

#include <vector>

#include "liouflow/affine.hpp"

namespace liouflow {

/// Point in phase space. `symmetrized` marks oscillator units
/// q~ = q sqrt(m w), p~ = p / sqrt(m w).
struct PhaseState {
  RealVector q;
  RealVector p;
  bool symmetrized = false;
};

PhaseState symmetrize(const PhaseState& state, double mass, double omega);
PhaseState unsymmetrize(const PhaseState& state, double mass, double omega);

/// Stacks [q; p] into a single phase-space vector.
RealVector stack_phase(const PhaseState& state);

/// Affine flow field on phase coordinates, xdot = linear x + offset, with
/// kappa = -trace(linear).
struct ClassicalFlow {
  RealMatrix linear;
  RealVector offset;
  double kappa = 0.0;

  int dim() const { return static_cast<int>(linear.rows()); }
  RealVector operator()(const RealVector& x) const { return linear * x + offset; }
};

/// Harmonic oscillator in symmetrized coordinates: [qdot, pdot] = [w p, -w q].
/// Incompressible (kappa = 0). Throws for mass or omega <= 0.
ClassicalFlow harmonic_flow(double mass, double omega);

/// Harmonic oscillator with linear momentum damping -gamma p (kappa = gamma).
ClassicalFlow damped_harmonic_flow(double mass, double omega, double gamma);

/// Adds a general linear dissipator: xdot = closed(x) - damping * x.
/// Throws unless `damping` is positive semidefinite (symmetric part).
ClassicalFlow with_linear_dissipator(const ClassicalFlow& closed,
                                     const RealMatrix& damping);

/// Gaussian phase-space distribution (no truncation).
struct PhaseGaussian {
  RealVector mean;
  RealMatrix cov;

  double density(const RealVector& x) const;
  void validate() const;
};

/// Exact time-t trajectory map of the flow (matrix exponential).
AffineMap classical_map(const ClassicalFlow& flow, double t);

/// Moves every sample to its time-t image along the exact trajectory map.
std::vector<RealVector> classical_pushforward(const std::vector<RealVector>& points,
                                              const ClassicalFlow& flow, double t);

/// Pull-back density of the transported distribution:
/// exp(kappa t) * dist0.density(inverse trajectory map of x).
double classical_density_at(const PhaseGaussian& dist0, const ClassicalFlow& flow,
                            const RealVector& x, double t);

/// Continuity-equation balance on a disk region of a 2D phase flow, mirroring
/// the quantum boundary_flux_check: Monte Carlo occupancy rate vs the negated
/// circle integral of density * (field . outward normal).
struct ClassicalFluxRecord {
  double dpdt_mc = 0.0;
  double edge_flux = 0.0;
  double discrepancy = 0.0;
  double occupancy = 0.0;
};

struct ClassicalFluxOptions {
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  double dt_occupancy = 1e-2;
  int quadrature_points = 2048;
};

ClassicalFluxRecord classical_flux_check(const ClassicalFlow& flow,
                                         const PhaseGaussian& dist0,
                                         const Eigen::Vector2d& center, double radius,
                                         double t,
                                         const ClassicalFluxOptions& opts = {});

/// Draws n samples of a phase-space Gaussian on the counter stream `seed`
/// (two Box-Muller normals per pair index, dimension padded to even).
std::vector<RealVector> sample_phase_gaussian(const PhaseGaussian& dist,
                                              std::size_t n, std::uint64_t seed);

}  // namespace liouflow
