#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "liouflow/affine.hpp"
#include "liouflow/flow.hpp"

namespace liouflow {

/// z-axis rotation matrix by angle theta (counterclockwise in the x-y plane).
Eigen::Matrix3d rotation_z(double theta);

/// Diagonal scaling matrix diag(nu_x, nu_y, nu_z).
Eigen::Matrix3d scaling(const Eigen::Vector3d& nu);

/// Gaussian distribution on Bloch coordinates, optionally truncated to the
/// set |support_map * c| <= 1 (the unit ball for the default support_map).
///
/// `density` is the Gaussian pdf times the support indicator, i.e. it is NOT
/// renormalized for the truncated mass; `log_norm` holds the log of that mass
/// (0 for untruncated distributions) and `normalized_density` divides it out.
/// Pointwise transport identities are exact for `density`; the mass estimate
/// is statistical (see with_estimated_log_norm).
struct TruncatedGaussian {
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  Eigen::Matrix3d cov = Eigen::Matrix3d::Identity();
  bool truncated = true;
  Eigen::Matrix3d support_map = Eigen::Matrix3d::Identity();
  double log_norm = 0.0;

  bool in_support(const Eigen::Vector3d& c) const;
  double density(const Eigen::Vector3d& c) const;
  double normalized_density(const Eigen::Vector3d& c) const;
  /// Throws std::invalid_argument unless cov is symmetric positive definite.
  void validate() const;
};

/// Equally weighted collection of sampled states.
struct SampleEnsemble {
  std::vector<Eigen::Vector3d> points;
  std::uint64_t seed = 0;
  double acceptance_rate = 1.0;
  bool truncated = false;
};

/// Draws n i.i.d. samples by Cholesky-transformed Box-Muller normals on the
/// counter stream `seed`, rejecting draws outside the support when truncated.
/// Deterministic given (dist, n, seed). Raises NumericalError if the
/// acceptance rate falls below 1e-3.
SampleEnsemble sample(const TruncatedGaussian& dist, std::size_t n, std::uint64_t seed);

/// Copy of `dist` with log_norm set to the log of the Monte Carlo estimate of
/// the truncated mass (exactly 0 when untruncated).
TruncatedGaussian with_estimated_log_norm(const TruncatedGaussian& dist,
                                          std::size_t n, std::uint64_t seed);

using Propagator = std::function<Eigen::Vector3d(const Eigen::Vector3d&, double)>;

/// Propagator evaluating the exact spin-boson trajectory map.
Propagator spin_boson_propagator(double omega, double gamma_phi, double gamma_relax);

/// Propagator evaluating the exact exponential map of an affine flow field.
Propagator affine_propagator(const FlowField& field);

/// Moves every sample to its time-t image under the propagator; weights are
/// unchanged. For a truncated ensemble the outputs must stay inside the unit
/// ball (to 1e-9), otherwise NumericalError is raised.
SampleEnsemble pushforward(const SampleEnsemble& ens, const Propagator& propagate,
                           double t);

/// Analytic transport of a (truncated) Gaussian under the spin-boson flow:
/// the mean follows the trajectory map, the covariance is conjugated by the
/// z rotation and the decay scaling, and the support map picks up the decay
/// scaling factor. log_norm is carried over unchanged (the flow conserves
/// probability mass on the exact support).
TruncatedGaussian propagate_gaussian(const TruncatedGaussian& dist0, double omega,
                                     double gamma_phi, double gamma_relax, double t);

/// Pull-back density of the transported distribution at coordinates c and
/// time t: exp(2 (gamma_phi + gamma_relax) t) * dist0.density(inverse map of c).
/// Exact pointwise for all t >= 0, including truncated initial conditions.
double density_at(const TruncatedGaussian& dist0, double omega, double gamma_phi,
                  double gamma_relax, const Eigen::Vector3d& c, double t);

/// Fraction of probed points (sampled from the transported Gaussian) where
/// the transported support indicator disagrees with the exact pushforward
/// support (pulled-back point inside the initial support).
double support_mismatch(const TruncatedGaussian& dist0, double omega,
                        double gamma_phi, double gamma_relax, double t,
                        std::size_t n, std::uint64_t seed);

/// Arithmetic mean of the sample coordinates (pairwise summation, so the
/// result is independent of processing order). Throws std::domain_error on
/// an empty ensemble.
Eigen::Vector3d ensemble_mean(const SampleEnsemble& ens);

/// Sample covariance (n-1 normalization) with pairwise summation.
Eigen::Matrix3d ensemble_covariance(const SampleEnsemble& ens);

/// Density matrix of the ensemble average: from_coords(ensemble_mean).
ComplexMatrix ensemble_density_matrix(const SampleEnsemble& ens);

/// Two estimates of the probability balance for a ball region: the rate of
/// change of Monte Carlo occupancy and the negated surface integral of the
/// probability flux density * field over the sphere.
struct FluxCheckRecord {
  double dpdt_mc = 0.0;       // d/dt of sample occupancy (central difference)
  double surface_flux = 0.0;  // integral of P * (field . outward normal) dA
  double discrepancy = 0.0;   // |dpdt_mc + surface_flux|
  double occupancy = 0.0;     // occupancy fraction at time t
};

struct FluxCheckOptions {
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  double dt_occupancy = 1e-2;  // half-width of the occupancy time difference
  int quadrature_points = 2048;
};

/// Validates the integral form of the continuity equation on a ball region
/// under an affine 3D flow field, with the initial distribution `dist0`.
/// Does not throw on large discrepancies; the record is the diagnostic.
FluxCheckRecord boundary_flux_check(const FlowField& field,
                                    const TruncatedGaussian& dist0,
                                    const Eigen::Vector3d& center, double radius,
                                    double t, const FluxCheckOptions& opts = {});

/// Deterministic Fibonacci-lattice points on the unit sphere.
std::vector<Eigen::Vector3d> fibonacci_sphere(int count);

/// Order-stable pairwise summation.
double pairwise_sum(std::span<const double> values);

}  // namespace liouflow
