#include "liouflow/ensemble.hpp"

#include <cmath>

#include "liouflow/rng.hpp"

namespace liouflow {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double pairwise_reduce(const std::function<double(std::size_t)>& value,
                       std::size_t begin, std::size_t end) {
  const std::size_t count = end - begin;
  if (count <= 8) {
    double acc = 0.0;
    for (std::size_t i = begin; i < end; ++i) acc += value(i);
    return acc;
  }
  const std::size_t mid = begin + count / 2;
  return pairwise_reduce(value, begin, mid) + pairwise_reduce(value, mid, end);
}

Eigen::Matrix3d cholesky_factor(const TruncatedGaussian& dist) {
  dist.validate();
  return Eigen::LLT<Eigen::Matrix3d>(dist.cov).matrixL();
}

/// Draws the attempt with index `attempt` from the counter stream; each
/// attempt consumes two Box-Muller pairs (three normals, the fourth unused).
Eigen::Vector3d draw_attempt(const CounterRng& rng, const Eigen::Matrix3d& chol,
                             const Eigen::Vector3d& mean, std::uint64_t attempt) {
  double z0, z1, z2, unused;
  rng.normal_pair(2 * attempt, z0, z1);
  rng.normal_pair(2 * attempt + 1, z2, unused);
  return mean + chol * Eigen::Vector3d(z0, z1, z2);
}

}  // namespace

Eigen::Matrix3d rotation_z(double theta) {
  Eigen::Matrix3d r;
  r << std::cos(theta), -std::sin(theta), 0.0,
       std::sin(theta), std::cos(theta), 0.0,
       0.0, 0.0, 1.0;
  return r;
}

Eigen::Matrix3d scaling(const Eigen::Vector3d& nu) {
  return nu.asDiagonal();
}

bool TruncatedGaussian::in_support(const Eigen::Vector3d& c) const {
  return !truncated || (support_map * c).norm() <= 1.0;
}

double TruncatedGaussian::density(const Eigen::Vector3d& c) const {
  if (!in_support(c)) return 0.0;
  const Eigen::Vector3d d = c - mean;
  const Eigen::LLT<Eigen::Matrix3d> llt(cov);
  const double quad = d.dot(llt.solve(d));
  const double log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  return std::exp(-0.5 * quad - 0.5 * log_det - 1.5 * std::log(kTwoPi));
}

double TruncatedGaussian::normalized_density(const Eigen::Vector3d& c) const {
  return density(c) * std::exp(-log_norm);
}

void TruncatedGaussian::validate() const {
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, cov.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("TruncatedGaussian: covariance must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(cov);
  if (es.eigenvalues().minCoeff() <= 0.0) {
    throw std::invalid_argument("TruncatedGaussian: covariance must be positive definite");
  }
}

SampleEnsemble sample(const TruncatedGaussian& dist, std::size_t n, std::uint64_t seed) {
  if (n < 1) {
    throw std::invalid_argument("sample: need at least one sample");
  }
  const Eigen::Matrix3d chol = cholesky_factor(dist);
  const CounterRng rng(seed);

  SampleEnsemble ens;
  ens.seed = seed;
  ens.truncated = dist.truncated;
  ens.points.reserve(n);

  std::uint64_t attempts = 0;
  while (ens.points.size() < n) {
    const Eigen::Vector3d draw = draw_attempt(rng, chol, dist.mean, attempts);
    ++attempts;
    if (dist.in_support(draw)) {
      ens.points.push_back(draw);
    }
    if (attempts >= 10000 && double(ens.points.size()) < 1e-3 * double(attempts)) {
      throw NumericalError("sample: acceptance rate below 1e-3, truncation is pathological");
    }
  }
  ens.acceptance_rate = double(n) / double(attempts);
  return ens;
}

TruncatedGaussian with_estimated_log_norm(const TruncatedGaussian& dist,
                                          std::size_t n, std::uint64_t seed) {
  TruncatedGaussian out = dist;
  if (!dist.truncated) {
    out.log_norm = 0.0;
    return out;
  }
  const Eigen::Matrix3d chol = cholesky_factor(dist);
  const CounterRng rng(seed);
  std::uint64_t inside = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    if (dist.in_support(draw_attempt(rng, chol, dist.mean, i))) ++inside;
  }
  if (inside == 0) {
    throw NumericalError("with_estimated_log_norm: no probability mass inside the support");
  }
  out.log_norm = std::log(double(inside) / double(n));
  return out;
}

Propagator spin_boson_propagator(double omega, double gamma_phi, double gamma_relax) {
  return [=, cached_t = std::numeric_limits<double>::quiet_NaN(),
          map = AffineMap{}](const Eigen::Vector3d& c, double t) mutable {
    if (t != cached_t) {
      map = spin_boson_map(omega, gamma_phi, gamma_relax, t);
      cached_t = t;
    }
    return Eigen::Vector3d(map(c));
  };
}

Propagator affine_propagator(const FlowField& field) {
  if (field.linear.rows() != 3) {
    throw std::invalid_argument("affine_propagator: field must act on 3D coordinates");
  }
  return [linear = field.linear, offset = field.offset,
          cached_t = std::numeric_limits<double>::quiet_NaN(),
          map = AffineMap{}](const Eigen::Vector3d& c, double t) mutable {
    if (t != cached_t) {
      map = flow_exponential(linear, offset, t);
      cached_t = t;
    }
    return Eigen::Vector3d(map(c));
  };
}

SampleEnsemble pushforward(const SampleEnsemble& ens, const Propagator& propagate,
                           double t) {
  SampleEnsemble out;
  out.seed = ens.seed;
  out.acceptance_rate = ens.acceptance_rate;
  out.truncated = ens.truncated;
  out.points.reserve(ens.points.size());
  for (const Eigen::Vector3d& p : ens.points) {
    Eigen::Vector3d moved = propagate(p, t);
    if (ens.truncated && moved.norm() > 1.0 + 1e-9) {
      throw NumericalError("pushforward: propagated state left the Bloch ball");
    }
    out.points.push_back(moved);
  }
  return out;
}

TruncatedGaussian propagate_gaussian(const TruncatedGaussian& dist0, double omega,
                                     double gamma_phi, double gamma_relax, double t) {
  if (t < 0.0) {
    throw std::domain_error("propagate_gaussian: t must be >= 0");
  }
  const double decay_xy = std::exp(-(gamma_phi + 0.5 * gamma_relax) * t);
  const double decay_z = std::exp(-gamma_relax * t);
  const Eigen::Matrix3d scale = scaling({decay_xy, decay_xy, decay_z});
  const Eigen::Matrix3d rot = rotation_z(omega * t);

  TruncatedGaussian out = dist0;
  out.mean = spin_boson_map(omega, gamma_phi, gamma_relax, t)(dist0.mean);
  out.cov = scale * rot * dist0.cov * rot.transpose() * scale;
  out.support_map = scale * dist0.support_map;
  return out;
}

double density_at(const TruncatedGaussian& dist0, double omega, double gamma_phi,
                  double gamma_relax, const Eigen::Vector3d& c, double t) {
  if (t < 0.0) {
    throw std::domain_error("density_at: t must be >= 0");
  }
  const AffineMap inverse = spin_boson_map(omega, gamma_phi, gamma_relax, -t);
  const double growth = std::exp(2.0 * (gamma_phi + gamma_relax) * t);
  return growth * dist0.density(inverse(c));
}

double support_mismatch(const TruncatedGaussian& dist0, double omega,
                        double gamma_phi, double gamma_relax, double t,
                        std::size_t n, std::uint64_t seed) {
  TruncatedGaussian moved = propagate_gaussian(dist0, omega, gamma_phi, gamma_relax, t);
  TruncatedGaussian probe = moved;
  probe.truncated = false;
  const SampleEnsemble ens = sample(probe, n, seed);
  const AffineMap inverse = spin_boson_map(omega, gamma_phi, gamma_relax, -t);
  std::size_t disagree = 0;
  for (const Eigen::Vector3d& p : ens.points) {
    const bool printed = moved.in_support(p);
    const bool exact = dist0.in_support(inverse(p));
    if (printed != exact) ++disagree;
  }
  return double(disagree) / double(n);
}

Eigen::Vector3d ensemble_mean(const SampleEnsemble& ens) {
  const std::size_t n = ens.points.size();
  if (n == 0) {
    throw std::domain_error("ensemble_mean: ensemble is empty");
  }
  Eigen::Vector3d mean;
  for (int axis = 0; axis < 3; ++axis) {
    mean(axis) = pairwise_reduce(
                     [&ens, axis](std::size_t i) { return ens.points[i](axis); }, 0, n) /
                 double(n);
  }
  return mean;
}

Eigen::Matrix3d ensemble_covariance(const SampleEnsemble& ens) {
  const std::size_t n = ens.points.size();
  if (n < 2) {
    throw std::domain_error("ensemble_covariance: need at least two samples");
  }
  const Eigen::Vector3d mean = ensemble_mean(ens);
  Eigen::Matrix3d cov;
  for (int a = 0; a < 3; ++a) {
    for (int b = a; b < 3; ++b) {
      const double sum = pairwise_reduce(
          [&ens, &mean, a, b](std::size_t i) {
            return (ens.points[i](a) - mean(a)) * (ens.points[i](b) - mean(b));
          },
          0, n);
      cov(a, b) = cov(b, a) = sum / double(n - 1);
    }
  }
  return cov;
}

ComplexMatrix ensemble_density_matrix(const SampleEnsemble& ens) {
  static const HermitianBasis basis(2);
  const Eigen::Vector3d mean = ensemble_mean(ens);
  ComplexMatrix rho = from_coords(mean, basis);
  validate_density(rho, 1e-8);
  return rho;
}

std::vector<Eigen::Vector3d> fibonacci_sphere(int count) {
  if (count < 1) {
    throw std::invalid_argument("fibonacci_sphere: need at least one point");
  }
  std::vector<Eigen::Vector3d> pts;
  pts.reserve(count);
  const double golden_angle = M_PI * (3.0 - std::sqrt(5.0));
  for (int k = 0; k < count; ++k) {
    const double z = 1.0 - (2.0 * k + 1.0) / double(count);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden_angle * k;
    pts.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
  }
  return pts;
}

double pairwise_sum(std::span<const double> values) {
  return pairwise_reduce([&values](std::size_t i) { return values[i]; }, 0,
                         values.size());
}

FluxCheckRecord boundary_flux_check(const FlowField& field,
                                    const TruncatedGaussian& dist0,
                                    const Eigen::Vector3d& center, double radius,
                                    double t, const FluxCheckOptions& opts) {
  if (radius <= 0.0) {
    throw std::invalid_argument("boundary_flux_check: radius must be > 0");
  }
  if (dist0.truncated && center.norm() + radius > 1.0 + 1e-12) {
    throw std::invalid_argument("boundary_flux_check: region must lie inside the unit ball");
  }
  if (field.linear.rows() != 3) {
    throw std::invalid_argument("boundary_flux_check: field must act on 3D coordinates");
  }

  // Self-consistent normalization for the quadrature side.
  const TruncatedGaussian dist =
      dist0.truncated ? with_estimated_log_norm(dist0, opts.samples, opts.seed + 1)
                      : dist0;

  const SampleEnsemble ens = sample(dist, opts.samples, opts.seed);
  const Propagator prop = affine_propagator(field);

  const auto occupancy_at = [&](double when) {
    const SampleEnsemble moved = pushforward(ens, prop, when);
    std::size_t inside = 0;
    for (const Eigen::Vector3d& p : moved.points) {
      if ((p - center).norm() <= radius) ++inside;
    }
    return double(inside) / double(moved.points.size());
  };

  FluxCheckRecord rec;
  const double t_plus = t + opts.dt_occupancy;
  const double t_minus = std::max(0.0, t - opts.dt_occupancy);
  rec.occupancy = occupancy_at(t);
  rec.dpdt_mc = (occupancy_at(t_plus) - occupancy_at(t_minus)) / (t_plus - t_minus);

  const AffineMap inverse = flow_exponential(field.linear, field.offset, -t);
  const double growth = std::exp(field.kappa * t);
  const auto density_now = [&](const Eigen::Vector3d& c) {
    return growth * dist.normalized_density(inverse(c));
  };

  const std::vector<Eigen::Vector3d> sphere = fibonacci_sphere(opts.quadrature_points);
  std::vector<double> contributions(sphere.size());
  const double patch = 4.0 * M_PI * radius * radius / double(sphere.size());
  for (std::size_t k = 0; k < sphere.size(); ++k) {
    const Eigen::Vector3d point = center + radius * sphere[k];
    const Eigen::Vector3d velocity = field(point);
    contributions[k] = density_now(point) * velocity.dot(sphere[k]) * patch;
  }
  rec.surface_flux = pairwise_sum(contributions);
  rec.discrepancy = std::abs(rec.dpdt_mc + rec.surface_flux);
  return rec;
}

}  // namespace liouflow
