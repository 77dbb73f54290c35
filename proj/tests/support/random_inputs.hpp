#pragma once

#include "liouflow/core.hpp"
#include "liouflow/flow.hpp"
#include "liouflow/rng.hpp"

// Deterministic generators for property-style tests. Each helper advances the
// caller's counter so independent draws never reuse stream positions.
namespace testgen {

inline double normal(const liouflow::CounterRng& rng, std::uint64_t& counter) {
  double z0, z1;
  rng.normal_pair(counter++, z0, z1);
  return z0;
}

inline liouflow::ComplexMatrix complex_gaussian(const liouflow::CounterRng& rng,
                                                std::uint64_t& counter, int dim) {
  liouflow::ComplexMatrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      double z0, z1;
      rng.normal_pair(counter++, z0, z1);
      m(r, c) = liouflow::Complex(z0, z1);
    }
  }
  return m;
}

inline liouflow::ComplexMatrix hermitian(const liouflow::CounterRng& rng,
                                         std::uint64_t& counter, int dim) {
  const liouflow::ComplexMatrix g = complex_gaussian(rng, counter, dim);
  return 0.5 * (g + g.adjoint());
}

/// Full-rank random density matrix (Wishart-style, mixed toward identity).
inline liouflow::ComplexMatrix density(const liouflow::CounterRng& rng,
                                       std::uint64_t& counter, int dim) {
  const liouflow::ComplexMatrix g = complex_gaussian(rng, counter, dim);
  liouflow::ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace();
  return 0.85 * rho +
         0.15 * liouflow::ComplexMatrix::Identity(dim, dim) / double(dim);
}

/// Traceless, unit-trace-norm jump operator.
inline liouflow::ComplexMatrix canonical_lindblad(const liouflow::CounterRng& rng,
                                                  std::uint64_t& counter, int dim) {
  liouflow::ComplexMatrix l = complex_gaussian(rng, counter, dim);
  l -= (l.trace() / double(dim)) * liouflow::ComplexMatrix::Identity(dim, dim);
  return l / std::sqrt(liouflow::trace_inner(l, l).real());
}

inline Eigen::Vector3d ball_point(const liouflow::CounterRng& rng,
                                  std::uint64_t& counter, double max_radius = 0.95) {
  while (true) {
    Eigen::Vector3d p;
    for (int axis = 0; axis < 3; ++axis) {
      p(axis) = 2.0 * rng.uniform(counter++) - 1.0;
    }
    if (p.norm() <= max_radius) return p;
  }
}

}  // namespace testgen
