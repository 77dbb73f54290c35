#pragma once

#include <Eigen/Dense>

#include "liouflow/core.hpp"

namespace liouflow {

/// Affine map x -> linear * x + offset.
struct AffineMap {
  RealMatrix linear;
  RealVector offset;

  RealVector operator()(const RealVector& x) const { return linear * x + offset; }
  AffineMap inverse() const;
  /// Composition (this after other): x -> this(other(x)).
  AffineMap after(const AffineMap& other) const;
};

/// Exact time-t solution map of the affine ODE xdot = a x + b, computed from
/// the exponential of the augmented matrix [[a, b], [0, 0]]. Negative t gives
/// the inverse flow.
AffineMap flow_exponential(const RealMatrix& a, const RealVector& b, double t);

/// Exact spin-boson trajectory map on Bloch coordinates: a z-rotation by
/// omega*t combined with exponential contraction of the transverse and
/// longitudinal components and relaxation of z toward -1. Negative t gives
/// the exact inverse map.
AffineMap spin_boson_map(double omega, double gamma_phi, double gamma_relax, double t);

}  // namespace liouflow
