#include "liouflow/affine.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace liouflow {

AffineMap AffineMap::inverse() const {
  AffineMap inv;
  inv.linear = linear.inverse();
  inv.offset = -inv.linear * offset;
  return inv;
}

AffineMap AffineMap::after(const AffineMap& other) const {
  AffineMap out;
  out.linear = linear * other.linear;
  out.offset = linear * other.offset + offset;
  return out;
}

AffineMap flow_exponential(const RealMatrix& a, const RealVector& b, double t) {
  const Eigen::Index n = a.rows();
  RealMatrix aug = RealMatrix::Zero(n + 1, n + 1);
  aug.topLeftCorner(n, n) = a;
  aug.topRightCorner(n, 1) = b;
  const RealMatrix exp_aug = (t * aug).exp();
  AffineMap map;
  map.linear = exp_aug.topLeftCorner(n, n);
  map.offset = exp_aug.topRightCorner(n, 1);
  return map;
}

AffineMap spin_boson_map(double omega, double gamma_phi, double gamma_relax, double t) {
  const double lambda = gamma_phi + 0.5 * gamma_relax;
  const double decay_xy = std::exp(-lambda * t);
  const double decay_z = std::exp(-gamma_relax * t);
  const double c = std::cos(omega * t);
  const double s = std::sin(omega * t);
  AffineMap map;
  map.linear.resize(3, 3);
  map.linear << decay_xy * c, -decay_xy * s, 0.0,
                decay_xy * s, decay_xy * c, 0.0,
                0.0, 0.0, decay_z;
  map.offset.resize(3);
  map.offset << 0.0, 0.0, decay_z - 1.0;
  return map;
}

}  // namespace liouflow
