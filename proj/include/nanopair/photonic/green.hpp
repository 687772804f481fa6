#pragma once

#include "nanopair/common.hpp"

namespace nanopair::photonic {

/// Dyadic Green's tensor G(field, source; omega) in 1/m, normalized so that
/// curl curl G - k^2 G = I delta(field - source).
struct DyadicGreen {
  Mat3c tensor = Mat3c::Zero();
  Vec3 field = Vec3::Zero();
  Vec3 source = Vec3::Zero();
  double omega = 0.0;
};

/// Wavenumber in a lossless host of relative permittivity host_eps.
double host_wavenumber(double omega, double host_eps = 1.0);

/// Homogeneous-medium tensor between two distinct points.
/// Throws SingularityError when the points coincide.
DyadicGreen free_space_green(const Vec3& field, const Vec3& source, double omega,
                             double host_eps = 1.0);

/// Im G at coincident points: k / (6 pi) times the identity. The real part
/// diverges there and is never formed.
Eigen::Matrix3d free_space_green_imag_coincident(double omega, double host_eps = 1.0);

}  // namespace nanopair::photonic
