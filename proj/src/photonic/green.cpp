#include "nanopair/photonic/green.hpp"

#include <cmath>

namespace nanopair::photonic {

double host_wavenumber(double omega, double host_eps) {
  if (!(host_eps > 0.0)) throw InvalidArgument("host permittivity must be positive");
  return std::sqrt(host_eps) * omega / constants::c;
}

DyadicGreen free_space_green(const Vec3& field, const Vec3& source, double omega,
                             double host_eps) {
  const Vec3 sep = field - source;
  const double r = sep.norm();
  const double k = host_wavenumber(omega, host_eps);
  if (!(k * r > 1e-12)) {
    throw SingularityError("free_space_green: coincident points (real part diverges)");
  }
  const Vec3 u = sep / r;
  const cplx i(0.0, 1.0);
  const double kr = k * r;
  const cplx phase = std::exp(i * kr) / (4.0 * constants::pi * r);
  const cplx a = 1.0 + i / kr - 1.0 / (kr * kr);
  const cplx b = -1.0 - 3.0 * i / kr + 3.0 / (kr * kr);

  DyadicGreen g;
  g.tensor = phase * (a * Mat3c::Identity() + b * (u * u.transpose()).cast<cplx>());
  g.field = field;
  g.source = source;
  g.omega = omega;
  return g;
}

Eigen::Matrix3d free_space_green_imag_coincident(double omega, double host_eps) {
  const double k = host_wavenumber(omega, host_eps);
  return Eigen::Matrix3d::Identity() * (k / (6.0 * constants::pi));
}

}  // namespace nanopair::photonic
