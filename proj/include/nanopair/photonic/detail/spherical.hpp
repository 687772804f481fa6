#pragma once

// Special functions behind the Mie series. Exposed for the unit tests.

#include <vector>

#include "nanopair/common.hpp"

namespace nanopair::photonic::detail {

/// Spherical Bessel data for a real argument x > 0, orders 0..n_max.
///
/// j[n] is j_n(x) unscaled (it may underflow to zero at high order).
/// The outgoing Hankel function h_n^(1)(x) and (1/x) d[x h_n(x)]/dx are
/// stored as mantissas times exp(log_scale[n]); the scaling keeps high orders
/// at small x representable.
struct RadialSeries {
  double x = 0.0;
  std::vector<double> j;
  std::vector<double> dj;  // (1/x) d[x j_n]/dx, unscaled
  std::vector<cplx> h;
  std::vector<cplx> dh;
  std::vector<double> log_scale;
};

RadialSeries radial_series(double x, int n_max);

/// Logarithmic derivative D_n(z) = psi_n'(z) / psi_n(z) of the Riccati-Bessel
/// function psi_n(z) = z j_n(z), orders 0..n_max, by downward recurrence.
std::vector<cplx> log_derivative(cplx z, int n_max);

/// Fully normalized associated Legendre values at cos(theta) = 0.
/// p[n][m] = P~_n^m(0), t[n][m] = d P~_n^m(cos theta) / d theta at theta = pi/2,
/// for 0 <= m <= n <= n_max, with P~_n^m including sqrt((2n+1)/(4 pi) (n-m)!/(n+m)!).
struct EquatorialLegendre {
  std::vector<std::vector<double>> p;
  std::vector<std::vector<double>> t;
};

EquatorialLegendre equatorial_legendre(int n_max);

/// Scaled Mie coefficients: a_n = a[n] * exp(-log_scale[n]) and likewise b_n,
/// where log_scale is the Hankel scale at the size parameter.
struct ScaledMie {
  std::vector<cplx> a;
  std::vector<cplx> b;
  std::vector<double> log_scale;
};

/// rel_index = sqrt(eps_sphere / eps_host), size = k_host R.
ScaledMie scaled_mie_coefficients(cplx rel_index, double size, int n_max);

/// Local frame in which both points lie in the equatorial plane through the
/// origin. Columns are the local x, y, z axes in global coordinates.
struct EquatorialFrame {
  Eigen::Matrix3d axes;
  double radius_a = 0.0;
  double radius_b = 0.0;
  double phi_a = 0.0;
  double phi_b = 0.0;
};

EquatorialFrame equatorial_frame(const Vec3& a, const Vec3& b);

/// Multipole expansion of the homogeneous Green's tensor about the origin,
/// valid for |field| > |source| > 0. Used only to validate the vector wave
/// functions against the closed form.
Mat3c free_space_green_multipole(const Vec3& field, const Vec3& source, double k, int n_max);

}  // namespace nanopair::photonic::detail
