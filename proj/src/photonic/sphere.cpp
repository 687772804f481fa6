#include "nanopair/photonic/sphere.hpp"

#include <algorithm>
#include <cmath>

#include "nanopair/photonic/detail/spherical.hpp"

namespace nanopair::photonic {

using detail::EquatorialFrame;
using detail::EquatorialLegendre;
using detail::RadialSeries;
using detail::ScaledMie;

namespace {

const cplx I(0.0, 1.0);

cplx relative_index(const SphereGeometry& geom, double omega) {
  return std::sqrt(permittivity(geom.material, omega) / geom.host_eps);
}

void check_geometry(const SphereGeometry& geom, const SeriesOptions& options) {
  if (!(geom.radius > 0.0)) throw InvalidArgument("sphere radius must be positive");
  if (options.max_order < 1) throw InvalidArgument("max_order must be >= 1");
}

void check_outside(const SphereGeometry& geom, const Vec3& p, const char* what) {
  if (!((p - geom.center).norm() > geom.radius * (1.0 + 1e-12))) {
    throw GeometryError(std::string(what) + " lies inside or on the sphere");
  }
}

// Local spherical unit vectors on the equator at azimuth phi.
struct EquatorBasis {
  CVec3 er, etheta, ephi;
  explicit EquatorBasis(double phi)
      : er(std::cos(phi), std::sin(phi), 0.0),
        etheta(0.0, 0.0, -1.0),
        ephi(-std::sin(phi), std::cos(phi), 0.0) {}
};

// Outgoing M and N for degree n, order m at an equatorial point, as mantissas
// (multiply by exp(radial.log_scale[n])). conj_angle flips the angular part to
// its conjugate, i.e. exp(-i m phi) and -i m.
void outgoing_mn(const RadialSeries& radial, const EquatorialLegendre& leg, const EquatorBasis& e,
                 double phi, int n, int m, bool conj_angle, CVec3& mv, CVec3& nv) {
  const double p = leg.p[n][std::abs(m)];
  const double t = leg.t[n][std::abs(m)];
  const double sm = conj_angle ? -m : m;
  const cplx phase = std::exp(I * sm * phi);
  const double nn1 = n * (n + 1.0);
  mv = radial.h[n] * (I * sm * p * e.etheta - t * e.ephi) * phase;
  nv = (radial.h[n] / radial.x * nn1 * p * e.er +
        radial.dh[n] * (t * e.etheta + I * sm * p * e.ephi)) *
       phase;
}

double frobenius(const Mat3c& m) { return m.norm(); }

// Stops when the last two orders are both below tolerance relative to the sum.
struct TailTracker {
  double tol;
  double prev = 0.0;
  double last = 0.0;
  bool done(double term_norm, double sum_norm, int n) {
    prev = last;
    last = term_norm;
    if (n < 3) return false;
    return std::max(prev, last) <= tol * std::max(sum_norm, 1e-300);
  }
  double estimate(double sum_norm) const {
    return std::max(prev, last) / std::max(sum_norm, 1e-300);
  }
};

}  // namespace

std::vector<std::pair<cplx, cplx>> mie_coefficients(const SphereGeometry& geom, double omega,
                                                    int n_max) {
  if (n_max < 1) throw InvalidArgument("n_max must be >= 1");
  if (!(geom.radius > 0.0)) throw InvalidArgument("sphere radius must be positive");
  const double x = host_wavenumber(omega, geom.host_eps) * geom.radius;
  const ScaledMie s = detail::scaled_mie_coefficients(relative_index(geom, omega), x, n_max);
  std::vector<std::pair<cplx, cplx>> out(static_cast<std::size_t>(n_max) + 1);
  for (int n = 1; n <= n_max; ++n) {
    const double f = std::exp(-s.log_scale[n]);
    out[n] = {s.a[n] * f, s.b[n] * f};
  }
  return out;
}

ScatteredGreen sphere_scattered_green(const SphereGeometry& geom, const Vec3& field,
                                      const Vec3& source, double omega,
                                      const SeriesOptions& options) {
  check_geometry(geom, options);
  check_outside(geom, field, "field point");
  check_outside(geom, source, "source point");

  const int n_max = options.max_order;
  const double k = host_wavenumber(omega, geom.host_eps);
  const Vec3 a = field - geom.center;
  const Vec3 b = source - geom.center;
  const EquatorialFrame fr = detail::equatorial_frame(a, b);
  const ScaledMie mie =
      detail::scaled_mie_coefficients(relative_index(geom, omega), k * geom.radius, n_max);
  const RadialSeries ra = detail::radial_series(k * fr.radius_a, n_max);
  const RadialSeries rb = detail::radial_series(k * fr.radius_b, n_max);
  const EquatorialLegendre leg = detail::equatorial_legendre(n_max);
  const EquatorBasis ea(fr.phi_a), eb(fr.phi_b);

  Mat3c sum = Mat3c::Zero();
  TailTracker tail{options.tail_tolerance};
  ScatteredGreen out;
  for (int n = 1; n <= n_max; ++n) {
    const double scale = std::exp(ra.log_scale[n] + rb.log_scale[n] - mie.log_scale[n]);
    Mat3c term = Mat3c::Zero();
    for (int m = -n; m <= n; ++m) {
      CVec3 ma, na, mb, nb;
      outgoing_mn(ra, leg, ea, fr.phi_a, n, m, false, ma, na);
      outgoing_mn(rb, leg, eb, fr.phi_b, n, m, true, mb, nb);
      term -= mie.b[n] * ma * mb.transpose() + mie.a[n] * na * nb.transpose();
    }
    term *= I * k / (n * (n + 1.0)) * scale;
    sum += term;
    out.orders_used = n;
    if (tail.done(frobenius(term), frobenius(sum), n)) {
      out.converged = true;
      break;
    }
  }
  out.truncation_estimate = tail.estimate(frobenius(sum));
  const Mat3c rot = fr.axes.cast<cplx>();
  out.green.tensor = rot * sum * rot.transpose();
  out.green.field = field;
  out.green.source = source;
  out.green.omega = omega;
  return out;
}

SeriesResult far_field_response(const SphereGeometry* geom, const Vec3& point,
                                const Vec3& direction, double omega,
                                const SeriesOptions& options) {
  if (!(direction.norm() > 0.0)) throw InvalidArgument("direction must be nonzero");
  const Vec3 s = direction.normalized();
  const Vec3 center = geom ? geom->center : Vec3::Zero();
  const double host = geom ? geom->host_eps : 1.0;
  const double k = host_wavenumber(omega, host);
  const Vec3 a = point - center;

  SeriesResult out;
  const Mat3c transverse = (Eigen::Matrix3d::Identity() - s * s.transpose()).cast<cplx>();
  out.tensor = transverse * std::exp(-I * k * s.dot(a));
  if (!geom) {
    out.converged = true;
    return out;
  }
  check_geometry(*geom, options);
  check_outside(*geom, point, "point");

  const int n_max = options.max_order;
  const EquatorialFrame fr = detail::equatorial_frame(a, s);
  const ScaledMie mie =
      detail::scaled_mie_coefficients(relative_index(*geom, omega), k * geom->radius, n_max);
  const RadialSeries ra = detail::radial_series(k * fr.radius_a, n_max);
  const EquatorialLegendre leg = detail::equatorial_legendre(n_max);
  const EquatorBasis ea(fr.phi_a), es(fr.phi_b);

  Mat3c sum = Mat3c::Zero();
  TailTracker tail{options.tail_tolerance};
  cplx minus_i_pow = 1.0;  // (-i)^n
  for (int n = 1; n <= n_max; ++n) {
    minus_i_pow *= -I;
    const double scale = std::exp(ra.log_scale[n] - mie.log_scale[n]);
    Mat3c term = Mat3c::Zero();
    for (int m = -n; m <= n; ++m) {
      CVec3 ma, na;
      outgoing_mn(ra, leg, ea, fr.phi_a, n, m, false, ma, na);
      const double p = leg.p[n][std::abs(m)];
      const double t = leg.t[n][std::abs(m)];
      const cplx phase = std::exp(-I * static_cast<double>(m) * fr.phi_b);
      const CVec3 abar = (-I * static_cast<double>(m) * p * es.etheta - t * es.ephi) * phase;
      const CVec3 bbar = (t * es.etheta - I * static_cast<double>(m) * p * es.ephi) * phase;
      term -= mie.b[n] * (minus_i_pow * -I) * ma * abar.transpose() +
              mie.a[n] * minus_i_pow * na * bbar.transpose();
    }
    term *= 4.0 * constants::pi * I / (n * (n + 1.0)) * scale;
    sum += term;
    out.orders_used = n;
    if (tail.done(frobenius(term), frobenius(sum), n)) {
      out.converged = true;
      break;
    }
  }
  out.truncation_estimate = tail.estimate(frobenius(sum));
  const Mat3c rot = fr.axes.cast<cplx>();
  out.tensor += rot * sum * rot.transpose();
  return out;
}

CVec3 plane_wave_total_field(const SphereGeometry* geom, const Vec3& point,
                             const Vec3& polarization, const Vec3& propagation, double omega,
                             const SeriesOptions& options) {
  if (!(propagation.norm() > 0.0)) throw InvalidArgument("propagation must be nonzero");
  const Vec3 khat = propagation.normalized();
  if (std::abs(khat.dot(polarization)) > 1e-9 * polarization.norm()) {
    throw InvalidArgument("polarization must be transverse to propagation");
  }
  const SeriesResult w = far_field_response(geom, point, -khat, omega, options);
  return w.tensor * polarization.cast<cplx>();
}

}  // namespace nanopair::photonic
