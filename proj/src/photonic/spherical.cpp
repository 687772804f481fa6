#include <algorithm>
#include <cmath>

#include "nanopair/photonic/detail/spherical.hpp"

namespace nanopair::photonic::detail {

namespace {
constexpr double kRescale = 1e200;
}

RadialSeries radial_series(double x, int n_max) {
  if (!(x > 0.0) || !std::isfinite(x)) throw InvalidArgument("radial_series: x must be > 0");
  if (n_max < 1) throw InvalidArgument("radial_series: n_max must be >= 1");
  const auto count = static_cast<std::size_t>(n_max) + 1;
  RadialSeries rs;
  rs.x = x;
  rs.j.assign(count, 0.0);
  rs.dj.assign(count, 0.0);
  rs.h.assign(count, cplx{});
  rs.dh.assign(count, cplx{});
  rs.log_scale.assign(count, 0.0);

  const double s = std::sin(x);
  const double c = std::cos(x);

  // j_n: upward while n < x (stable there), then downward continued-fraction
  // ratios r_n = j_n / j_{n-1} for the rest.
  rs.j[0] = s / x;
  const int n_up = std::min(n_max, static_cast<int>(std::floor(x)));
  if (n_max >= 1 && n_up >= 1) rs.j[1] = s / (x * x) - c / x;
  for (int n = 1; n < n_up; ++n) {
    rs.j[n + 1] = (2.0 * n + 1.0) / x * rs.j[n] - rs.j[n - 1];
  }
  if (n_up < n_max) {
    const int start = std::max(n_max, static_cast<int>(x)) + 40 +
                      static_cast<int>(std::sqrt(40.0 * std::max<double>(n_max, x)));
    std::vector<double> ratio(static_cast<std::size_t>(start) + 2, 0.0);
    double r_next = 0.0;
    for (int n = start; n >= 1; --n) {
      r_next = 1.0 / ((2.0 * n + 1.0) / x - r_next);
      ratio[static_cast<std::size_t>(n)] = r_next;
    }
    for (int n = n_up + 1; n <= n_max; ++n) rs.j[n] = ratio[n] * rs.j[n - 1];
  }
  rs.dj[0] = c / x;
  for (int n = 1; n <= n_max; ++n) rs.dj[n] = rs.j[n - 1] - n * rs.j[n] / x;

  // y_n upward with a running exponent: y_n = ym[n] * exp(ye[n]).
  std::vector<double> ym(count), ye(count, 0.0);
  ym[0] = -c / x;
  ym[1] = -c / (x * x) - s / x;
  double exponent = 0.0;
  for (int n = 1; n < n_max; ++n) {
    double next = (2.0 * n + 1.0) / x * ym[n] - ym[n - 1] * std::exp(ye[n - 1] - exponent);
    if (std::abs(next) > kRescale) {
      next /= kRescale;
      ym[n] /= kRescale;
      exponent += std::log(kRescale);
      ye[n] = exponent;
    }
    ym[n + 1] = next;
    ye[n + 1] = exponent;
  }

  for (int n = 0; n <= n_max; ++n) {
    double log_mag;
    if (ye[n] > 0.0) {
      log_mag = ye[n] + std::log(std::abs(ym[n]));
    } else {
      log_mag = std::log(std::hypot(rs.j[n], ym[n]));
    }
    rs.log_scale[n] = log_mag;
    rs.h[n] = cplx(rs.j[n] * std::exp(-log_mag), ym[n] * std::exp(ye[n] - log_mag));
  }
  rs.dh[0] = cplx(c / x, s / x) * std::exp(-rs.log_scale[0]);
  for (int n = 1; n <= n_max; ++n) {
    rs.dh[n] = rs.h[n - 1] * std::exp(rs.log_scale[n - 1] - rs.log_scale[n]) -
               static_cast<double>(n) * rs.h[n] / x;
  }
  return rs;
}

std::vector<cplx> log_derivative(cplx z, int n_max) {
  const int start = std::max(n_max, static_cast<int>(std::abs(z))) + 16;
  std::vector<cplx> d(static_cast<std::size_t>(start) + 1, cplx{});
  for (int n = start; n >= 1; --n) {
    const cplx nz = static_cast<double>(n) / z;
    d[n - 1] = nz - 1.0 / (d[n] + nz);
  }
  d.resize(static_cast<std::size_t>(n_max) + 1);
  return d;
}

EquatorialLegendre equatorial_legendre(int n_max) {
  const auto count = static_cast<std::size_t>(n_max) + 1;
  EquatorialLegendre leg;
  leg.p.assign(count, {});
  leg.t.assign(count, {});
  for (std::size_t n = 0; n < count; ++n) {
    leg.p[n].assign(n + 1, 0.0);
    leg.t[n].assign(n + 1, 0.0);
  }
  leg.p[0][0] = 1.0 / std::sqrt(4.0 * constants::pi);
  for (int m = 1; m <= n_max; ++m) {
    leg.p[m][m] = -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * leg.p[m - 1][m - 1];
  }
  for (int m = 0; m <= n_max; ++m) {
    for (int n = m + 2; n <= n_max; ++n) {
      const double nn = n, mm = m;
      const double a = std::sqrt((4.0 * nn * nn - 1.0) / (nn * nn - mm * mm));
      const double b =
          std::sqrt(((nn - 1.0) * (nn - 1.0) - mm * mm) / (4.0 * (nn - 1.0) * (nn - 1.0) - 1.0));
      leg.p[n][m] = -a * b * leg.p[n - 2][m];
    }
  }
  for (int n = 1; n <= n_max; ++n) {
    for (int m = 0; m < n; ++m) {
      const double nn = n, mm = m;
      leg.t[n][m] =
          -std::sqrt((2.0 * nn + 1.0) / (2.0 * nn - 1.0) * (nn - mm) * (nn + mm)) *
          leg.p[n - 1][m];
    }
  }
  return leg;
}

ScaledMie scaled_mie_coefficients(cplx rel_index, double size, int n_max) {
  const RadialSeries rs = radial_series(size, n_max);
  const std::vector<cplx> d = log_derivative(rel_index * size, n_max);
  const auto count = static_cast<std::size_t>(n_max) + 1;
  ScaledMie mie;
  mie.a.assign(count, cplx{});
  mie.b.assign(count, cplx{});
  mie.log_scale = rs.log_scale;
  const double x = size;
  for (int n = 1; n <= n_max; ++n) {
    const double psi = x * rs.j[n];
    const double psi_prev = x * rs.j[n - 1];
    const cplx xi = x * rs.h[n];
    const cplx xi_prev = x * rs.h[n - 1] * std::exp(rs.log_scale[n - 1] - rs.log_scale[n]);
    const cplx ta = d[n] / rel_index + static_cast<double>(n) / x;
    const cplx tb = rel_index * d[n] + static_cast<double>(n) / x;
    mie.a[n] = (ta * psi - psi_prev) / (ta * xi - xi_prev);
    mie.b[n] = (tb * psi - psi_prev) / (tb * xi - xi_prev);
  }
  return mie;
}

EquatorialFrame equatorial_frame(const Vec3& a, const Vec3& b) {
  EquatorialFrame f;
  f.radius_a = a.norm();
  f.radius_b = b.norm();
  if (!(f.radius_a > 0.0) || !(f.radius_b > 0.0)) {
    throw InvalidArgument("equatorial_frame: points must not sit at the origin");
  }
  const Vec3 ex = a / f.radius_a;
  Vec3 ez = ex.cross(b);
  if (ez.norm() <= 1e-12 * f.radius_b) {
    Eigen::Index axis = 0;
    ex.cwiseAbs().minCoeff(&axis);
    ez = ex.cross(Vec3::Unit(axis));
  }
  ez.normalize();
  const Vec3 ey = ez.cross(ex);
  f.axes.col(0) = ex;
  f.axes.col(1) = ey;
  f.axes.col(2) = ez;
  f.phi_a = 0.0;
  f.phi_b = std::atan2(b.dot(ey), b.dot(ex));
  return f;
}

Mat3c free_space_green_multipole(const Vec3& field, const Vec3& source, double k, int n_max) {
  const EquatorialFrame fr = equatorial_frame(field, source);
  if (!(fr.radius_a > fr.radius_b)) {
    throw InvalidArgument("free_space_green_multipole: needs |field| > |source|");
  }
  const RadialSeries out = radial_series(k * fr.radius_a, n_max);
  const RadialSeries reg = radial_series(k * fr.radius_b, n_max);
  const EquatorialLegendre leg = equatorial_legendre(n_max);
  const cplx i(0.0, 1.0);
  const Vec3 e_theta(0.0, 0.0, -1.0);
  const Vec3 er_a(std::cos(fr.phi_a), std::sin(fr.phi_a), 0.0);
  const Vec3 ep_a(-std::sin(fr.phi_a), std::cos(fr.phi_a), 0.0);
  const Vec3 er_b(std::cos(fr.phi_b), std::sin(fr.phi_b), 0.0);
  const Vec3 ep_b(-std::sin(fr.phi_b), std::cos(fr.phi_b), 0.0);

  auto scaled = [](double v, double log_s) {
    if (v == 0.0) return 0.0;
    return std::copysign(std::exp(log_s + std::log(std::abs(v))), v);
  };

  Mat3c sum = Mat3c::Zero();
  for (int n = 1; n <= n_max; ++n) {
    const double nn1 = n * (n + 1.0);
    const double jb = scaled(reg.j[n], out.log_scale[n]);
    const double djb = scaled(reg.dj[n], out.log_scale[n]);
    Mat3c term = Mat3c::Zero();
    for (int m = -n; m <= n; ++m) {
      const double p = leg.p[n][std::abs(m)];
      const double t = leg.t[n][std::abs(m)];
      const double md = m;
      const cplx pa = std::exp(i * md * fr.phi_a);
      const cplx pb = std::exp(-i * md * fr.phi_b);
      const CVec3 ma = out.h[n] * (i * md * p * e_theta.cast<cplx>() - t * ep_a.cast<cplx>()) * pa;
      const CVec3 na = (out.h[n] / out.x * nn1 * p * er_a.cast<cplx>() +
                        out.dh[n] * (t * e_theta.cast<cplx>() + i * md * p * ep_a.cast<cplx>())) *
                       pa;
      const CVec3 mb = jb * (-i * md * p * e_theta.cast<cplx>() - t * ep_b.cast<cplx>()) * pb;
      const CVec3 nb = (jb / reg.x * nn1 * p * er_b.cast<cplx>() +
                        djb * (t * e_theta.cast<cplx>() - i * md * p * ep_b.cast<cplx>())) *
                       pb;
      term += ma * mb.transpose() + na * nb.transpose();
    }
    sum += (i * k / nn1) * term;
  }
  const Eigen::Matrix3cd rot = fr.axes.cast<cplx>();
  return rot * sum * rot.transpose();
}

}  // namespace nanopair::photonic::detail
