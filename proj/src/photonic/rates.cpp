#include "nanopair/photonic/rates.hpp"

#include <cmath>
#include <string>

namespace nanopair::photonic {

namespace {

double coupling_prefactor(double omega) {
  return omega * omega / (constants::hbar * constants::eps0 * constants::c * constants::c);
}

void require_converged(bool converged, double estimate, const char* what) {
  if (!converged) {
    throw ConvergenceError(std::string(what) + ": Mie series truncation estimate " +
                           std::to_string(estimate) + " above tolerance");
  }
}

}  // namespace

double vacuum_decay_rate(double dipole_moment, double omega) {
  const double c3 = constants::c * constants::c * constants::c;
  return std::pow(omega, 3) * dipole_moment * dipole_moment /
         (3.0 * constants::pi * constants::eps0 * constants::hbar * c3);
}

double dipole_moment_for_rate(double gamma, double omega) {
  if (!(gamma > 0.0) || !(omega > 0.0)) throw InvalidArgument("gamma and omega must be positive");
  return std::sqrt(gamma / vacuum_decay_rate(1.0, omega));
}

EmitterPair make_emitter_pair(double omega0, double delta, const Vec3& orientation1,
                              const Vec3& orientation2, const Vec3& position1,
                              const Vec3& position2, double gamma0) {
  if (!(orientation1.norm() > 0.0) || !(orientation2.norm() > 0.0)) {
    throw InvalidArgument("dipole orientations must be nonzero");
  }
  const double d = dipole_moment_for_rate(gamma0, omega0);
  EmitterPair p;
  p.omega0 = omega0;
  p.delta = delta;
  p.dipole1 = d * orientation1.normalized();
  p.dipole2 = d * orientation2.normalized();
  p.position1 = position1;
  p.position2 = position2;
  p.gamma0 = gamma0;
  return p;
}

EmitterPair place_on_sphere(const SphereGeometry& geom, double gap, double separation_angle,
                            DipoleOrientation orientation, double omega0, double delta,
                            double gamma0) {
  if (!(gap > 0.0)) throw GeometryError("emitters must sit outside the sphere (gap > 0)");
  const double rho = geom.radius + gap;
  const Vec3 u1 = Vec3::UnitX();
  const Vec3 u2(std::cos(separation_angle), std::sin(separation_angle), 0.0);
  auto axis = [&](const Vec3& radial) -> Vec3 {
    switch (orientation) {
      case DipoleOrientation::Radial: return radial;
      case DipoleOrientation::Azimuthal: return Vec3(-radial.y(), radial.x(), 0.0);
      case DipoleOrientation::Polar: return Vec3::UnitZ();
    }
    return radial;
  };
  return make_emitter_pair(omega0, delta, axis(u1), axis(u2), geom.center + rho * u1,
                           geom.center + rho * u2, gamma0);
}

void validate(const CouplingRates& r) {
  const double vals[] = {r.gamma1, r.gamma2, r.gamma12, r.omega12};
  for (double v : vals) {
    if (!std::isfinite(v)) throw InvalidArgument("coupling rates must be finite");
  }
  for (cplx v : {r.f1, r.f2, r.g1, r.g2}) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw InvalidArgument("field factors must be finite");
    }
  }
  if (r.gamma1 < 0.0 || r.gamma2 < 0.0) throw InvalidArgument("decay rates must be >= 0");
  const double bound = std::sqrt(r.gamma1 * r.gamma2);
  if (std::abs(r.gamma12) > bound * (1.0 + 1e-12)) {
    throw InvalidArgument("|gamma12| exceeds sqrt(gamma1 gamma2): decay matrix not positive");
  }
}

CouplingRates injected_rates(double gamma, double gamma12, double omega12, cplx f) {
  CouplingRates r;
  r.gamma1 = r.gamma2 = gamma;
  r.gamma12 = gamma12;
  r.omega12 = omega12;
  r.f1 = r.f2 = f;
  r.g1 = r.g2 = 1.0;
  validate(r);
  return r;
}

EmitterPair rescaled(const EmitterPair& pair, double unit) {
  if (!(unit > 0.0)) throw InvalidArgument("unit must be positive");
  EmitterPair p = pair;
  p.omega0 /= unit;
  p.delta /= unit;
  p.gamma0 /= unit;
  return p;
}

CouplingRates rescaled(const CouplingRates& rates, double unit) {
  if (!(unit > 0.0)) throw InvalidArgument("unit must be positive");
  CouplingRates r = rates;
  r.gamma1 /= unit;
  r.gamma2 /= unit;
  r.gamma12 /= unit;
  r.omega12 /= unit;
  return r;
}

ExtractedRates extract_rates(const EmitterPair& pair, const SphereGeometry* geom,
                             const Illumination& drive, const Detection& detector,
                             const SeriesOptions& options) {
  const double w = pair.omega0;
  const double host = geom ? geom->host_eps : 1.0;
  const double k = host_wavenumber(w, host);
  const double kappa = coupling_prefactor(w);
  const Vec3& r1 = pair.position1;
  const Vec3& r2 = pair.position2;
  const Vec3& d1 = pair.dipole1;
  const Vec3& d2 = pair.dipole2;

  ExtractedRates out;
  RateDiagnostics& diag = out.diagnostics;
  auto track = [&](int orders, double estimate) {
    diag.orders_used = std::max(diag.orders_used, orders);
    diag.truncation_estimate = std::max(diag.truncation_estimate, estimate);
  };

  const double im0 = k / (6.0 * constants::pi);
  Mat3c g11 = Mat3c::Identity() * cplx(0.0, im0);
  Mat3c g22 = g11;
  Mat3c g12 = free_space_green(r1, r2, w, host).tensor;
  if (geom) {
    const auto s11 = sphere_scattered_green(*geom, r1, r1, w, options);
    const auto s22 = sphere_scattered_green(*geom, r2, r2, w, options);
    const auto s12 = sphere_scattered_green(*geom, r1, r2, w, options);
    for (const auto* s : {&s11, &s22, &s12}) {
      require_converged(s->converged, s->truncation_estimate, "scattered Green tensor");
      track(s->orders_used, s->truncation_estimate);
    }
    g11 += s11.green.tensor;
    g22 += s22.green.tensor;
    g12 += s12.green.tensor;
    diag.shift1 = kappa * d1.dot(s11.green.tensor.real() * d1);
    diag.shift2 = kappa * d2.dot(s22.green.tensor.real() * d2);
  }

  CouplingRates& r = out.rates;
  r.gamma1 = 2.0 * kappa * d1.dot(g11.imag() * d1);
  r.gamma2 = 2.0 * kappa * d2.dot(g22.imag() * d2);
  const cplx c12 = kappa * (d1.cast<cplx>().transpose() * g12 * d2.cast<cplx>())(0, 0);
  r.omega12 = c12.real();
  r.gamma12 = 2.0 * c12.imag();

  const Vec3 u1 = d1.normalized();
  const Vec3 u2 = d2.normalized();
  const CVec3 e1 = plane_wave_total_field(geom, r1, drive.polarization, drive.propagation, w, options);
  const CVec3 e2 = plane_wave_total_field(geom, r2, drive.polarization, drive.propagation, w, options);
  r.f1 = u1.cast<cplx>().dot(e1);
  r.f2 = u2.cast<cplx>().dot(e2);

  const Vec3 s = detector.direction.normalized();
  const Vec3 pol_t = detector.polarization - s * s.dot(detector.polarization);
  if (!(pol_t.norm() > 1e-12 * detector.polarization.norm())) {
    throw InvalidArgument("detection polarization has no component transverse to the direction");
  }
  const CVec3 e = pol_t.normalized().cast<cplx>();
  auto amplitude = [&](const SphereGeometry* g, const Vec3& pos, const Vec3& u) {
    const SeriesResult wr = far_field_response(g, pos, s, w, options);
    if (g) {
      require_converged(wr.converged, wr.truncation_estimate, "far-field response");
      track(wr.orders_used, wr.truncation_estimate);
    }
    return (u.cast<cplx>().transpose() * wr.tensor * e)(0, 0);
  };
  r.g1 = amplitude(geom, r1, u1);
  r.g2 = amplitude(geom, r2, u2);
  if (geom) {
    const cplx v1 = amplitude(nullptr, r1 - geom->center, u1);
    const cplx v2 = amplitude(nullptr, r2 - geom->center, u2);
    const double vac = std::norm(v1) + std::norm(v2);
    diag.far_field_enhancement =
        vac > 0.0 ? (std::norm(r.g1) + std::norm(r.g2)) / vac : std::nan("");
  }
  validate(r);
  return out;
}

}  // namespace nanopair::photonic
