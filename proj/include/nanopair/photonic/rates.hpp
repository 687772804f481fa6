#pragma once

#include <optional>

#include "nanopair/photonic/sphere.hpp"

namespace nanopair::photonic {

/// Two emitters with real dipole moments. Frequencies are stored as center
/// and splitting so that delta stays exact when the pair is rescaled.
struct EmitterPair {
  double omega0 = 0.0;  // (omega1 + omega2) / 2, rad/s
  double delta = 0.0;   // omega2 - omega1, rad/s
  Vec3 dipole1 = Vec3::Zero();  // C m
  Vec3 dipole2 = Vec3::Zero();
  Vec3 position1 = Vec3::Zero();  // m
  Vec3 position2 = Vec3::Zero();
  double gamma0 = 0.0;  // free-space decay rate of |dipole1| at omega0, rad/s

  double omega1() const { return omega0 - 0.5 * delta; }
  double omega2() const { return omega0 + 0.5 * delta; }
};

/// Vacuum spontaneous emission rate omega^3 |d|^2 / (3 pi eps0 hbar c^3).
double vacuum_decay_rate(double dipole_moment, double omega);

/// Inverse of vacuum_decay_rate.
double dipole_moment_for_rate(double gamma, double omega);

/// Builds a pair whose dipoles have the magnitude implied by gamma0 at omega0.
EmitterPair make_emitter_pair(double omega0, double delta, const Vec3& orientation1,
                              const Vec3& orientation2, const Vec3& position1,
                              const Vec3& position2, double gamma0);

enum class DipoleOrientation { Radial, Azimuthal, Polar };

/// Places emitter 1 on the +x axis and emitter 2 at azimuth separation_angle
/// in the xy plane, both at distance gap from the sphere surface. Radial
/// dipoles point away from the center, azimuthal ones along +phi, polar ones
/// along +z. Two radial emitters on opposite sides (angle pi) give negative
/// Omega12 and gamma12.
EmitterPair place_on_sphere(const SphereGeometry& geom, double gap, double separation_angle,
                            DipoleOrientation orientation, double omega0, double delta,
                            double gamma0);

/// Master-equation parameters. Rates share one frequency unit (rad/s, or
/// multiples of gamma0 after normalization).
struct CouplingRates {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double gamma12 = 0.0;
  double omega12 = 0.0;
  cplx f1 = 1.0;  // Omega_i = f_i * Omega_0
  cplx f2 = 1.0;
  cplx g1 = 1.0;  // far-field amplitude, single polarization component
  cplx g2 = 1.0;

  double phase1() const { return std::arg(g1); }
  double phase2() const { return std::arg(g2); }
};

/// Throws InvalidArgument unless all rates are finite, gamma_m >= 0 and
/// |gamma12| <= sqrt(gamma1 gamma2) (within a relative 1e-12).
void validate(const CouplingRates& rates);

/// Injected rates in units of gamma0 (balanced detection, g = 1).
CouplingRates injected_rates(double gamma, double gamma12, double omega12, cplx f);

/// Divides every frequency of the pair and the rates by unit.
EmitterPair rescaled(const EmitterPair& pair, double unit);
CouplingRates rescaled(const CouplingRates& rates, double unit);

struct Illumination {
  Vec3 polarization = Vec3::UnitZ();
  Vec3 propagation = Vec3::UnitX();
};

struct Detection {
  Vec3 direction = Vec3::UnitX();  // far-field direction from the sphere center
  /// Field component recorded. Its projection transverse to direction is used.
  Vec3 polarization = Vec3::UnitZ();
};

struct RateDiagnostics {
  int orders_used = 0;
  double truncation_estimate = 0.0;
  /// Self-energy shifts Re(d G_s d) per emitter, rad/s. Not applied: the bare
  /// transition frequencies are taken as already renormalized.
  double shift1 = 0.0;
  double shift2 = 0.0;
  /// (|g1|^2 + |g2|^2) over the same quantity without the sphere.
  double far_field_enhancement = 1.0;
};

struct ExtractedRates {
  CouplingRates rates;
  RateDiagnostics diagnostics;
};

/// All rates at omega0 from the free-space plus (optional) sphere-scattered
/// tensors. g_i is normalized to omega0^2 |d_i| / (4 pi eps0 c^2), so that in
/// vacuum |g_i| <= 1. Throws ConvergenceError if any Mie series misses its
/// tolerance, SingularityError for coincident emitters.
ExtractedRates extract_rates(const EmitterPair& pair, const SphereGeometry* geom,
                             const Illumination& drive, const Detection& detector,
                             const SeriesOptions& options = {});

}  // namespace nanopair::photonic
