#pragma once

#include <utility>
#include <vector>

#include "nanopair/photonic/green.hpp"
#include "nanopair/photonic/material.hpp"

namespace nanopair::photonic {

struct SphereGeometry {
  double radius = 40e-9;  // m
  Vec3 center = Vec3::Zero();
  Material material = gold_drude_lorentz();
  double host_eps = 1.0;
};

struct SeriesOptions {
  int max_order = 40;
  double tail_tolerance = 1e-8;
};

/// Result of a truncated multipole sum.
struct SeriesResult {
  Mat3c tensor = Mat3c::Zero();
  int orders_used = 0;
  /// Largest Frobenius norm of the last two retained orders over the norm of
  /// the running sum.
  double truncation_estimate = 0.0;
  bool converged = false;
};

struct ScatteredGreen {
  DyadicGreen green;
  int orders_used = 0;
  double truncation_estimate = 0.0;
  bool converged = false;
};

/// Mie coefficients a_n, b_n (Bohren-Huffman convention) for n = 1..n_max.
/// Element 0 is unused. High orders may underflow to zero.
std::vector<std::pair<cplx, cplx>> mie_coefficients(const SphereGeometry& geom, double omega,
                                                    int n_max);

/// Scattered part of the Green's tensor for two points outside the sphere.
/// Throws GeometryError if either point is inside or on the sphere and
/// InvalidArgument if max_order < 1. Non-convergence is reported through the
/// flag, not thrown.
ScatteredGreen sphere_scattered_green(const SphereGeometry& geom, const Vec3& field,
                                      const Vec3& source, double omega,
                                      const SeriesOptions& options = {});

/// Far-zone response W(r, s) = lim_{L->inf} 4 pi L exp(-ikL) G(r, r_c + L s),
/// free plus scattered parts, for a point r outside the sphere (or anywhere
/// when geom is null). Two uses:
///   * plane wave p exp(i k khat.r) incident on the sphere: E(r) = W(r, -khat) p
///   * far-field amplitude toward direction s: G(r_c + L s, r) ~ exp(ikL)/(4 pi L) W(r, s)^T
SeriesResult far_field_response(const SphereGeometry* geom, const Vec3& point,
                                const Vec3& direction, double omega,
                                const SeriesOptions& options = {});

/// Total electric field at point for a unit-amplitude plane wave.
CVec3 plane_wave_total_field(const SphereGeometry* geom, const Vec3& point,
                             const Vec3& polarization, const Vec3& propagation, double omega,
                             const SeriesOptions& options = {});

}  // namespace nanopair::photonic
