#pragma once

#include <filesystem>
#include <string>

#include "nanopair/photonic/rates.hpp"

namespace nanopair::scan {

enum class RatesSource { Injected, Green };

/// Balanced: |g1| = |g2| = 1 with phases from the rates (0 when injected).
/// Explicit: g_i from g*_abs and phi*_rad. Geometry: amplitudes from the
/// Green's tensor unchanged (only meaningful with RatesSource::Green).
enum class DetectionMode { Balanced, Explicit, Geometry };

struct Axis {
  double min = 0.0;
  double max = 0.0;
  int count = 1;

  /// count == 1 gives min.
  double at(int i) const;
};

struct ObservableSelection {
  bool fluorescence = true;
  bool concurrence = true;
  bool variance = true;
  bool two_level = false;
  bool spin = false;
  bool rho44 = false;
};

/// Every rate-like quantity is in units of gamma0 (the free-space decay rate
/// of one emitter at omega0).
struct SweepConfig {
  RatesSource source = RatesSource::Injected;

  // Injected rates.
  double gamma1 = 1.0, gamma2 = 1.0, gamma12 = 0.0, omega12 = 0.0;
  cplx f1 = 1.0, f2 = 1.0;

  DetectionMode detection = DetectionMode::Balanced;
  double g1_abs = 1.0, g2_abs = 1.0, phi1 = 0.0, phi2 = 0.0;

  double wavelength_nm = 780.0;
  double delta = 400.0;
  double gamma0_per_s = 2.0 * constants::pi * 10e6;

  // Green's-tensor geometry.
  double radius_nm = 40.0;
  double gap_nm = 25.0;
  double angle_deg = 180.0;
  photonic::DipoleOrientation orientation = photonic::DipoleOrientation::Radial;
  photonic::Illumination illumination{Vec3::UnitX(), Vec3::UnitZ()};
  photonic::Detection detector{Vec3::UnitZ(), Vec3::UnitX()};
  photonic::SeriesOptions series;

  Axis detuning{0.0, 0.0, 1};
  Axis rabi{0.0, 0.0, 1};
  /// gamma*_m = dephasing_ratio * gamma_m.
  double dephasing_ratio = 0.0;
  /// Relative scattering phases scanned by the variance optimizer (0: keep
  /// the configured phases).
  int relative_phase_points = 0;
  ObservableSelection observables;
};

/// Flat "key = value" text; '#' starts a comment. "rates_file = path"
/// splices another file in place (relative to the including file). Later
/// keys override earlier ones. Throws InvalidArgument on unknown keys,
/// malformed values or failed validation.
SweepConfig parse_config(const std::string& text,
                         const std::filesystem::path& base_dir = ".");
SweepConfig load_config(const std::filesystem::path& path);

/// Applies one key to cfg (used by the parser; exposed for overrides).
void apply_key(SweepConfig& cfg, const std::string& key, const std::string& value,
               const std::filesystem::path& base_dir);

/// Axis counts >= 1, finite values, non-negative rates and dephasing.
void validate(const SweepConfig& cfg);

}  // namespace nanopair::scan
