#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nanopair/photonic/rates.hpp"
#include "nanopair/scan/config.hpp"

namespace nanopair::scan {

enum class PointStatus { Ok, Degenerate, Failed };

struct PointRecord {
  double detuning = 0.0;
  double rabi = 0.0;
  PointStatus status = PointStatus::Ok;
  /// Residual below 1e-10 and status Ok.
  bool converged = false;
  double residual = 0.0;

  double fluorescence = 0.0;
  double concurrence = 0.0;
  double c1 = 0.0, c2 = 0.0;
  double variance = 0.0;
  double theta = 0.0;
  double relative_phase = 0.0;
  double two_level = 0.0;
  double spin_xi = 0.0;
  double spin_normal_variance = 0.0;
  double spin_length = 0.0;
  double rho44_perturbative = 0.0;
  double rho14_abs = 0.0;
  double populations[4] = {0.0, 0.0, 0.0, 0.0};
};

struct ScanGrid {
  SweepConfig config;
  /// Rates and pair in units of gamma0, exactly as fed to the solver.
  photonic::CouplingRates rates;
  photonic::EmitterPair pair;
  std::vector<double> detunings;
  std::vector<double> rabis;
  /// Omega0 outer, Delta inner.
  std::vector<PointRecord> records;

  const PointRecord& at(int rabi_index, int detuning_index) const {
    return records[static_cast<std::size_t>(rabi_index) * detunings.size() + detuning_index];
  }
};

struct AssembledRates {
  photonic::EmitterPair pair;  // gamma0 units
  photonic::CouplingRates rates;
  std::optional<photonic::RateDiagnostics> diagnostics;
};

/// Rates once per config: injected values as given, or extracted from the
/// sphere geometry in SI and divided by gamma0. Detection overrides applied.
AssembledRates assemble_rates(const SweepConfig& cfg);

/// One grid point; never throws for solver failures (they set status).
PointRecord evaluate_point(const SweepConfig& cfg, const photonic::EmitterPair& pair,
                           const photonic::CouplingRates& rates, double detuning, double rabi);

/// OpenMP over grid points; threads <= 0 keeps the runtime default.
/// Output is independent of the thread count.
ScanGrid run_sweep(const SweepConfig& cfg, int threads = 0);
/// Plain loop, kept as the reference for run_sweep.
ScanGrid run_sweep_serial(const SweepConfig& cfg);

/// Header plus one row per record, %.9g.
void emit_csv(const ScanGrid& grid, std::ostream& out);
void emit_csv(const ScanGrid& grid, const std::string& path);

inline constexpr double kSqueezingThreshold = -0.125;

bool below_threshold(const PointRecord& r);

struct ExtremumLocation {
  double value = 0.0;
  double detuning = 0.0;
  double rabi = 0.0;
  double theta = 0.0;
  bool found = false;
};

struct FluorescencePeaks {
  double rabi = 0.0;
  std::vector<double> detunings;
};

struct ExtremaReport {
  ExtremumLocation max_concurrence;
  ExtremumLocation min_variance;
  /// Interior local maxima along Delta (f[i-1] < f[i] >= f[i+1]) per Omega0.
  std::vector<FluorescencePeaks> peaks;
  int below_threshold_count = 0;
  /// Bounding box of the sub-threshold points.
  double region_detuning_min = 0.0, region_detuning_max = 0.0;
  double region_rabi_min = 0.0, region_rabi_max = 0.0;
  int failed_points = 0;
};

/// Only converged points take part. Throws InvalidArgument for an empty grid.
ExtremaReport report_extrema(const ScanGrid& grid);
void write_report(const ExtremaReport& report, std::ostream& out);

/// Rates as config keys, loadable through rates_file.
void write_rates(const AssembledRates& assembled, std::ostream& out);

std::string format_number(double v);

}  // namespace nanopair::scan
