#include "nanopair/scan/sweep.hpp"

#include <omp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>

#include "nanopair/observables/observables.hpp"

namespace nanopair::scan {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kConvergedResidual = 1e-10;

const char* status_name(PointStatus s) {
  switch (s) {
    case PointStatus::Ok: return "ok";
    case PointStatus::Degenerate: return "degenerate";
    case PointStatus::Failed: return "failed";
  }
  return "failed";
}

void blank(PointRecord& r) {
  r.residual = r.fluorescence = r.concurrence = r.c1 = r.c2 = kNaN;
  r.variance = r.theta = r.relative_phase = r.two_level = kNaN;
  r.spin_xi = r.spin_normal_variance = r.spin_length = r.rho44_perturbative = kNaN;
  r.rho14_abs = kNaN;
  for (double& p : r.populations) p = kNaN;
}

ScanGrid empty_grid(const SweepConfig& cfg) {
  validate(cfg);
  ScanGrid g;
  g.config = cfg;
  const AssembledRates a = assemble_rates(cfg);
  g.pair = a.pair;
  g.rates = a.rates;
  for (int i = 0; i < cfg.detuning.count; ++i) g.detunings.push_back(cfg.detuning.at(i));
  for (int i = 0; i < cfg.rabi.count; ++i) g.rabis.push_back(cfg.rabi.at(i));
  g.records.resize(g.detunings.size() * g.rabis.size());
  return g;
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

AssembledRates assemble_rates(const SweepConfig& cfg) {
  validate(cfg);
  const double omega0 = photonic::omega_from_wavelength(cfg.wavelength_nm * 1e-9);
  const double unit = cfg.gamma0_per_s;
  AssembledRates out;
  if (cfg.source == RatesSource::Injected) {
    out.pair.omega0 = omega0 / unit;
    out.pair.delta = cfg.delta;
    out.pair.gamma0 = 1.0;
    out.rates.gamma1 = cfg.gamma1;
    out.rates.gamma2 = cfg.gamma2;
    out.rates.gamma12 = cfg.gamma12;
    out.rates.omega12 = cfg.omega12;
    out.rates.f1 = cfg.f1;
    out.rates.f2 = cfg.f2;
  } else {
    photonic::SphereGeometry geom;
    geom.radius = cfg.radius_nm * 1e-9;
    const auto pair = photonic::place_on_sphere(geom, cfg.gap_nm * 1e-9,
                                                cfg.angle_deg * constants::pi / 180.0,
                                                cfg.orientation, omega0, cfg.delta * unit, unit);
    const auto ex = photonic::extract_rates(pair, &geom, cfg.illumination, cfg.detector, cfg.series);
    out.pair = photonic::rescaled(pair, unit);
    out.rates = photonic::rescaled(ex.rates, unit);
    out.diagnostics = ex.diagnostics;
    out.diagnostics->shift1 /= unit;
    out.diagnostics->shift2 /= unit;
  }
  switch (cfg.detection) {
    case DetectionMode::Balanced:
      out.rates.g1 = std::polar(1.0, std::arg(out.rates.g1));
      out.rates.g2 = std::polar(1.0, std::arg(out.rates.g2));
      break;
    case DetectionMode::Explicit:
      out.rates.g1 = std::polar(cfg.g1_abs, cfg.phi1);
      out.rates.g2 = std::polar(cfg.g2_abs, cfg.phi2);
      break;
    case DetectionMode::Geometry:
      break;
  }
  return out;
}

PointRecord evaluate_point(const SweepConfig& cfg, const photonic::EmitterPair& pair,
                           const photonic::CouplingRates& rates, double detuning, double rabi) {
  PointRecord rec;
  rec.detuning = detuning;
  rec.rabi = rabi;
  blank(rec);
  dynamics::DriveDetection drive;
  drive.detuning = detuning;
  drive.rabi0 = rabi;
  drive.dephasing1 = cfg.dephasing_ratio * rates.gamma1;
  drive.dephasing2 = cfg.dephasing_ratio * rates.gamma2;

  dynamics::SteadyState ss;
  try {
    ss = dynamics::steady_state(
        dynamics::build_liouvillian(dynamics::build_hamiltonian(pair, rates, drive), rates, drive));
  } catch (const DegenerateSteadyStateError&) {
    rec.status = PointStatus::Degenerate;
    return rec;
  } catch (const Error&) {
    rec.status = PointStatus::Failed;
    return rec;
  }
  const auto& rho = ss.rho;
  rec.residual = ss.residual;
  rec.converged = ss.residual < kConvergedResidual;
  rec.rho14_abs = std::abs(rho(0, 3));
  for (int i = 0; i < 4; ++i) rec.populations[i] = rho(i, i).real();

  try {
    const auto& sel = cfg.observables;
    if (sel.fluorescence) rec.fluorescence = observables::fluorescence(rho, rates);
    if (sel.concurrence) {
      rec.concurrence = observables::concurrence(rho);
      const auto x = observables::concurrence_cross_approx(rho);
      rec.c1 = x.c1;
      rec.c2 = x.c2;
    }
    if (sel.variance) {
      const auto q = observables::optimize_quadrature(rho, rates, cfg.relative_phase_points);
      rec.variance = q.total;
      rec.theta = q.theta;
      rec.relative_phase = q.relative_phase;
    }
    if (sel.two_level)
      rec.two_level =
          observables::squeezing_two_level_approx(rho, {rates.phase1(), rates.phase2()}).optimum;
    if (sel.spin) {
      const auto s = observables::spin_squeezing(rho);
      rec.spin_xi = s.xi;
      rec.spin_normal_variance = s.normal_variance;
      rec.spin_length = s.length;
    }
    if (sel.rho44) rec.rho44_perturbative = observables::rho44_perturbative(pair, rates, drive).value;
  } catch (const Error&) {
    rec.status = PointStatus::Failed;
    rec.converged = false;
  }
  return rec;
}

ScanGrid run_sweep_serial(const SweepConfig& cfg) {
  ScanGrid g = empty_grid(cfg);
  const std::size_t nd = g.detunings.size();
  for (std::size_t k = 0; k < g.records.size(); ++k)
    g.records[k] = evaluate_point(cfg, g.pair, g.rates, g.detunings[k % nd], g.rabis[k / nd]);
  return g;
}

ScanGrid run_sweep(const SweepConfig& cfg, int threads) {
  ScanGrid g = empty_grid(cfg);
  const long nd = static_cast<long>(g.detunings.size());
  const long n = static_cast<long>(g.records.size());
  const int nthreads = threads > 0 ? threads : omp_get_max_threads();
  // Each record is written by exactly one iteration; order is fixed by index.
#pragma omp parallel for schedule(dynamic, 16) num_threads(nthreads)
  for (long k = 0; k < n; ++k)
    g.records[k] = evaluate_point(cfg, g.pair, g.rates, g.detunings[k % nd], g.rabis[k / nd]);
  return g;
}

void emit_csv(const ScanGrid& grid, std::ostream& out) {
  const auto& sel = grid.config.observables;
  out << "rabi0_over_gamma0,detuning_over_gamma0,status,converged,residual";
  if (sel.fluorescence) out << ",fluorescence_per_g2";
  if (sel.concurrence) out << ",concurrence,c1,c2";
  if (sel.variance) out << ",variance_min_over_2g2,theta_opt_rad,relative_phase_rad";
  if (sel.two_level) out << ",two_level_variance_over_2g2";
  if (sel.spin) out << ",spin_xi,spin_normal_variance,spin_length";
  if (sel.rho44) out << ",rho44_perturbative";
  out << ",rho11,rho22,rho33,rho44,rho14_abs\n";
  for (const auto& r : grid.records) {
    auto f = [&](double v) { out << ',' << format_number(v); };
    out << format_number(r.rabi) << ',' << format_number(r.detuning) << ',' << status_name(r.status)
        << ',' << (r.converged ? 1 : 0);
    f(r.residual);
    if (sel.fluorescence) f(r.fluorescence);
    if (sel.concurrence) {
      f(r.concurrence);
      f(r.c1);
      f(r.c2);
    }
    if (sel.variance) {
      f(r.variance);
      f(r.theta);
      f(r.relative_phase);
    }
    if (sel.two_level) f(r.two_level);
    if (sel.spin) {
      f(r.spin_xi);
      f(r.spin_normal_variance);
      f(r.spin_length);
    }
    if (sel.rho44) f(r.rho44_perturbative);
    for (double p : r.populations) f(p);
    f(r.rho14_abs);
    out << '\n';
  }
}

void emit_csv(const ScanGrid& grid, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path);
  emit_csv(grid, out);
  if (!out) throw InvalidArgument("error writing " + path);
}

bool below_threshold(const PointRecord& r) {
  return r.converged && r.variance < kSqueezingThreshold;
}

ExtremaReport report_extrema(const ScanGrid& grid) {
  if (grid.records.empty()) throw InvalidArgument("report_extrema: empty grid");
  ExtremaReport rep;
  const auto& sel = grid.config.observables;
  for (const auto& r : grid.records) {
    if (!r.converged) {
      ++rep.failed_points;
      continue;
    }
    if (sel.concurrence && (!rep.max_concurrence.found || r.concurrence > rep.max_concurrence.value))
      rep.max_concurrence = {r.concurrence, r.detuning, r.rabi, 0.0, true};
    if (sel.variance && (!rep.min_variance.found || r.variance < rep.min_variance.value))
      rep.min_variance = {r.variance, r.detuning, r.rabi, r.theta, true};
    if (sel.variance && below_threshold(r)) {
      if (rep.below_threshold_count == 0) {
        rep.region_detuning_min = rep.region_detuning_max = r.detuning;
        rep.region_rabi_min = rep.region_rabi_max = r.rabi;
      }
      ++rep.below_threshold_count;
      rep.region_detuning_min = std::min(rep.region_detuning_min, r.detuning);
      rep.region_detuning_max = std::max(rep.region_detuning_max, r.detuning);
      rep.region_rabi_min = std::min(rep.region_rabi_min, r.rabi);
      rep.region_rabi_max = std::max(rep.region_rabi_max, r.rabi);
    }
  }
  if (sel.fluorescence) {
    const std::size_t nd = grid.detunings.size();
    for (std::size_t j = 0; j < grid.rabis.size(); ++j) {
      FluorescencePeaks row{grid.rabis[j], {}};
      for (std::size_t i = 1; i + 1 < nd; ++i) {
        const auto& l = grid.at(j, i - 1);
        const auto& c = grid.at(j, i);
        const auto& r = grid.at(j, i + 1);
        if (!(l.converged && c.converged && r.converged)) continue;
        if (c.fluorescence > l.fluorescence && c.fluorescence >= r.fluorescence)
          row.detunings.push_back(c.detuning);
      }
      rep.peaks.push_back(std::move(row));
    }
  }
  return rep;
}

void write_report(const ExtremaReport& rep, std::ostream& out) {
  auto kv = [&](const std::string& k, double v) { out << k << '=' << format_number(v) << '\n'; };
  if (rep.max_concurrence.found) {
    kv("max_concurrence", rep.max_concurrence.value);
    kv("max_concurrence_detuning_over_gamma0", rep.max_concurrence.detuning);
    kv("max_concurrence_rabi0_over_gamma0", rep.max_concurrence.rabi);
  }
  if (rep.min_variance.found) {
    kv("min_variance_over_2g2", rep.min_variance.value);
    kv("min_variance_detuning_over_gamma0", rep.min_variance.detuning);
    kv("min_variance_rabi0_over_gamma0", rep.min_variance.rabi);
    kv("min_variance_theta_rad", rep.min_variance.theta);
    out << "below_threshold_count=" << rep.below_threshold_count << '\n';
    if (rep.below_threshold_count > 0) {
      kv("below_threshold_detuning_min_over_gamma0", rep.region_detuning_min);
      kv("below_threshold_detuning_max_over_gamma0", rep.region_detuning_max);
      kv("below_threshold_rabi0_min_over_gamma0", rep.region_rabi_min);
      kv("below_threshold_rabi0_max_over_gamma0", rep.region_rabi_max);
    }
  }
  for (const auto& row : rep.peaks) {
    out << "fluorescence_peaks_at_rabi0_" << format_number(row.rabi) << '=';
    for (std::size_t i = 0; i < row.detunings.size(); ++i)
      out << (i ? ";" : "") << format_number(row.detunings[i]);
    out << '\n';
  }
  out << "failed_points=" << rep.failed_points << '\n';
}

void write_rates(const AssembledRates& a, std::ostream& out) {
  auto kv = [&](const std::string& k, double v) { out << k << " = " << format_number(v) << '\n'; };
  auto kc = [&](const std::string& k, cplx v) {
    out << k << " = " << format_number(v.real()) << ',' << format_number(v.imag()) << '\n';
  };
  out << "# rates in units of gamma0\n";
  kv("gamma1_over_gamma0", a.rates.gamma1);
  kv("gamma2_over_gamma0", a.rates.gamma2);
  kv("gamma12_over_gamma0", a.rates.gamma12);
  kv("omega12_over_gamma0", a.rates.omega12);
  kc("f1", a.rates.f1);
  kc("f2", a.rates.f2);
  kv("g1_abs", std::abs(a.rates.g1));
  kv("g2_abs", std::abs(a.rates.g2));
  kv("phi1_rad", a.rates.phase1());
  kv("phi2_rad", a.rates.phase2());
  if (a.diagnostics) {
    const auto& d = *a.diagnostics;
    out << "# orders_used = " << d.orders_used << '\n';
    out << "# truncation_estimate = " << format_number(d.truncation_estimate) << '\n';
    out << "# shift1_over_gamma0 = " << format_number(d.shift1) << '\n';
    out << "# shift2_over_gamma0 = " << format_number(d.shift2) << '\n';
    out << "# far_field_enhancement = " << format_number(d.far_field_enhancement) << '\n';
  }
}

}  // namespace nanopair::scan
