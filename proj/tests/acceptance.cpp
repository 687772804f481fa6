// One PASS/FAIL line per acceptance criterion. Exit status 1 if any fails.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "nanopair/observables/observables.hpp"
#include "nanopair/scan/sweep.hpp"

using namespace nanopair;
using namespace nanopair::scan;

namespace {

// Tolerances, fixed here.
constexpr double kPeakSteps0 = 1.0;        // two-photon peak, grid steps
constexpr double kPeakSteps1 = 2.0;        // single-photon peaks, grid steps
constexpr double kMaxC = 0.30, kMaxCTol = 0.05;
constexpr double kNearResonance = 10.0;    // |Delta| in gamma0 counted as "near Delta = 0"
constexpr double kMinV = -0.21, kMinVTol = 0.03;
constexpr double kRabiAtMinV = 75.0, kRabiAtMinVTol = 15.0;
constexpr double kThresholdSlack = 1e-6;
constexpr double kApproxRel = 0.05;        // criterion 4
constexpr double kConcurrenceFloor = 0.05;
constexpr double kNoSqueezing = -1e-9;     // criterion 5
constexpr double kResidual = 1e-10;        // criterion 6
constexpr double kPropagationAgree = 1e-8;
constexpr double kRho44Rel = 0.10;         // criterion 7
constexpr double kVacuumRel = 1e-9;        // criterion 8
constexpr double kReciprocity = 1e-10;
constexpr double kGeometryRel = 0.30;
constexpr double kSpinLength = 1e-6;       // criterion 9

int failures = 0;

void line(int id, bool ok, const std::string& what, const std::string& detail) {
  std::printf("[%s] %d %s: %s\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

SweepConfig config(const std::string& name, const std::string& extra = "") {
  const std::string dir = NANOPAIR_CONFIG_DIR;
  return parse_config("rates_file = " + name + ".conf\n" + extra, dir);
}

double min_variance_where(const ScanGrid& g, double max_abs_detuning) {
  double v = 0.0;
  for (const auto& r : g.records)
    if (r.converged && std::abs(r.detuning) <= max_abs_detuning) v = std::min(v, r.variance);
  return v;
}

bool all_converged(const ScanGrid& g) {
  return std::all_of(g.records.begin(), g.records.end(), [](const PointRecord& r) { return r.converged; });
}

void criterion1() {
  const auto cfg = config("fluorescence_map", "rabi_min_over_gamma0 = 60\nrabi_count = 1\n");
  const auto grid = run_sweep(cfg);
  const auto rep = report_extrema(grid);
  const double step = (cfg.detuning.max - cfg.detuning.min) / (cfg.detuning.count - 1);
  const double single = std::sqrt(0.25 * cfg.delta * cfg.delta + cfg.omega12 * cfg.omega12);
  auto nearest = [&](double target) {
    double best = 1e300;
    for (double d : rep.peaks.at(0).detunings) best = std::min(best, std::abs(d - target));
    return best;
  };
  const double d0 = nearest(0.0), dm = nearest(-single), dp = nearest(single);
  const bool ok = all_converged(grid) && d0 <= kPeakSteps0 * step && dm <= kPeakSteps1 * step &&
                  dp <= kPeakSteps1 * step;
  line(1, ok, "two-photon fluorescence peak",
       fmt("Omega0=60, step %.4g: peak offsets |0|=%.3g, |-%.2f|=%.3g, |+%.2f|=%.3g", step, d0,
           single, dm, single, dp));
}

void criterion2() {
  const auto grid = run_sweep(config("concurrence_map"));
  const auto rep = report_extrema(grid);
  const auto& m = rep.max_concurrence;
  // Location of the row maximum at the lowest and highest drive with C > 0.05.
  double shift_lo = NAN, shift_hi = NAN;
  for (std::size_t j = 0; j < grid.rabis.size(); ++j) {
    double best = 0.0, at = NAN;
    for (std::size_t i = 0; i < grid.detunings.size(); ++i) {
      const auto& r = grid.at(j, i);
      if (r.converged && r.concurrence > best) best = r.concurrence, at = r.detuning;
    }
    if (best > kConcurrenceFloor) {
      if (std::isnan(shift_lo)) shift_lo = at;
      shift_hi = at;
    }
  }
  const bool ok = all_converged(grid) && std::abs(m.value - kMaxC) <= kMaxCTol &&
                  std::abs(m.detuning) <= kNearResonance && m.detuning >= 0.0 && shift_hi > shift_lo;
  line(2, ok, "concurrence maximum",
       fmt("max C=%.4f (target %.2f+-%.2f) at Delta=%.3g, Omega0=%.4g; row-max Delta %.3g -> %.3g",
           m.value, kMaxC, kMaxCTol, m.detuning, m.rabi, shift_lo, shift_hi));
}

void criterion3() {
  const auto grid = run_sweep(config("squeezing_map"));
  const auto rep = report_extrema(grid);
  const auto& m = rep.min_variance;
  const auto uncoupled = report_extrema(run_sweep(config("squeezing_map_uncoupled")));
  const bool ok = all_converged(grid) && std::abs(m.value - kMinV) <= kMinVTol &&
                  std::abs(m.rabi - kRabiAtMinV) <= kRabiAtMinVTol &&
                  std::abs(m.detuning) <= kNearResonance && rep.below_threshold_count > 0 &&
                  uncoupled.min_variance.value >= kSqueezingThreshold - kThresholdSlack;
  line(3, ok, "squeezing extremum and threshold",
       fmt("min V=%.4f at Delta=%.3g, Omega0=%.4g; %d points below -0.125; uncoupled min %.6f",
           m.value, m.detuning, m.rabi, rep.below_threshold_count, uncoupled.min_variance.value));
}

void criterion4() {
  // Phases theta and phi_i optimized, as in the line scan.
  const auto grid = run_sweep(config("squeezing_line"));
  double full = NAN, eq3 = NAN;
  double worst_c = 0.0, worst_at = NAN;
  int checked = 0;
  for (const auto& r : grid.records) {
    if (!r.converged) continue;
    if (std::abs(r.detuning) < 1e-12) full = r.variance, eq3 = r.two_level;
    if (r.concurrence > kConcurrenceFloor) {
      ++checked;
      const double rel = std::abs(r.c1 - r.concurrence) / r.concurrence;
      if (rel > worst_c) worst_c = rel, worst_at = r.detuning;
    }
  }
  const double rel_v = std::abs(eq3 - full) / std::abs(full);
  const bool ok = all_converged(grid) && rel_v <= kApproxRel && checked > 0 && worst_c <= kApproxRel;
  line(4, ok, "weak-drive approximations",
       fmt("Omega0=60, Delta=0: two-level %.4f vs full %.4f (rel %.3g); C1 vs C worst rel %.3g at "
           "Delta=%.3g over %d points with C>0.05",
           eq3, full, rel_v, worst_c, worst_at, checked));
}

void criterion5() {
  const auto coupled = run_sweep(config("dephasing_map"));
  const auto uncoupled = run_sweep(config("dephasing_map_uncoupled"));
  const double u_min = report_extrema(uncoupled).min_variance.value;
  const double c_min = min_variance_where(coupled, kNearResonance);

  // Single emitter (second one undriven and unobserved) on its own resonance.
  auto single_min = [](double ratio) {
    auto cfg = parse_config(
        "gamma_over_gamma0 = 1\nf1 = 1\nf2 = 0\ndetection = explicit\ng2_abs = 0\n"
        "delta_over_gamma0 = 400\nobservables = variance\n"
        "detuning_min_over_gamma0 = -202\ndetuning_max_over_gamma0 = -198\ndetuning_count = 41\n"
        "rabi_min_over_gamma0 = 0.05\nrabi_max_over_gamma0 = 2\nrabi_count = 40\n"
        "dephasing_over_gamma = " + std::to_string(ratio) + "\n");
    return report_extrema(run_sweep(cfg)).min_variance.value;
  };
  const double at_half = single_min(0.5), below = single_min(0.45);
  const bool ok = all_converged(coupled) && all_converged(uncoupled) && u_min >= kNoSqueezing &&
                  c_min < kNoSqueezing && at_half >= kNoSqueezing && below < kNoSqueezing;
  line(5, ok, "dephasing robustness",
       fmt("gamma*=2gamma: uncoupled min %.3g, coupled min near Delta=0 %.3g; single emitter "
           "min %.3g at gamma*=gamma/2, %.3g at 0.45 gamma",
           u_min, c_min, at_half, below));
}

void criterion6() {
  const auto grid = run_sweep(config("squeezing_map"));
  double worst_res = 0.0;
  for (const auto& r : grid.records) worst_res = std::max(worst_res, r.residual);

  const auto assembled = assemble_rates(config("squeezing_map"));
  double worst_agree = 0.0, worst_herm = 0.0, worst_trace = 0.0, min_eig = 0.0;
  bool valid = true;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      dynamics::DriveDetection d;
      d.detuning = -30.0 + 15.0 * i;
      d.rabi0 = 150.0 * j / 4.0;
      const auto L = dynamics::build_liouvillian(
          dynamics::build_hamiltonian(assembled.pair, assembled.rates, d), assembled.rates, d);
      const auto ss = dynamics::steady_state(L);
      Mat4c ground = Mat4c::Zero();
      ground(0, 0) = 1.0;
      const auto prop = dynamics::propagate_to_steady_state(L, ground,
                                                            dynamics::default_horizon(assembled.rates));
      valid = valid && prop.converged;
      worst_agree = std::max(worst_agree, (ss.rho - prop.rho).cwiseAbs().maxCoeff());
      worst_herm = std::max(worst_herm, (ss.rho - ss.rho.adjoint()).cwiseAbs().maxCoeff());
      worst_trace = std::max(worst_trace, std::abs(ss.rho.trace() - 1.0));
      min_eig = std::min(min_eig, Eigen::SelfAdjointEigenSolver<Mat4c>(ss.rho).eigenvalues().minCoeff());
      worst_res = std::max(worst_res, ss.residual);
      try {
        dynamics::validate_state(ss.rho);
      } catch (const Error&) {
        valid = false;
      }
    }
  const bool ok = valid && worst_res < kResidual && worst_agree <= kPropagationAgree;
  line(6, ok, "solver properties",
       fmt("max residual %.3g; 5x5 null-space vs propagation %.3g; |rho-rho^dag| %.3g, |tr-1| %.3g, "
           "min eig %.3g",
           worst_res, worst_agree, worst_herm, worst_trace, min_eig));
}

void criterion7() {
  const auto assembled = assemble_rates(config("squeezing_map"));
  std::string detail;
  bool ok = true;
  for (double rabi : {2.0, 5.0, 10.0, 15.0, 20.0}) {
    dynamics::DriveDetection d;
    d.rabi0 = rabi;
    const double full = dynamics::steady_state(dynamics::build_liouvillian(
                            dynamics::build_hamiltonian(assembled.pair, assembled.rates, d),
                            assembled.rates, d))
                            .rho(3, 3)
                            .real();
    const double est = observables::rho44_perturbative(assembled.pair, assembled.rates, d).value;
    const double rel = std::abs(est - full) / full;
    ok = ok && rel <= kRho44Rel;
    detail += fmt("%sOmega0=%.3g rel %.3g", detail.empty() ? "" : ", ", rabi, rel);
  }
  line(7, ok, "perturbative rho44 (Delta=0)", detail);
}

// Parallel dipoles in vacuum; the coherent term in this form has the opposite
// sign to Omega12 as defined by the library.
void textbook_pair(double kr, double cos_alpha, double& omega12, double& gamma12) {
  const double s = std::sin(kr), c = std::cos(kr);
  const double a = 1.0 - cos_alpha * cos_alpha;
  const double b = 1.0 - 3.0 * cos_alpha * cos_alpha;
  omega12 = -0.75 * (-a * c / kr + b * (s / (kr * kr) + c / (kr * kr * kr)));
  gamma12 = 1.5 * (a * s / kr + b * (c / (kr * kr) - s / (kr * kr * kr)));
}

void criterion8() {
  const double lambda = 780e-9;
  const double omega = photonic::omega_from_wavelength(lambda);
  const double k = 2.0 * constants::pi / lambda;
  const double gamma0 = 1e8;
  double worst_vac = 0.0;
  for (int i = 0; i <= 60; ++i) {
    const double s = lambda / 20.0 * std::pow(40.0, i / 60.0);
    for (double alpha : {0.0, 0.4, 0.9553166181245093, 1.5707963267948966}) {
      const Vec3 sep(s * std::cos(alpha), s * std::sin(alpha), 0.0);
      const auto pair = photonic::make_emitter_pair(omega, 0.0, Vec3::UnitX(), Vec3::UnitX(),
                                                    Vec3::Zero(), sep, gamma0);
      const auto r = photonic::extract_rates(pair, nullptr, {}, {}).rates;
      double o_ref, g_ref;
      textbook_pair(k * s, std::cos(alpha), o_ref, g_ref);
      worst_vac = std::max(worst_vac, std::abs(r.gamma12 / gamma0 - g_ref) / std::max(std::abs(g_ref), 1e-6));
      worst_vac = std::max(worst_vac, std::abs(r.omega12 / gamma0 - o_ref) / std::max(std::abs(o_ref), 1e-6));
    }
  }

  photonic::SphereGeometry geom;
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst_recip = 0.0;
  for (int i = 0; i < 20; ++i) {
    auto point = [&] {
      Vec3 v(u(rng), u(rng), u(rng));
      return Vec3(v.normalized() * (geom.radius + 5e-9 + 60e-9 * (u(rng) + 1.0)));
    };
    const Vec3 a = point(), b = point();
    const auto gab = photonic::sphere_scattered_green(geom, a, b, omega).green.tensor;
    const auto gba = photonic::sphere_scattered_green(geom, b, a, omega).green.tensor;
    worst_recip = std::max(worst_recip, (gab - gba.transpose()).norm() / gab.norm());
  }

  const auto geo = assemble_rates(config("sphere_rates"));
  const auto& r = geo.rates;
  const double ff = geo.diagnostics ? geo.diagnostics->far_field_enhancement : NAN;
  auto within = [](double v, double ref) { return std::abs(v - ref) <= kGeometryRel * std::abs(ref); };
  const bool geometry_ok = within(r.gamma1, 2.9) && within(r.omega12, -6.4) &&
                           within(r.gamma12, -2.6) && within(std::abs(r.f1), 2.0) && within(ff, 1.7);
  const bool ok = worst_vac <= kVacuumRel && worst_recip <= kReciprocity && geometry_ok;
  line(8, ok, "Green's-tensor module",
       fmt("vacuum worst rel %.3g; reciprocity %.3g; gamma=%.4g Omega12=%.4g gamma12=%.4g", worst_vac,
           worst_recip, r.gamma1, r.omega12, r.gamma12) +
           fmt(" |f|=%.4g far-field factor=%.4g (targets 2.9/-6.4/-2.6/2/1.7 +-30%%)", std::abs(r.f1), ff));
}

void criterion9() {
  int checked = 0, mismatched = 0;
  double worst_v = 0.0, worst_xi = 0.0;
  for (const char* name : {"concurrence_map", "squeezing_map", "dephasing_map"}) {
    const auto grid = run_sweep(config(name, "observables = spin\n"));
    for (const auto& r : grid.records) {
      if (!r.converged || !(r.spin_length > kSpinLength)) continue;
      ++checked;
      const bool xi_below = r.spin_xi < 1.0;
      const bool v_below = r.spin_normal_variance < 0.0;
      if (xi_below != v_below) {
        if (++mismatched == 1) worst_v = r.spin_normal_variance, worst_xi = r.spin_xi;
      }
    }
  }
  line(9, mismatched == 0, "spin-squeezing equivalence",
       fmt("%d points with |<S>| > 1e-6 over the concurrence, squeezing and dephasing maps, %d sign mismatches",
           checked, mismatched) +
           (mismatched ? fmt(" (first: normal variance %.3g, xi %.6g)", worst_v, worst_xi) : ""));
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
