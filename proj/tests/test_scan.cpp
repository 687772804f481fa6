#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nanopair/observables/observables.hpp"
#include "nanopair/scan/sweep.hpp"

using namespace nanopair;
using namespace nanopair::scan;

namespace {

const char* kReferenceRates = R"(
rates_source = injected
gamma_over_gamma0 = 2.9
gamma12_over_gamma0 = -2.6
omega12_over_gamma0 = -6.4
f = 2
delta_over_gamma0 = 400
)";

std::string csv_of(const ScanGrid& g) {
  std::ostringstream os;
  emit_csv(g, os);
  return os.str();
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

std::filesystem::path temp_dir() {
  auto p = std::filesystem::temp_directory_path() / "nanopair_scan_test";
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("config: keys, comments, overrides and includes") {
  const auto dir = temp_dir();
  {
    std::ofstream(dir / "rates.conf") << "gamma_over_gamma0 = 2.9  # both emitters\n"
                                         "gamma12_over_gamma0 = -2.6\nomega12_over_gamma0 = -6.4\n";
  }
  const std::string text =
      "gamma_over_gamma0 = 5\n"
      "rates_file = rates.conf\n"
      "# comment line\n\n"
      "gamma2_over_gamma0 = 3.1\n"
      "f1 = 2,0.5\n"
      "detuning_min_over_gamma0 = -30\n"
      "detuning_max_over_gamma0 = 30\n"
      "detuning_count = 7\n"
      "observables = concurrence, spin\n"
      "drive_polarization = 0,1,0\n";
  const SweepConfig c = parse_config(text, dir);
  CHECK(c.gamma1 == 2.9);  // include overrides the earlier key
  CHECK(c.gamma2 == 3.1);  // later key overrides the include
  CHECK(c.gamma12 == -2.6);
  CHECK(c.f1 == cplx(2.0, 0.5));
  CHECK(c.f2 == cplx(1.0));
  CHECK(c.detuning.count == 7);
  CHECK(c.detuning.at(0) == -30.0);
  CHECK(c.detuning.at(6) == 30.0);
  CHECK(c.detuning.at(3) == doctest::Approx(0.0));
  CHECK_FALSE(c.observables.fluorescence);
  CHECK(c.observables.concurrence);
  CHECK(c.observables.spin);
  CHECK(c.illumination.polarization == Vec3::UnitY());
}

TEST_CASE("config: rejects bad input") {
  CHECK_THROWS_AS(parse_config("gamma = 1\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("gamma_over_gamma0 = 1x\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("gamma_over_gamma0 = nan\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("just words\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("detuning_count = 0\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("rabi_min_over_gamma0 = -1\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("dephasing_over_gamma = -0.1\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("gamma12_over_gamma0 = 1.5\n"), InvalidArgument);  // > sqrt(g1 g2)
  CHECK_THROWS_AS(parse_config("detection = geometry\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("rates_file = does_not_exist.conf\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("observables = everything\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_config("drive_polarization = 1,0\n"), InvalidArgument);
}

TEST_CASE("1x1 grid without drive: ground state") {
  const auto cfg = parse_config(std::string(kReferenceRates) + "observables = all\n");
  const auto g = run_sweep(cfg);
  REQUIRE(g.records.size() == 1);
  const auto& r = g.records[0];
  CHECK(r.converged);
  CHECK(r.fluorescence == doctest::Approx(0.0).scale(1e-15));
  CHECK(r.concurrence == doctest::Approx(0.0));
  CHECK(r.variance == doctest::Approx(0.0).scale(1e-15));
  CHECK(r.populations[0] == doctest::Approx(1.0));
}

TEST_CASE("CSV: header, row count, ordering and number format") {
  auto cfg = parse_config(std::string(kReferenceRates) +
                          "detuning_min_over_gamma0 = -1\ndetuning_max_over_gamma0 = 1\ndetuning_count = 2\n"
                          "rabi_min_over_gamma0 = 10\nrabi_max_over_gamma0 = 20\nrabi_count = 2\n");
  const auto g = run_sweep(cfg);
  const std::string csv = csv_of(g);
  std::istringstream in(csv);
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  REQUIRE(lines.size() == 5);
  const auto header = split_line(lines[0]);
  CHECK(header[0] == "rabi0_over_gamma0");
  CHECK(header[1] == "detuning_over_gamma0");
  CHECK(split_line(lines[1])[0] == "10");
  CHECK(split_line(lines[1])[1] == "-1");
  CHECK(split_line(lines[2])[0] == "10");
  CHECK(split_line(lines[2])[1] == "1");
  CHECK(split_line(lines[3])[0] == "20");
  for (std::size_t i = 1; i < lines.size(); ++i) CHECK(split_line(lines[i]).size() == header.size());
  CHECK(format_number(1.0 / 3.0) == "0.333333333");
  CHECK(format_number(-200.1023) == "-200.1023");
}

TEST_CASE("CSV round trip of a single-axis line scan") {
  auto cfg = parse_config(std::string(kReferenceRates) +
                          "detuning_min_over_gamma0 = -30\ndetuning_max_over_gamma0 = 30\ndetuning_count = 31\n"
                          "rabi_min_over_gamma0 = 60\nrelative_phase_points = 16\n"
                          "observables = variance,two_level,concurrence\n");
  const auto g = run_sweep(cfg);
  std::istringstream in(csv_of(g));
  std::string line;
  std::getline(in, line);
  const auto header = split_line(line);
  auto col = [&](const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<int>(i);
    FAIL("missing column " << name);
    return -1;
  };
  const int cv = col("variance_min_over_2g2"), cc = col("concurrence"), ct = col("two_level_variance_over_2g2");
  std::size_t row = 0;
  while (std::getline(in, line)) {
    const auto cells = split_line(line);
    REQUIRE(row < g.records.size());
    const auto& r = g.records[row++];
    CHECK(std::stod(cells[cv]) == doctest::Approx(r.variance).epsilon(1e-8));
    CHECK(std::stod(cells[cc]) == doctest::Approx(r.concurrence).epsilon(1e-8));
    CHECK(std::stod(cells[ct]) == doctest::Approx(r.two_level).epsilon(1e-8));
  }
  CHECK(row == 31);
}

TEST_CASE("determinism: repeated runs and thread counts give identical bytes") {
  auto cfg = parse_config(std::string(kReferenceRates) +
                          "detuning_min_over_gamma0 = -30\ndetuning_max_over_gamma0 = 30\ndetuning_count = 13\n"
                          "rabi_min_over_gamma0 = 0\nrabi_max_over_gamma0 = 150\nrabi_count = 11\n"
                          "observables = all\nrelative_phase_points = 8\n");
  const std::string ref = csv_of(run_sweep_serial(cfg));
  CHECK(csv_of(run_sweep_serial(cfg)) == ref);
  for (int t : {0, 1, 2, 3, 7}) CHECK(csv_of(run_sweep(cfg, t)) == ref);

  const auto path = (temp_dir() / "grid.csv").string();
  emit_csv(run_sweep(cfg, 2), path);
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str() == ref);
  CHECK_THROWS_AS(emit_csv(run_sweep(cfg), "/nonexistent_dir/x.csv"), InvalidArgument);
}

TEST_CASE("failed points are flagged, not dropped") {
  // Without decay the undriven system has no unique steady state.
  auto cfg = parse_config(
      "gamma_over_gamma0 = 0\ndetuning_min_over_gamma0 = -1\ndetuning_max_over_gamma0 = 1\n"
      "detuning_count = 3\nrabi_count = 2\nrabi_max_over_gamma0 = 0\n");
  const auto g = run_sweep(cfg);
  REQUIRE(g.records.size() == 6);
  for (const auto& r : g.records) {
    CHECK(r.status == PointStatus::Degenerate);
    CHECK_FALSE(r.converged);
    CHECK(std::isnan(r.concurrence));
  }
  CHECK(csv_of(g).find("degenerate") != std::string::npos);
  CHECK(report_extrema(g).failed_points == 6);
}

TEST_CASE("report_extrema on a monotone synthetic grid") {
  ScanGrid g;
  g.detunings = {-2.0, -1.0, 0.0, 1.0, 2.0};
  g.rabis = {0.0, 5.0, 10.0};
  for (double rabi : g.rabis)
    for (double det : g.detunings) {
      PointRecord r;
      r.detuning = det;
      r.rabi = rabi;
      r.converged = true;
      r.concurrence = det + rabi;
      r.variance = -0.01 * (det + rabi);
      r.theta = 0.5;
      r.fluorescence = -std::abs(det);  // single interior peak at 0
      g.records.push_back(r);
    }
  const auto rep = report_extrema(g);
  CHECK(rep.max_concurrence.value == 12.0);
  CHECK(rep.max_concurrence.detuning == 2.0);
  CHECK(rep.max_concurrence.rabi == 10.0);
  CHECK(rep.min_variance.value == doctest::Approx(-0.12));
  CHECK(rep.min_variance.detuning == 2.0);
  CHECK(rep.min_variance.rabi == 10.0);
  CHECK(rep.min_variance.theta == 0.5);
  CHECK(rep.below_threshold_count == 0);
  REQUIRE(rep.peaks.size() == 3);
  for (const auto& p : rep.peaks) {
    REQUIRE(p.detunings.size() == 1);
    CHECK(p.detunings[0] == 0.0);
  }

  g.records.back().variance = -0.2;
  const auto rep2 = report_extrema(g);
  CHECK(rep2.below_threshold_count == 1);
  CHECK(rep2.region_detuning_min == 2.0);
  CHECK(rep2.region_rabi_max == 10.0);
  std::ostringstream os;
  write_report(rep2, os);
  CHECK(os.str().find("min_variance_over_2g2=-0.2\n") != std::string::npos);
  CHECK(os.str().find("fluorescence_peaks_at_rabi0_5=0\n") != std::string::npos);

  CHECK_THROWS_AS(report_extrema(ScanGrid{}), InvalidArgument);
}

TEST_CASE("unit discipline: gamma0 units reproduce the SI solve") {
  const auto cfg = parse_config(
      "rates_source = green\ndetection = geometry\ndrive_polarization = 1,0,0\n"
      "drive_propagation = 0,0,1\ndetector_direction = 0,0,1\ndetector_polarization = 1,0,0\n"
      "gamma0_per_s = 6.0e7\n");
  const double gamma0 = cfg.gamma0_per_s;
  photonic::SphereGeometry geom;
  geom.radius = 40e-9;
  const double omega0 = photonic::omega_from_wavelength(780e-9);
  const auto pair = photonic::place_on_sphere(geom, 25e-9, constants::pi,
                                              photonic::DipoleOrientation::Radial, omega0,
                                              400.0 * gamma0, gamma0);
  const auto si = photonic::extract_rates(pair, &geom, cfg.illumination, cfg.detector, cfg.series);
  const auto scaled = assemble_rates(cfg);
  CHECK(scaled.rates.gamma1 == doctest::Approx(si.rates.gamma1 / gamma0).epsilon(1e-12));
  CHECK(scaled.rates.omega12 == doctest::Approx(si.rates.omega12 / gamma0).epsilon(1e-12));

  for (double det : {-3.0, 0.0, 7.5})
    for (double rabi : {20.0, 60.0}) {
      dynamics::DriveDetection d_si;
      d_si.detuning = det * gamma0;
      d_si.rabi0 = rabi * gamma0;
      const auto rho_si = dynamics::steady_state(dynamics::build_liouvillian(
          dynamics::build_hamiltonian(pair, si.rates, d_si), si.rates, d_si)).rho;
      const auto rec = evaluate_point(cfg, scaled.pair, scaled.rates, det, rabi);
      REQUIRE(rec.converged);
      for (int i = 0; i < 4; ++i)
        CHECK(rec.populations[i] == doctest::Approx(rho_si(i, i).real()).epsilon(1e-10).scale(1e-12));
      CHECK(rec.rho14_abs == doctest::Approx(std::abs(rho_si(0, 3))).epsilon(1e-10));
      CHECK(rec.concurrence == doctest::Approx(observables::concurrence(rho_si)).epsilon(1e-9));
    }
}

TEST_CASE("rates dump loads back as an injected rate set") {
  const auto cfg = parse_config("rates_source = green\ndetection = geometry\n");
  const auto a = assemble_rates(cfg);
  std::ostringstream os;
  write_rates(a, os);
  const auto dir = temp_dir();
  std::ofstream(dir / "dump.conf") << os.str();
  const auto back = assemble_rates(parse_config("rates_file = dump.conf\ndetection = explicit\n", dir));
  CHECK(back.rates.gamma1 == doctest::Approx(a.rates.gamma1).epsilon(1e-8));
  CHECK(back.rates.gamma12 == doctest::Approx(a.rates.gamma12).epsilon(1e-8));
  CHECK(back.rates.omega12 == doctest::Approx(a.rates.omega12).epsilon(1e-8));
  CHECK(std::abs(back.rates.f2 - a.rates.f2) < 1e-8);
  CHECK(std::abs(back.rates.g1 - a.rates.g1) < 1e-8);
  CHECK(std::abs(back.rates.g2 - a.rates.g2) < 1e-8);
}

TEST_CASE("three fluorescence peaks at low drive") {
  const auto cfg = parse_config(std::string(kReferenceRates) +
                                "detuning_min_over_gamma0 = -250\ndetuning_max_over_gamma0 = 250\n"
                                "detuning_count = 121\nrabi_min_over_gamma0 = 10\nobservables = fluorescence\n");
  const auto rep = report_extrema(run_sweep(cfg));
  REQUIRE(rep.peaks.size() == 1);
  const auto& p = rep.peaks[0].detunings;
  REQUIRE(p.size() == 3);
  const double single = std::sqrt(200.0 * 200.0 + 6.4 * 6.4);
  const double step = 500.0 / 120.0;
  CHECK(std::abs(p[0] + single) <= 2 * step);
  CHECK(std::abs(p[1]) <= step);
  CHECK(std::abs(p[2] - single) <= 2 * step);
}
