#include "nanopair/scan/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

namespace nanopair::scan {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(x))
    throw InvalidArgument("config: " + key + " expects a finite number, got '" + v + "'");
  return x;
}

int to_int(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const long x = std::strtol(v.c_str(), &end, 10);
  if (v.empty() || end != v.c_str() + v.size())
    throw InvalidArgument("config: " + key + " expects an integer, got '" + v + "'");
  return static_cast<int>(x);
}

cplx to_complex(const std::string& key, const std::string& v) {
  const auto parts = split(v, ',');
  if (parts.size() == 1) return to_double(key, parts[0]);
  if (parts.size() == 2) return {to_double(key, parts[0]), to_double(key, parts[1])};
  throw InvalidArgument("config: " + key + " expects 're' or 're,im'");
}

Vec3 to_vec3(const std::string& key, const std::string& v) {
  const auto parts = split(v, ',');
  if (parts.size() != 3) throw InvalidArgument("config: " + key + " expects 'x,y,z'");
  return {to_double(key, parts[0]), to_double(key, parts[1]), to_double(key, parts[2])};
}

using Setter = std::function<void(SweepConfig&, const std::string&, const std::string&)>;

template <typename F>
Setter number(F f) {
  return [f](SweepConfig& c, const std::string& k, const std::string& v) { f(c, to_double(k, v)); };
}

template <typename F>
Setter integer(F f) {
  return [f](SweepConfig& c, const std::string& k, const std::string& v) { f(c, to_int(k, v)); };
}

template <typename F>
Setter complex(F f) {
  return [f](SweepConfig& c, const std::string& k, const std::string& v) { f(c, to_complex(k, v)); };
}

template <typename F>
Setter vector3(F f) {
  return [f](SweepConfig& c, const std::string& k, const std::string& v) { f(c, to_vec3(k, v)); };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"rates_source",
       [](SweepConfig& c, const std::string&, const std::string& v) {
         if (v == "injected") c.source = RatesSource::Injected;
         else if (v == "green") c.source = RatesSource::Green;
         else throw InvalidArgument("config: rates_source must be injected or green");
       }},
      {"gamma_over_gamma0", number([](SweepConfig& c, double x) { c.gamma1 = c.gamma2 = x; })},
      {"gamma1_over_gamma0", number([](SweepConfig& c, double x) { c.gamma1 = x; })},
      {"gamma2_over_gamma0", number([](SweepConfig& c, double x) { c.gamma2 = x; })},
      {"gamma12_over_gamma0", number([](SweepConfig& c, double x) { c.gamma12 = x; })},
      {"omega12_over_gamma0", number([](SweepConfig& c, double x) { c.omega12 = x; })},
      {"f", complex([](SweepConfig& c, cplx x) { c.f1 = c.f2 = x; })},
      {"f1", complex([](SweepConfig& c, cplx x) { c.f1 = x; })},
      {"f2", complex([](SweepConfig& c, cplx x) { c.f2 = x; })},
      {"detection",
       [](SweepConfig& c, const std::string&, const std::string& v) {
         if (v == "balanced") c.detection = DetectionMode::Balanced;
         else if (v == "explicit") c.detection = DetectionMode::Explicit;
         else if (v == "geometry") c.detection = DetectionMode::Geometry;
         else throw InvalidArgument("config: detection must be balanced, explicit or geometry");
       }},
      {"g1_abs", number([](SweepConfig& c, double x) { c.g1_abs = x; })},
      {"g2_abs", number([](SweepConfig& c, double x) { c.g2_abs = x; })},
      {"phi1_rad", number([](SweepConfig& c, double x) { c.phi1 = x; })},
      {"phi2_rad", number([](SweepConfig& c, double x) { c.phi2 = x; })},
      {"wavelength_nm", number([](SweepConfig& c, double x) { c.wavelength_nm = x; })},
      {"delta_over_gamma0", number([](SweepConfig& c, double x) { c.delta = x; })},
      {"gamma0_per_s", number([](SweepConfig& c, double x) { c.gamma0_per_s = x; })},
      {"radius_nm", number([](SweepConfig& c, double x) { c.radius_nm = x; })},
      {"gap_nm", number([](SweepConfig& c, double x) { c.gap_nm = x; })},
      {"angle_deg", number([](SweepConfig& c, double x) { c.angle_deg = x; })},
      {"orientation",
       [](SweepConfig& c, const std::string&, const std::string& v) {
         using photonic::DipoleOrientation;
         if (v == "radial") c.orientation = DipoleOrientation::Radial;
         else if (v == "azimuthal") c.orientation = DipoleOrientation::Azimuthal;
         else if (v == "polar") c.orientation = DipoleOrientation::Polar;
         else throw InvalidArgument("config: orientation must be radial, azimuthal or polar");
       }},
      {"drive_polarization", vector3([](SweepConfig& c, const Vec3& x) { c.illumination.polarization = x; })},
      {"drive_propagation", vector3([](SweepConfig& c, const Vec3& x) { c.illumination.propagation = x; })},
      {"detector_direction", vector3([](SweepConfig& c, const Vec3& x) { c.detector.direction = x; })},
      {"detector_polarization", vector3([](SweepConfig& c, const Vec3& x) { c.detector.polarization = x; })},
      {"max_order", integer([](SweepConfig& c, int x) { c.series.max_order = x; })},
      {"tail_tolerance", number([](SweepConfig& c, double x) { c.series.tail_tolerance = x; })},
      {"detuning_min_over_gamma0", number([](SweepConfig& c, double x) { c.detuning.min = x; })},
      {"detuning_max_over_gamma0", number([](SweepConfig& c, double x) { c.detuning.max = x; })},
      {"detuning_count", integer([](SweepConfig& c, int x) { c.detuning.count = x; })},
      {"rabi_min_over_gamma0", number([](SweepConfig& c, double x) { c.rabi.min = x; })},
      {"rabi_max_over_gamma0", number([](SweepConfig& c, double x) { c.rabi.max = x; })},
      {"rabi_count", integer([](SweepConfig& c, int x) { c.rabi.count = x; })},
      {"dephasing_over_gamma", number([](SweepConfig& c, double x) { c.dephasing_ratio = x; })},
      {"relative_phase_points", integer([](SweepConfig& c, int x) { c.relative_phase_points = x; })},
      {"observables",
       [](SweepConfig& c, const std::string&, const std::string& v) {
         ObservableSelection s{false, false, false, false, false, false};
         for (const auto& name : split(v, ',')) {
           if (name == "fluorescence") s.fluorescence = true;
           else if (name == "concurrence") s.concurrence = true;
           else if (name == "variance") s.variance = true;
           else if (name == "two_level") s.two_level = true;
           else if (name == "spin") s.spin = true;
           else if (name == "rho44") s.rho44 = true;
           else if (name == "all") s = {true, true, true, true, true, true};
           else throw InvalidArgument("config: unknown observable '" + name + "'");
         }
         c.observables = s;
       }},
  };
  return table;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("config: cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void parse_into(SweepConfig& cfg, const std::string& text, const std::filesystem::path& base_dir,
                int depth) {
  if (depth > 8) throw InvalidArgument("config: rates_file nesting too deep");
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "rates_file") {
      const std::filesystem::path p = base_dir / value;
      parse_into(cfg, read_file(p), p.parent_path(), depth + 1);
      continue;
    }
    apply_key(cfg, key, value, base_dir);
  }
}

}  // namespace

double Axis::at(int i) const {
  if (count <= 1) return min;
  return min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
}

void apply_key(SweepConfig& cfg, const std::string& key, const std::string& value,
               const std::filesystem::path& base_dir) {
  if (key == "rates_file") {
    const std::filesystem::path p = base_dir / value;
    parse_into(cfg, read_file(p), p.parent_path(), 1);
    return;
  }
  const auto it = setters().find(key);
  if (it == setters().end()) throw InvalidArgument("config: unknown key '" + key + "'");
  it->second(cfg, key, value);
}

SweepConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  SweepConfig cfg;
  parse_into(cfg, text, base_dir, 0);
  validate(cfg);
  return cfg;
}

SweepConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_file(path), path.parent_path());
}

void validate(const SweepConfig& cfg) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw InvalidArgument(std::string("config: ") + what);
  };
  require(cfg.detuning.count >= 1 && cfg.rabi.count >= 1, "axis counts must be >= 1");
  require(cfg.rabi.min >= 0.0, "rabi axis must be non-negative");
  require(cfg.gamma0_per_s > 0.0, "gamma0_per_s must be positive");
  require(cfg.wavelength_nm > 0.0, "wavelength_nm must be positive");
  require(cfg.dephasing_ratio >= 0.0, "dephasing_over_gamma must be >= 0");
  require(cfg.relative_phase_points >= 0, "relative_phase_points must be >= 0");
  require(cfg.g1_abs >= 0.0 && cfg.g2_abs >= 0.0, "g_abs must be >= 0");
  if (cfg.source == RatesSource::Green) {
    require(cfg.radius_nm > 0.0 && cfg.gap_nm > 0.0, "radius_nm and gap_nm must be positive");
    require(cfg.series.max_order >= 1, "max_order must be >= 1");
  } else {
    require(cfg.detection != DetectionMode::Geometry, "detection = geometry needs rates_source = green");
    photonic::CouplingRates r;
    r.gamma1 = cfg.gamma1;
    r.gamma2 = cfg.gamma2;
    r.gamma12 = cfg.gamma12;
    r.omega12 = cfg.omega12;
    r.f1 = cfg.f1;
    r.f2 = cfg.f2;
    photonic::validate(r);
  }
}

}  // namespace nanopair::scan
