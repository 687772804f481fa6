#include "nanopair/photonic/material.hpp"

#include <cmath>

namespace nanopair::photonic {

Material gold_drude_lorentz() {
  constexpr double two_pi_thz = 2.0 * constants::pi * 1e12;
  Material m;
  m.eps_inf = 5.9673;
  m.plasma_frequency = 2113.6 * two_pi_thz;
  m.damping = 15.92 * two_pi_thz;
  m.poles.push_back({1.09, 650.07 * two_pi_thz, 104.86 * two_pi_thz});
  return m;
}

cplx permittivity(const Material& material, double omega) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw InvalidArgument("permittivity: frequency must be positive and finite");
  }
  const cplx i(0.0, 1.0);
  cplx eps = material.eps_inf;
  const double wp2 = material.plasma_frequency * material.plasma_frequency;
  eps -= wp2 / (omega * omega + i * material.damping * omega);
  for (const auto& p : material.poles) {
    const double w02 = p.center * p.center;
    eps += p.strength * w02 / (w02 - omega * omega - i * p.width * omega);
  }
  return eps;
}

double omega_from_wavelength(double wavelength_m) {
  if (!(wavelength_m > 0.0)) throw InvalidArgument("wavelength must be positive");
  return 2.0 * constants::pi * constants::c / wavelength_m;
}

}  // namespace nanopair::photonic
