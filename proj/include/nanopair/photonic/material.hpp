#pragma once

#include <vector>

#include "nanopair/common.hpp"

namespace nanopair::photonic {

/// One Lorentz oscillator: strength * center^2 / (center^2 - w^2 - i width w).
struct LorentzPole {
  double strength = 0.0;
  double center = 0.0;  // rad/s
  double width = 0.0;   // rad/s
};

/// Drude-Lorentz dielectric function, exp(-i w t) convention (Im eps >= 0).
///
///   eps(w) = eps_inf - wp^2 / (w^2 + i g w) + sum_j s_j W_j^2 / (W_j^2 - w^2 - i G_j w)
struct Material {
  double eps_inf = 1.0;
  double plasma_frequency = 0.0;  // rad/s
  double damping = 0.0;           // rad/s
  std::vector<LorentzPole> poles;
};

/// Gold, single-pole Drude-Lorentz fit of tabulated optical constants for
/// 500-1000 nm (Vial et al., Phys. Rev. B 71, 085416 (2005)).
Material gold_drude_lorentz();

/// eps(w) for w > 0. Throws InvalidArgument otherwise.
cplx permittivity(const Material& material, double omega);

/// Angular frequency of a vacuum wavelength.
double omega_from_wavelength(double wavelength_m);

}  // namespace nanopair::photonic
