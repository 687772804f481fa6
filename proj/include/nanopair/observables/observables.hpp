#pragma once

#include "nanopair/dynamics/master_equation.hpp"

namespace nanopair::observables {

using dynamics::DensityMatrix4;
using dynamics::DriveDetection;
using photonic::CouplingRates;
using photonic::EmitterPair;

/// sum_i |g_i|^2 <sigma_i^dag sigma_i>.
double fluorescence(const DensityMatrix4& rho, const CouplingRates& rates);

enum class Rho44Form {
  /// Resolvent with complex single-emitter detunings w_n - i gamma_n/2 and
  /// coupling Omega12 + i gamma12/2; finite everywhere.
  Damped,
  /// Same structure with real detunings and coupling; singular at the bare
  /// single-emitter resonances, zero at Delta = 0 without coupling.
  Undamped,
  /// |2 Omega1 Omega2 (w1 + w2) - Omega12 (Omega1^2 + Omega2^2)|^2
  ///   / ((w1 w2)^2 [(g1 + g2)^2 + (2 Delta)^2]),
  /// the commonly quoted closed form; 4x Undamped at Delta = 0.
  Literal,
};

struct Rho44Estimate {
  double value = 0.0;
  /// Set when the laser sits within 1e-12 (relative) of a bare resonance;
  /// value is then +inf for the undamped forms.
  bool singular = false;
};

/// Weak-drive population of |4> from second-order amplitudes:
///   |Omega1 Omega2 (w1 + w2) + W (Omega1^2 + Omega2^2)|^2
///     / (4 |D|^2 [(g1 + g2)^2 + (4 Delta)^2]),
/// with w_n = omega_n - omega_L, W the coupling and D = w1 w2 - W^2 (damped)
/// or w1 w2 (undamped).
Rho44Estimate rho44_perturbative(const EmitterPair& pair, const CouplingRates& rates,
                                 const DriveDetection& drive, Rho44Form form = Rho44Form::Damped);

/// Wootters concurrence from the eigenvalues of rho (sy x sy) rho* (sy x sy).
/// Throws InvalidArgument if rho has an eigenvalue below -1e-9 or the
/// operator's eigenvalues carry imaginary parts above 1e-8.
double concurrence(const DensityMatrix4& rho);

struct CrossConcurrence {
  double c1 = 0.0;  // 2|rho41| - 2 sqrt(rho22 rho33)
  double c2 = 0.0;  // 2|rho23| - 2 sqrt(rho11 rho44)
  double approx = 0.0;
  /// Largest modulus among the off-cross elements rho12, rho13, rho24, rho34.
  double off_cross = 0.0;
};

CrossConcurrence concurrence_cross_approx(const DensityMatrix4& rho);

/// Normally ordered quadrature variance of one field component,
/// normalized by 2|g|^2 with |g|^2 = (|g1|^2 + |g2|^2) / 2.
struct QuadratureResult {
  double total = 0.0;
  double emitter1 = 0.0;
  double emitter2 = 0.0;
  double cross = 0.0;
  double theta = 0.0;
  /// phi2 - phi1 used.
  double relative_phase = 0.0;
};

struct Phases {
  double phi1 = 0.0;
  double phi2 = 0.0;
};

/// Uses |g_i| from rates and the given scattering phases.
QuadratureResult quadrature_variance(const DensityMatrix4& rho, const CouplingRates& rates,
                                     const Phases& phases, double theta);
/// Same with phi_i = arg g_i.
QuadratureResult quadrature_variance(const DensityMatrix4& rho, const CouplingRates& rates,
                                     double theta);

/// The variance is A + Re[exp(2 i theta) B]; minimized over theta in closed
/// form. relative_phase_points > 0 scans phi2 - phi1 over that many equally
/// spaced values in [0, 2 pi) with phi1 = arg g1; 0 keeps phi_i = arg g_i.
/// Ties keep the first grid point.
QuadratureResult optimize_quadrature(const DensityMatrix4& rho, const CouplingRates& rates,
                                     int relative_phase_points = 64);

/// Effective two-level (|G>, |E>) estimate of the normalized variance for
/// balanced detection:
///   1 - rho11 + rho44 + 2 Re[exp(-i(2 theta + phi1 + phi2)) rho14].
struct TwoLevelSqueezing {
  double value = 0.0;    // at the given theta
  double optimum = 0.0;  // 1 - rho11 + rho44 - 2|rho14|
  double bound = 0.0;    // -2|rho14|
  /// |rho23| / |rho14|; the estimate needs this small.
  double validity = 0.0;
};

TwoLevelSqueezing squeezing_two_level_approx(const DensityMatrix4& rho, const Phases& phases,
                                             double theta = 0.0);

/// Collective spin S_x = sum (s^dag + s)/2, S_y = sum (s^dag - s)/(2i),
/// S_z = sum sz with sz = (s^dag s - s s^dag)/2.
struct SpinSqueezing {
  double sx = 0.0, sy = 0.0, sz = 0.0;
  double length = 0.0;  // |<S>|
  double variance = 0.0;  // <S_x^2> - <S_x>^2
  /// <:S_x^2:> - <S_x>^2 = variance + <S_z>/2.
  double normal_variance = 0.0;
  /// 2 variance / |<S>|; NaN when |<S>| <= 1e-12.
  double xi = 0.0;
  bool xi_defined = false;
  /// [1 - rho11 + rho44 - 2 Re rho14 + (rho22 + rho33 - 2 Re rho23)] / 4, the
  /// weak-drive expression; the bracket is twice the population of
  /// (|2> - |3>)/sqrt 2.
  double weak_drive_form = 0.0;
  double antisymmetric_bracket = 0.0;
  /// (xi < 1) == (normal_variance < 0). Exact whenever S_x = S_y = 0 and
  /// S_z <= 0; otherwise 2 N < |S| + S_z is the true condition.
  bool criteria_agree = true;
};

SpinSqueezing spin_squeezing(const DensityMatrix4& rho);

}  // namespace nanopair::observables
