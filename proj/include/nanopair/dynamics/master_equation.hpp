#pragma once

#include "nanopair/photonic/rates.hpp"

namespace nanopair::dynamics {

using photonic::CouplingRates;
using photonic::EmitterPair;

/// Product basis |1> = |g g>, |2> = |g1 e2>, |3> = |e1 g2>, |4> = |e e>.
using DensityMatrix4 = Mat4c;
/// Acts on the column-stacked density matrix: vec(A rho B) = (B^T kron A) vec(rho).
using Liouvillian = Eigen::Matrix<cplx, 16, 16>;
using Vec16 = Eigen::Matrix<cplx, 16, 1>;

/// Drive and detection settings, in the same frequency unit as the rates.
struct DriveDetection {
  double detuning = 0.0;  // Delta = omega_L - omega_0
  double rabi0 = 0.0;     // free-space Rabi amplitude Omega_0
  double theta = 0.0;     // quadrature angle
  double dephasing1 = 0.0;
  double dephasing2 = 0.0;
};

namespace ops {
/// sigma_n = |g><e| of emitter n (1 or 2), embedded in the product space.
Mat4c lowering(int n);
/// (sigma^dag sigma - sigma sigma^dag) / 2.
Mat4c sigma_z(int n);
}  // namespace ops

Vec16 vec(const Mat4c& m);
Mat4c unvec(const Vec16& v);

/// H = sum_n (omega_n - omega_L) sz_n - (Omega_n/2 sigma_n^dag + h.c.)
///     - Omega12 (sigma_1^dag sigma_2 + h.c.),  Omega_n = f_n Omega_0.
Mat4c build_hamiltonian(const EmitterPair& pair, const CouplingRates& rates,
                        const DriveDetection& drive);

/// -i[H, .] + sum_mn gamma_mn/2 (2 s_n . s_m^dag - {s_m^dag s_n, .})
///          + sum_m gamma*_m (2 sz_m . sz_m - {sz_m sz_m, .}).
/// Throws InvalidArgument if the decay matrix is not positive semidefinite or
/// a dephasing rate is negative.
Liouvillian build_liouvillian(const Mat4c& hamiltonian, const CouplingRates& rates,
                              const DriveDetection& drive);

struct SteadyState {
  DensityMatrix4 rho;
  /// ||L vec(rho)||_2 / ||L||_F after Hermitization and clipping.
  double residual = 0.0;
  /// Most negative eigenvalue before clipping (0 if none).
  double clipped = 0.0;
};

/// Solves L vec(rho) = 0 with tr(rho) = 1 by replacing the first row with
/// the trace functional. Throws DegenerateSteadyStateError if the bordered
/// system is singular or the solution has eigenvalues below -1e-9.
SteadyState steady_state(const Liouvillian& L);

struct PropagationOptions {
  double rtol = 1e-10;
  double atol = 1e-13;
  /// Stop once max |d rho/dt| falls below this (units of L).
  double derivative_tolerance = 1e-11;
  double initial_step = 1e-4;
  long max_steps = 20'000'000;
};

struct PropagationResult {
  DensityMatrix4 rho;
  double time = 0.0;
  double derivative_norm = 0.0;
  long steps = 0;
  bool converged = false;
};

/// Dormand-Prince 5(4) integration of d vec(rho)/dt = L vec(rho) from rho0
/// until the derivative tolerance is met or the horizon (absolute time) is
/// reached; the latter is reported through converged = false.
PropagationResult propagate_to_steady_state(const Liouvillian& L, const DensityMatrix4& rho0,
                                            double horizon, const PropagationOptions& options = {});

/// 200 / min(gamma1, gamma2).
double default_horizon(const CouplingRates& rates);

/// Throws InvalidArgument unless rho is Hermitian (1e-10), unit trace (1e-10)
/// and has no eigenvalue below -1e-9.
void validate_state(const DensityMatrix4& rho);

/// Eigenstates of the undriven coherent dynamics. With
///   R = sqrt(delta^2/4 + Omega12^2),  d = delta/2 + R,
///   a = d / sqrt(d^2 + Omega12^2),  b = Omega12 / sqrt(d^2 + Omega12^2),
/// |S> = a|3> + b|2> at -R and |A> = a|2> - b|3> at +R in the rotating frame.
struct CoupledBasis {
  double a = 1.0;
  double b = 0.0;
  double d = 0.0;
  Eigen::Vector4cd ground, excited, symmetric, antisymmetric;
  double omega_s = 0.0;
  double omega_a = 0.0;
};

/// Degenerate input (delta = Omega12 = 0) returns |S> = |3>, |A> = |2>.
CoupledBasis coupled_basis(const EmitterPair& pair, const CouplingRates& rates);

}  // namespace nanopair::dynamics
