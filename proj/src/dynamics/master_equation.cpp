#include "nanopair/dynamics/master_equation.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace nanopair::dynamics {

namespace {

const cplx I(0.0, 1.0);

Liouvillian kron(const Mat4c& a, const Mat4c& b) {
  Liouvillian k;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) k.block<4, 4>(4 * i, 4 * j) = a(i, j) * b;
  return k;
}

// Superoperator of rho -> A rho B.
Liouvillian sandwich(const Mat4c& a, const Mat4c& b) { return kron(b.transpose(), a); }

// Superoperator of rho -> 2 J rho K^dag - {K^dag J, rho}.
Liouvillian lindblad_term(const Mat4c& j, const Mat4c& k) {
  const Mat4c id = Mat4c::Identity();
  const Mat4c kd_j = k.adjoint() * j;
  return 2.0 * sandwich(j, k.adjoint()) - sandwich(kd_j, id) - sandwich(id, kd_j);
}

}  // namespace

namespace ops {

Mat4c lowering(int n) {
  if (n != 1 && n != 2) throw InvalidArgument("emitter index must be 1 or 2");
  Eigen::Matrix2cd sm = Eigen::Matrix2cd::Zero();
  sm(0, 1) = 1.0;  // |g><e| with |g> = 0, |e> = 1
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  const Eigen::Matrix2cd& left = n == 1 ? sm : id;
  const Eigen::Matrix2cd& right = n == 1 ? id : sm;
  Mat4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = left(i, j) * right;
  return out;
}

Mat4c sigma_z(int n) {
  const Mat4c s = lowering(n);
  return 0.5 * (s.adjoint() * s - s * s.adjoint());
}

}  // namespace ops

Vec16 vec(const Mat4c& m) { return Eigen::Map<const Vec16>(m.data()); }

Mat4c unvec(const Vec16& v) { return Eigen::Map<const Mat4c>(v.data()); }

Mat4c build_hamiltonian(const EmitterPair& pair, const CouplingRates& rates,
                        const DriveDetection& drive) {
  const double w1 = -0.5 * pair.delta - drive.detuning;
  const double w2 = 0.5 * pair.delta - drive.detuning;
  const Mat4c s1 = ops::lowering(1), s2 = ops::lowering(2);
  const cplx r1 = rates.f1 * drive.rabi0;
  const cplx r2 = rates.f2 * drive.rabi0;
  Mat4c h = w1 * ops::sigma_z(1) + w2 * ops::sigma_z(2);
  const Mat4c drive_term = 0.5 * (r1 * s1.adjoint() + r2 * s2.adjoint());
  h -= drive_term + drive_term.adjoint();
  h -= rates.omega12 * (s1.adjoint() * s2 + s2.adjoint() * s1);
  return h;
}

Liouvillian build_liouvillian(const Mat4c& hamiltonian, const CouplingRates& rates,
                              const DriveDetection& drive) {
  photonic::validate(rates);
  if (drive.dephasing1 < 0.0 || drive.dephasing2 < 0.0) {
    throw InvalidArgument("dephasing rates must be >= 0");
  }
  const Mat4c id = Mat4c::Identity();
  const Mat4c s[2] = {ops::lowering(1), ops::lowering(2)};
  const double gamma[2][2] = {{rates.gamma1, rates.gamma12}, {rates.gamma12, rates.gamma2}};

  Liouvillian L = -I * (sandwich(hamiltonian, id) - sandwich(id, hamiltonian));
  for (int m = 0; m < 2; ++m)
    for (int n = 0; n < 2; ++n) {
      if (gamma[m][n] != 0.0) L += 0.5 * gamma[m][n] * lindblad_term(s[n], s[m]);
    }
  const double deph[2] = {drive.dephasing1, drive.dephasing2};
  for (int m = 0; m < 2; ++m) {
    if (deph[m] != 0.0) {
      const Mat4c sz = ops::sigma_z(m + 1);
      L += deph[m] * lindblad_term(sz, sz);
    }
  }
  return L;
}

SteadyState steady_state(const Liouvillian& L) {
  Liouvillian a = L;
  a.row(0).setZero();
  for (int i = 0; i < 4; ++i) a(0, 5 * i) = 1.0;
  Vec16 rhs = Vec16::Zero();
  rhs(0) = 1.0;
  Eigen::FullPivLU<Liouvillian> lu(a);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) {
    throw DegenerateSteadyStateError("steady state: bordered Liouvillian has rank " +
                                     std::to_string(lu.rank()) + " < 16");
  }
  Mat4c rho = unvec(lu.solve(rhs));
  rho = 0.5 * (rho + rho.adjoint()).eval();

  SteadyState out;
  const Eigen::SelfAdjointEigenSolver<Mat4c> es(rho);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -1e-9) {
    throw DegenerateSteadyStateError("steady state has eigenvalue " + std::to_string(min_eig));
  }
  if (min_eig < 0.0) {
    out.clipped = min_eig;
    Eigen::Vector4d ev = es.eigenvalues().cwiseMax(0.0);
    ev /= ev.sum();
    rho = es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
  }
  rho /= rho.trace().real();
  out.rho = rho;
  out.residual = (L * vec(rho)).norm() / L.norm();
  return out;
}

PropagationResult propagate_to_steady_state(const Liouvillian& L, const DensityMatrix4& rho0,
                                            double horizon, const PropagationOptions& opt) {
  if (!(horizon > 0.0)) throw InvalidArgument("horizon must be positive");
  // Dormand-Prince 5(4) tableau; the system is autonomous, so the nodes c_i
  // are not needed.
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695,
                          e4 = b4 - 393.0 / 640, e5 = b5 + 92097.0 / 339200,
                          e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;

  // Near equilibrium the error estimate vanishes and an unbounded controller
  // would let the step ride the stability boundary, leaving a noise floor of
  // order rtol * ||L|| in d rho/dt. Capping h well inside the stability
  // region lets the transients decay to rounding level.
  const double h_max = 1.0 / L.cwiseAbs().rowwise().sum().maxCoeff();
  Vec16 y = vec(rho0);
  Vec16 k1 = L * y;
  PropagationResult out;
  double t = 0.0;
  double h = opt.initial_step;
  while (true) {
    out.derivative_norm = k1.cwiseAbs().maxCoeff();
    if (out.derivative_norm < opt.derivative_tolerance) {
      out.converged = true;
      break;
    }
    if (t >= horizon || out.steps >= opt.max_steps) break;
    h = std::min({h, h_max, horizon - t});
    const Vec16 k2 = L * (y + h * a21 * k1);
    const Vec16 k3 = L * (y + h * (a31 * k1 + a32 * k2));
    const Vec16 k4 = L * (y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Vec16 k5 = L * (y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Vec16 k6 = L * (y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Vec16 y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Vec16 k7 = L * y_new;
    const Vec16 err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double err_norm = 0.0;
    for (int i = 0; i < 16; ++i) {
      const double scale = opt.atol + opt.rtol * std::max(std::abs(y(i)), std::abs(y_new(i)));
      err_norm = std::max(err_norm, std::abs(err(i)) / scale);
    }
    if (err_norm <= 1.0) {
      t += h;
      y = y_new;
      k1 = k7;
      ++out.steps;
    }
    const double factor = err_norm > 0.0 ? 0.9 * std::pow(err_norm, -0.2) : 5.0;
    h *= std::clamp(factor, 0.2, 5.0);
  }
  out.time = t;
  Mat4c rho = unvec(y);
  out.rho = 0.5 * (rho + rho.adjoint());
  return out;
}

double default_horizon(const CouplingRates& rates) {
  const double g = std::min(rates.gamma1, rates.gamma2);
  if (!(g > 0.0)) throw InvalidArgument("default horizon needs positive decay rates");
  return 200.0 / g;
}

void validate_state(const DensityMatrix4& rho) {
  if (!rho.allFinite()) throw InvalidArgument("density matrix has non-finite entries");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
    throw InvalidArgument("density matrix is not Hermitian");
  }
  if (std::abs(rho.trace() - 1.0) > 1e-10) throw InvalidArgument("density matrix trace != 1");
  const Eigen::SelfAdjointEigenSolver<Mat4c> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-9) {
    throw InvalidArgument("density matrix is not positive semidefinite");
  }
}

CoupledBasis coupled_basis(const EmitterPair& pair, const CouplingRates& rates) {
  const double delta = pair.delta;
  const double w = rates.omega12;
  const double r = std::hypot(0.5 * delta, w);
  CoupledBasis cb;
  cb.ground = Eigen::Vector4cd::Unit(0);
  cb.excited = Eigen::Vector4cd::Unit(3);
  if (r == 0.0) {
    cb.a = 1.0;
    cb.b = 0.0;
    cb.d = 0.0;
  } else {
    // delta/2 + R, rationalized when the two terms cancel.
    cb.d = delta >= 0.0 ? 0.5 * delta + r : w * w / (r - 0.5 * delta);
    const double norm = std::hypot(cb.d, w);
    if (norm == 0.0) {
      cb.a = 0.0;
      cb.b = 1.0;
    } else {
      cb.a = cb.d / norm;
      cb.b = w / norm;
    }
  }
  cb.symmetric = cb.a * Eigen::Vector4cd::Unit(2) + cb.b * Eigen::Vector4cd::Unit(1);
  cb.antisymmetric = cb.a * Eigen::Vector4cd::Unit(1) - cb.b * Eigen::Vector4cd::Unit(2);
  cb.omega_s = -r;
  cb.omega_a = r;
  return cb;
}

}  // namespace nanopair::dynamics
