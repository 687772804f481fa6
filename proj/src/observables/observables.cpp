#include "nanopair/observables/observables.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace nanopair::observables {

namespace {

const cplx I(0.0, 1.0);
constexpr double kPi = constants::pi;

struct Moments {
  cplx s1, s2;  // <sigma_1>, <sigma_2>
  double n1, n2;
  cplx c;  // <sigma_2^dag sigma_1> = rho32
  cplx q;  // <sigma_2 sigma_1> = rho41
};

// rho(i, j) with 1-based indices as in the product-basis notation.
cplx el(const DensityMatrix4& rho, int i, int j) { return rho(i - 1, j - 1); }

Moments moments(const DensityMatrix4& rho) {
  Moments m;
  m.s1 = el(rho, 3, 1) + el(rho, 4, 2);
  m.s2 = el(rho, 2, 1) + el(rho, 4, 3);
  m.n1 = (el(rho, 3, 3) + el(rho, 4, 4)).real();
  m.n2 = (el(rho, 2, 2) + el(rho, 4, 4)).real();
  m.c = el(rho, 3, 2);
  m.q = el(rho, 4, 1);
  return m;
}

// Variance = a + Re[exp(2 i theta) b] split by origin.
struct Harmonic {
  double a1, a2, a12;
  cplx b1, b2, b12;
};

Harmonic harmonic(const Moments& m, const CouplingRates& rates, const Phases& ph) {
  const double w1 = std::norm(rates.g1), w2 = std::norm(rates.g2);
  const double w12 = std::abs(rates.g1) * std::abs(rates.g2);
  const double g2 = 0.5 * (w1 + w2);
  if (!(g2 > 0.0)) throw InvalidArgument("quadrature variance needs nonzero |g|");
  Harmonic h;
  h.a1 = w1 * (m.n1 - std::norm(m.s1)) / g2;
  h.a2 = w2 * (m.n2 - std::norm(m.s2)) / g2;
  h.b1 = -w1 * std::exp(2.0 * I * ph.phi1) * m.s1 * m.s1 / g2;
  h.b2 = -w2 * std::exp(2.0 * I * ph.phi2) * m.s2 * m.s2 / g2;
  h.a12 = w12 * 2.0 * (std::exp(I * (ph.phi1 - ph.phi2)) * (m.c - std::conj(m.s2) * m.s1)).real() / g2;
  h.b12 = w12 * 2.0 * std::exp(I * (ph.phi1 + ph.phi2)) * (m.q - m.s2 * m.s1) / g2;
  return h;
}

QuadratureResult evaluate(const Harmonic& h, double theta, const Phases& ph) {
  const cplx e = std::exp(2.0 * I * theta);
  QuadratureResult r;
  r.emitter1 = h.a1 + (e * h.b1).real();
  r.emitter2 = h.a2 + (e * h.b2).real();
  r.cross = h.a12 + (e * h.b12).real();
  r.total = r.emitter1 + r.emitter2 + r.cross;
  r.theta = theta;
  r.relative_phase = ph.phi2 - ph.phi1;
  return r;
}

double wrap_angle(double x, double period) {
  x = std::fmod(x, period);
  return x < 0.0 ? x + period : x;
}

void require_positive(const DensityMatrix4& rho) {
  const Eigen::SelfAdjointEigenSolver<Mat4c> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-9) {
    throw InvalidArgument("density matrix has an eigenvalue below -1e-9");
  }
}

}  // namespace

double fluorescence(const DensityMatrix4& rho, const CouplingRates& rates) {
  const Moments m = moments(rho);
  return std::norm(rates.g1) * m.n1 + std::norm(rates.g2) * m.n2;
}

Rho44Estimate rho44_perturbative(const EmitterPair& pair, const CouplingRates& rates,
                                 const DriveDetection& drive, Rho44Form form) {
  const double w1 = -0.5 * pair.delta - drive.detuning;
  const double w2 = 0.5 * pair.delta - drive.detuning;
  const cplx o1 = rates.f1 * drive.rabi0;
  const cplx o2 = rates.f2 * drive.rabi0;
  const double gsum = rates.gamma1 + rates.gamma2;
  Rho44Estimate out;

  if (form == Rho44Form::Damped) {
    const cplx c1 = w1 - 0.5 * I * rates.gamma1;
    const cplx c2 = w2 - 0.5 * I * rates.gamma2;
    const cplx coupling = rates.omega12 + 0.5 * I * rates.gamma12;
    const cplx num = o1 * o2 * (c1 + c2) + coupling * (o1 * o1 + o2 * o2);
    const cplx den = c1 * c2 - coupling * coupling;
    out.value = std::norm(num) /
                (4.0 * std::norm(den) * (gsum * gsum + 16.0 * drive.detuning * drive.detuning));
    return out;
  }

  const double scale = std::max({std::abs(pair.delta), std::abs(drive.detuning), gsum, 1e-300});
  if (std::abs(w1) <= 1e-12 * scale || std::abs(w2) <= 1e-12 * scale) {
    out.singular = true;
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }
  const double prod = w1 * w2;
  if (form == Rho44Form::Undamped) {
    const cplx num = o1 * o2 * (w1 + w2) + rates.omega12 * (o1 * o1 + o2 * o2);
    out.value = std::norm(num) /
                (4.0 * prod * prod * (gsum * gsum + 16.0 * drive.detuning * drive.detuning));
  } else {
    const cplx amp = (2.0 * o1 * o2 * (w1 + w2) - rates.omega12 * (o1 * o1 + o2 * o2)) / prod;
    out.value = std::norm(amp) / (gsum * gsum + 4.0 * drive.detuning * drive.detuning);
  }
  return out;
}

double concurrence(const DensityMatrix4& rho) {
  require_positive(rho);
  Mat4c yy = Mat4c::Zero();
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  // Hermitian form: eigenvalues of sqrt(rho) rho~ sqrt(rho) are the squared
  // Wootters values, and stay accurate near zero where rho rho~ loses half the digits.
  const Eigen::SelfAdjointEigenSolver<Mat4c> es(rho);
  const Mat4c root = es.eigenvectors() *
                     es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                     es.eigenvectors().adjoint();
  const Mat4c tilde = yy * rho.conjugate() * yy;
  const Mat4c m = root * tilde * root;
  const Eigen::SelfAdjointEigenSolver<Mat4c> ms(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  std::array<double, 4> lam{};
  for (int i = 0; i < 4; ++i) lam[i] = std::sqrt(std::max(ms.eigenvalues()(i), 0.0));
  std::sort(lam.begin(), lam.end(), std::greater<>());
  return std::clamp(lam[0] - lam[1] - lam[2] - lam[3], 0.0, 1.0);
}

CrossConcurrence concurrence_cross_approx(const DensityMatrix4& rho) {
  CrossConcurrence c;
  const double p11 = el(rho, 1, 1).real(), p22 = el(rho, 2, 2).real();
  const double p33 = el(rho, 3, 3).real(), p44 = el(rho, 4, 4).real();
  c.c1 = 2.0 * std::abs(el(rho, 4, 1)) - 2.0 * std::sqrt(std::max(p22 * p33, 0.0));
  c.c2 = 2.0 * std::abs(el(rho, 2, 3)) - 2.0 * std::sqrt(std::max(p11 * p44, 0.0));
  c.approx = std::max({0.0, c.c1, c.c2});
  c.off_cross = std::max({std::abs(el(rho, 1, 2)), std::abs(el(rho, 1, 3)),
                          std::abs(el(rho, 2, 4)), std::abs(el(rho, 3, 4))});
  return c;
}

QuadratureResult quadrature_variance(const DensityMatrix4& rho, const CouplingRates& rates,
                                     const Phases& phases, double theta) {
  return evaluate(harmonic(moments(rho), rates, phases), theta, phases);
}

QuadratureResult quadrature_variance(const DensityMatrix4& rho, const CouplingRates& rates,
                                     double theta) {
  return quadrature_variance(rho, rates, Phases{rates.phase1(), rates.phase2()}, theta);
}

QuadratureResult optimize_quadrature(const DensityMatrix4& rho, const CouplingRates& rates,
                                     int relative_phase_points) {
  if (relative_phase_points < 0) throw InvalidArgument("relative_phase_points must be >= 0");
  const Moments m = moments(rho);
  const int count = relative_phase_points == 0 ? 1 : relative_phase_points;
  QuadratureResult best;
  for (int k = 0; k < count; ++k) {
    Phases ph{rates.phase1(), rates.phase2()};
    if (relative_phase_points > 0) ph.phi2 = ph.phi1 + 2.0 * kPi * k / count;
    const Harmonic h = harmonic(m, rates, ph);
    const cplx b = h.b1 + h.b2 + h.b12;
    const double theta = std::abs(b) > 0.0 ? wrap_angle(0.5 * (kPi - std::arg(b)), kPi) : 0.0;
    const QuadratureResult r = evaluate(h, theta, ph);
    if (k == 0 || r.total < best.total) best = r;
  }
  return best;
}

TwoLevelSqueezing squeezing_two_level_approx(const DensityMatrix4& rho, const Phases& phases,
                                             double theta) {
  const double base = 1.0 - el(rho, 1, 1).real() + el(rho, 4, 4).real();
  const cplx r14 = el(rho, 1, 4);
  TwoLevelSqueezing s;
  s.value = base + 2.0 * (std::exp(-I * (2.0 * theta + phases.phi1 + phases.phi2)) * r14).real();
  s.optimum = base - 2.0 * std::abs(r14);
  s.bound = -2.0 * std::abs(r14);
  s.validity = std::abs(r14) > 0.0 ? std::abs(el(rho, 2, 3)) / std::abs(r14)
                                   : std::numeric_limits<double>::infinity();
  return s;
}

SpinSqueezing spin_squeezing(const DensityMatrix4& rho) {
  const Mat4c s1 = dynamics::ops::lowering(1), s2 = dynamics::ops::lowering(2);
  const Mat4c lower = s1 + s2;
  const Mat4c sx = 0.5 * (lower.adjoint() + lower);
  const Mat4c sy = (lower.adjoint() - lower) / (2.0 * I);
  const Mat4c sz = dynamics::ops::sigma_z(1) + dynamics::ops::sigma_z(2);
  auto expect = [&](const Mat4c& op) { return (rho * op).trace().real(); };

  SpinSqueezing out;
  out.sx = expect(sx);
  out.sy = expect(sy);
  out.sz = expect(sz);
  out.length = std::sqrt(out.sx * out.sx + out.sy * out.sy + out.sz * out.sz);
  out.variance = expect(sx * sx) - out.sx * out.sx;
  out.normal_variance = out.variance + 0.5 * out.sz;
  out.xi_defined = out.length > 1e-12;
  out.xi = out.xi_defined ? 2.0 * out.variance / out.length : std::nan("");
  out.antisymmetric_bracket =
      (el(rho, 2, 2) + el(rho, 3, 3)).real() - 2.0 * el(rho, 2, 3).real();
  out.weak_drive_form = 0.25 * (1.0 - el(rho, 1, 1).real() + el(rho, 4, 4).real() -
                                2.0 * el(rho, 1, 4).real() + out.antisymmetric_bracket);
  out.criteria_agree = !out.xi_defined || ((out.xi < 1.0) == (out.normal_variance < 0.0));
  return out;
}

}  // namespace nanopair::observables
