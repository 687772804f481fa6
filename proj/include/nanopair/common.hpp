#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace nanopair {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using Mat3c = Eigen::Matrix3cd;
using Mat4c = Eigen::Matrix4cd;

namespace constants {
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double c = 299792458.0;             // m/s
inline constexpr double eps0 = 8.8541878128e-12;     // F/m
inline constexpr double hbar = 1.054571817e-34;      // J s
}  // namespace constants

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A Green's tensor was requested where it is singular (coincident points).
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// A point lies inside (or on) the scatterer.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// A series or iterative method did not reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// The steady-state linear system is singular or ill conditioned.
class DegenerateSteadyStateError : public Error {
 public:
  using Error::Error;
};

/// Input violates a documented precondition (bad rates, bad state, bad config).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace nanopair
