#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cdshift {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Base of everything the library throws on contract violations.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or out-of-domain input (bad shapes, |z| >= 1, eta <= 0 where
// positivity is required, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

// A fractional power g'(z)^lambda was requested where b̄z+ā sits on the
// closed negative real axis, i.e. outside the principal-branch domain.
class BranchError : public Error {
 public:
  using Error::Error;
};

// Ill-conditioned solves, singular kernels and similar numerical breakdowns.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Integer power by repeated multiplication; ipow(0, 0) = 1, unlike
// std::pow on complex arguments.
inline Complex ipow(Complex x, int k) {
  Complex out(1.0);
  for (int i = 0; i < k; ++i) out *= x;
  return out;
}

inline double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace cdshift
