#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace woldkit {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Thresholds shared by every rank / residual decision in the library.
struct ToleranceProfile {
  double rank_rtol = 1e-10;      // singular values below rank_rtol * sigma_max count as zero
  double residual_tol = 1e-8;    // max allowed operator-residual norm
  int stabilization_window = 3;  // consecutive stable iterations before a chain is declared converged

  void validate() const;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Input operator fails the spectral contraction check.
class NotAContraction : public Error {
 public:
  using Error::Error;
};

class NotAnIsometry : public Error {
 public:
  using Error::Error;
};

class ContainmentError : public Error {
 public:
  using Error::Error;
};

inline void ToleranceProfile::validate() const {
  if (!(rank_rtol > 0.0 && rank_rtol < 1.0))
    throw Error("ToleranceProfile: rank_rtol must lie in (0,1)");
  if (!(residual_tol > 0.0 && residual_tol < 1.0))
    throw Error("ToleranceProfile: residual_tol must lie in (0,1)");
  if (stabilization_window < 1)
    throw Error("ToleranceProfile: stabilization_window must be >= 1");
}

}  // namespace woldkit
