#pragma once

#include "woldkit/subspace.hpp"
#include "woldkit/types.hpp"

namespace woldkit {

Matrix adjoint(const Matrix& T);
Matrix compose(const Matrix& A, const Matrix& B);

/// T^m for m >= 0; T^{*|m|} for m < 0; identity for m == 0.
Matrix power(const Matrix& T, long m);

enum class DefectSide { Left, Right };

/// D_T = (I - T^*T)^{1/2} (Left) or (I - TT^*)^{1/2} (Right).
/// Throws NotAContraction when I - T^*T has an eigenvalue < -residual_tol.
Matrix defect_operator(const Matrix& T, DefectSide side, const ToleranceProfile& tol = {});

/// Hermitian PSD square root; negative eigenvalues above -residual_tol are
/// clipped to zero, anything below throws.
Matrix hermitian_sqrt(const Matrix& A, const ToleranceProfile& tol = {});

struct ClassFlag {
  bool ok = false;
  double residual = 0.0;
};

struct OperatorClass {
  ClassFlag contraction;
  ClassFlag isometry;          // ||T^*T - I||
  ClassFlag coisometry;        // ||TT^* - I||
  ClassFlag unitary;
  ClassFlag partial_isometry;  // ||TT^*T - T||
  ClassFlag power_partial_isometry;
  int m_max = 0;
  int first_failing_power = 0;  // 0 when all powers pass
};

/// Classify T against the standard operator classes; power partial isometry
/// is tested for powers k <= m_max (default dim).
OperatorClass classify(const Matrix& T, const ToleranceProfile& tol = {}, int m_max = -1);

struct RestrictionResult {
  Matrix block;         // B^* T B in the basis of M
  double off_residual;  // max(||(I-P)TP||, ||P T(I-P)||)
};

RestrictionResult restrict_to_reducing(const Matrix& T, const SubspaceBasis& M);

/// Spectral contraction check; throws NotAContraction when it fails.
void require_contraction(const Matrix& T, const ToleranceProfile& tol);

}  // namespace woldkit
