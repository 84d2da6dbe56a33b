#include "woldkit/operators.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace woldkit {

Matrix adjoint(const Matrix& T) { return T.adjoint(); }

Matrix compose(const Matrix& A, const Matrix& B) {
  if (A.cols() != B.rows())
    throw DimensionError("compose: inner dimensions do not match");
  return A * B;
}

Matrix power(const Matrix& T, long m) {
  if (T.rows() != T.cols()) throw DimensionError("power: matrix must be square");
  const Eigen::Index d = T.rows();
  Matrix base = m >= 0 ? T : Matrix(T.adjoint());
  long k = m >= 0 ? m : -m;
  Matrix acc = Matrix::Identity(d, d);
  while (k > 0) {
    if (k & 1) acc = acc * base;
    base = base * base;
    k >>= 1;
  }
  return acc;
}

void require_contraction(const Matrix& T, const ToleranceProfile& tol) {
  double nrm = operator_norm(T);
  if (nrm > 1.0 + tol.residual_tol)
    throw NotAContraction("operator norm " + std::to_string(nrm) + " exceeds 1");
}

Matrix hermitian_sqrt(const Matrix& A, const ToleranceProfile& tol) {
  if (A.rows() != A.cols()) throw DimensionError("hermitian_sqrt: matrix must be square");
  Eigen::SelfAdjointEigenSolver<Matrix> es(A);
  Eigen::VectorXd ev = es.eigenvalues();
  for (int i = 0; i < ev.size(); ++i) {
    if (ev(i) < -tol.residual_tol)
      throw NotAContraction("hermitian_sqrt: eigenvalue " + std::to_string(ev(i)) +
                            " below -residual_tol");
    // Clamp numerically-zero eigenvalues so sqrt does not amplify noise.
    if (ev(i) < tol.rank_rtol) ev(i) = 0.0;
  }
  Matrix v = es.eigenvectors();
  return v * ev.cwiseSqrt().asDiagonal() * v.adjoint();
}

Matrix defect_operator(const Matrix& T, DefectSide side, const ToleranceProfile& tol) {
  if (T.rows() != T.cols()) throw DimensionError("defect_operator: matrix must be square");
  const Eigen::Index d = T.rows();
  Matrix g = side == DefectSide::Left ? Matrix(Matrix::Identity(d, d) - T.adjoint() * T)
                                      : Matrix(Matrix::Identity(d, d) - T * T.adjoint());
  return hermitian_sqrt(g, tol);
}

OperatorClass classify(const Matrix& T, const ToleranceProfile& tol, int m_max) {
  if (T.rows() != T.cols()) throw DimensionError("classify: matrix must be square");
  const Eigen::Index d = T.rows();
  if (m_max < 0) m_max = static_cast<int>(d);
  OperatorClass c;
  c.m_max = m_max;

  double nrm = operator_norm(T);
  c.contraction.residual = std::max(nrm - 1.0, 0.0);
  c.contraction.ok = c.contraction.residual <= tol.residual_tol;

  Matrix id = Matrix::Identity(d, d);
  c.isometry.residual = operator_norm(T.adjoint() * T - id);
  c.isometry.ok = c.isometry.residual <= tol.residual_tol;
  c.coisometry.residual = operator_norm(T * T.adjoint() - id);
  c.coisometry.ok = c.coisometry.residual <= tol.residual_tol;
  c.unitary.residual = std::max(c.isometry.residual, c.coisometry.residual);
  c.unitary.ok = c.isometry.ok && c.coisometry.ok;
  c.partial_isometry.residual = operator_norm(T * T.adjoint() * T - T);
  c.partial_isometry.ok = c.partial_isometry.residual <= tol.residual_tol;

  double worst = 0.0;
  Matrix tk = T;
  for (int k = 1; k <= m_max; ++k) {
    double r = operator_norm(tk * tk.adjoint() * tk - tk);
    if (r > worst) worst = r;
    if (r > tol.residual_tol && c.first_failing_power == 0) c.first_failing_power = k;
    if (k < m_max) tk = tk * T;
  }
  c.power_partial_isometry.residual = worst;
  c.power_partial_isometry.ok = c.first_failing_power == 0;
  return c;
}

RestrictionResult restrict_to_reducing(const Matrix& T, const SubspaceBasis& M) {
  if (T.rows() != T.cols()) throw DimensionError("restrict_to_reducing: matrix must be square");
  if (T.rows() != M.ambient_dim)
    throw DimensionError("restrict_to_reducing: ambient dimension mismatch");
  Matrix p = projector(M);
  Matrix id = Matrix::Identity(T.rows(), T.cols());
  RestrictionResult r;
  r.block = M.columns.adjoint() * T * M.columns;
  r.off_residual =
      std::max(operator_norm((id - p) * T * p), operator_norm(p * T * (id - p)));
  return r;
}

}  // namespace woldkit
