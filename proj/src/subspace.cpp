#include "woldkit/subspace.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace woldkit {

namespace {

void require_same_ambient(const std::vector<SubspaceBasis>& bases) {
  for (std::size_t i = 1; i < bases.size(); ++i)
    if (bases[i].ambient_dim != bases[0].ambient_dim)
      throw DimensionError("subspace operation: ambient dimension mismatch");
}

struct SvdFactors {
  Matrix u, v;
  Eigen::VectorXd sv;
};

/// Thin SVD with a JacobiSVD fallback: BDCSVD in Eigen 3.4 can emit NaNs on
/// matrices with tightly clustered singular values (e.g. projectors).
SvdFactors thin_svd(const Matrix& A) {
  SvdFactors f;
  Eigen::BDCSVD<Matrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  f.u = svd.matrixU();
  f.v = svd.matrixV();
  f.sv = svd.singularValues();
  if (f.u.allFinite() && f.v.allFinite() && f.sv.allFinite()) {
    // Cheap reconstruction check; a corrupted factorization falls through.
    double scale = std::max(1.0, A.norm());
    if ((A * f.v - f.u * f.sv.asDiagonal()).norm() <= 1e-9 * scale) return f;
  }
  Eigen::JacobiSVD<Matrix> jsvd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  f.u = jsvd.matrixU();
  f.v = jsvd.matrixV();
  f.sv = jsvd.singularValues();
  return f;
}

}  // namespace

double operator_norm(const Matrix& A) {
  if (A.rows() == 0 || A.cols() == 0) return 0.0;
  // sigma_max via the Hermitian eigenproblem of A^*A; exact at these dims.
  Matrix g = A.adjoint() * A;
  Eigen::SelfAdjointEigenSolver<Matrix> es(g, Eigen::EigenvaluesOnly);
  double lmax = es.eigenvalues().maxCoeff();
  return std::sqrt(std::max(lmax, 0.0));
}

SubspaceBasis zero_space(int ambient_dim, const ToleranceProfile& tol) {
  SubspaceBasis b;
  b.ambient_dim = ambient_dim;
  b.columns = Matrix::Zero(ambient_dim, 0);
  b.tol = tol;
  return b;
}

SubspaceBasis full_space(int ambient_dim, const ToleranceProfile& tol) {
  SubspaceBasis b;
  b.ambient_dim = ambient_dim;
  b.columns = Matrix::Identity(ambient_dim, ambient_dim);
  b.tol = tol;
  return b;
}

SubspaceBasis orthonormalize(const Matrix& vectors, const ToleranceProfile& tol) {
  tol.validate();
  const int d = static_cast<int>(vectors.rows());
  if (vectors.cols() == 0) return zero_space(d, tol);
  SvdFactors svd = thin_svd(vectors);
  const auto& sv = svd.sv;
  double smax = sv.size() > 0 ? sv(0) : 0.0;
  // Absolute floor at scale 1 so numerically-zero inputs yield rank 0.
  double cut = tol.rank_rtol * std::max(smax, 1.0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++rank;
  SubspaceBasis b;
  b.ambient_dim = d;
  b.columns = svd.u.leftCols(rank);
  b.tol = tol;
  return b;
}

SubspaceBasis kernel_of(const Matrix& A, const ToleranceProfile& tol) {
  tol.validate();
  const int n = static_cast<int>(A.cols());
  if (A.rows() < A.cols())
    throw DimensionError("kernel_of: matrix must have rows >= cols");
  if (n == 0) return zero_space(0, tol);
  SvdFactors svd = thin_svd(A);
  const auto& sv = svd.sv;
  double smax = sv.size() > 0 ? sv(0) : 0.0;
  // Absolute floor at scale 1: a numerically-zero matrix has full kernel.
  double cut = tol.rank_rtol * std::max(smax, 1.0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++rank;
  SubspaceBasis b;
  b.ambient_dim = n;
  b.columns = svd.v.rightCols(n - rank);
  b.tol = tol;
  return b;
}

SubspaceBasis range_of(const Matrix& A, const ToleranceProfile& tol) {
  return orthonormalize(A, tol);
}

SubspaceBasis intersect(const std::vector<SubspaceBasis>& bases) {
  if (bases.empty()) throw DimensionError("intersect: empty input list");
  require_same_ambient(bases);
  const int d = bases[0].ambient_dim;
  const ToleranceProfile& tol = bases[0].tol;
  // Kernel of the stacked complement projectors.
  Matrix stacked(static_cast<Eigen::Index>(bases.size()) * d, d);
  for (std::size_t i = 0; i < bases.size(); ++i)
    stacked.middleRows(static_cast<Eigen::Index>(i) * d, d) =
        Matrix::Identity(d, d) - projector(bases[i]);
  return kernel_of(stacked, tol);
}

SubspaceBasis intersect(const SubspaceBasis& a, const SubspaceBasis& b) {
  return intersect(std::vector<SubspaceBasis>{a, b});
}

SubspaceBasis complement_in(const SubspaceBasis& sub, const SubspaceBasis& ambient) {
  if (sub.ambient_dim != ambient.ambient_dim)
    throw DimensionError("complement_in: ambient dimension mismatch");
  const ToleranceProfile& tol = ambient.tol;
  if (sub.dim() > 0) {
    double membership =
        operator_norm((Matrix::Identity(sub.ambient_dim, sub.ambient_dim) - projector(ambient)) *
                      sub.columns);
    if (membership > tol.residual_tol)
      throw ContainmentError("complement_in: sub is not contained in ambient (residual " +
                             std::to_string(membership) + ")");
  }
  Matrix c = (Matrix::Identity(sub.ambient_dim, sub.ambient_dim) - projector(sub)) * ambient.columns;
  SubspaceBasis out = orthonormalize(c, tol);
  return out;
}

SubspaceBasis span_union(const std::vector<SubspaceBasis>& bases) {
  if (bases.empty()) throw DimensionError("span_union: empty input list");
  require_same_ambient(bases);
  Eigen::Index total = 0;
  for (const auto& b : bases) total += b.columns.cols();
  Matrix all(bases[0].ambient_dim, total);
  Eigen::Index at = 0;
  for (const auto& b : bases) {
    all.middleCols(at, b.columns.cols()) = b.columns;
    at += b.columns.cols();
  }
  return orthonormalize(all, bases[0].tol);
}

SubspaceBasis span_union(const SubspaceBasis& a, const SubspaceBasis& b) {
  return span_union(std::vector<SubspaceBasis>{a, b});
}

std::vector<double> principal_angles(const SubspaceBasis& a, const SubspaceBasis& b) {
  if (a.ambient_dim != b.ambient_dim)
    throw DimensionError("principal_angles: ambient dimension mismatch");
  if (a.dim() == 0 || b.dim() == 0) return {};
  Matrix g = a.columns.adjoint() * b.columns;
  SvdFactors svd = thin_svd(g);
  const auto& cosines = svd.sv;  // descending, angles ascending
  // Small angles lose precision through acos; recover them from the sine
  // matrix (I - P_a) Q_b, whose singular values are the sines.
  Matrix res = b.columns - a.columns * g;
  SvdFactors ssvd = thin_svd(res);
  std::vector<double> sines(ssvd.sv.data(), ssvd.sv.data() + ssvd.sv.size());
  std::sort(sines.begin(), sines.end());  // ascending, matches ascending angles
  const int k = static_cast<int>(cosines.size());
  std::vector<double> angles(k);
  for (int i = 0; i < k; ++i) {
    double c = std::clamp(cosines(i), 0.0, 1.0);
    double s = i < static_cast<int>(sines.size()) ? std::clamp(sines[i], 0.0, 1.0) : 1.0;
    angles[i] = c * c >= 0.5 ? std::asin(s) : std::acos(c);
  }
  std::sort(angles.begin(), angles.end());
  return angles;
}

double max_principal_angle(const SubspaceBasis& a, const SubspaceBasis& b) {
  if (a.dim() != b.dim()) return std::acos(-1.0) / 2.0;
  if (a.dim() == 0) return 0.0;
  auto angles = principal_angles(a, b);
  return angles.back();
}

bool same_subspace(const SubspaceBasis& a, const SubspaceBasis& b, double angle_tol) {
  if (a.dim() != b.dim()) return false;
  return max_principal_angle(a, b) <= angle_tol;
}

Matrix projector(const SubspaceBasis& b) {
  return b.columns * b.columns.adjoint();
}

double orthonormality_residual(const SubspaceBasis& b) {
  if (b.dim() == 0) return 0.0;
  Matrix g = b.columns.adjoint() * b.columns;
  return operator_norm(g - Matrix::Identity(b.dim(), b.dim()));
}

}  // namespace woldkit
