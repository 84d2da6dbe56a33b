#include "woldkit/canonical.hpp"

#include <string>

namespace woldkit {

namespace {

/// Preimage A^{-1}(M) computed as the kernel of (I - P_M) A.
SubspaceBasis preimage(const Matrix& A, const SubspaceBasis& M) {
  const Eigen::Index d = A.rows();
  Matrix op = (Matrix::Identity(d, d) - projector(M)) * A;
  return kernel_of(op, M.tol);
}

}  // namespace

SubspaceBasis unitary_part(const Matrix& T, const ToleranceProfile& tol) {
  tol.validate();
  if (T.rows() != T.cols()) throw DimensionError("unitary_part: matrix must be square");
  const int d = static_cast<int>(T.rows());
  if (d == 0) return zero_space(0, tol);
  require_contraction(T, tol);

  Matrix id = Matrix::Identity(d, d);
  SubspaceBasis m = intersect(kernel_of(id - T.adjoint() * T, tol),
                              kernel_of(id - T * T.adjoint(), tol));
  for (int iter = 0; iter < d + tol.stabilization_window && m.dim() > 0; ++iter) {
    SubspaceBasis next =
        intersect({m, preimage(T, m), preimage(Matrix(T.adjoint()), m)});
    // The chain is nested, so an unchanged dimension means the fixed point is
    // reached; keep the earlier iterate, which has accumulated less drift.
    if (next.dim() == m.dim()) return m;
    m = next;
  }
  return m;
}

CanonicalSplit canonical_decompose(const Matrix& T, const ToleranceProfile& tol) {
  const int d = static_cast<int>(T.rows());
  CanonicalSplit split;
  split.unitary_space = unitary_part(T, tol);
  split.cnu_space = complement_in(split.unitary_space, full_space(d, tol));
  auto ru = restrict_to_reducing(T, split.unitary_space);
  auto rc = restrict_to_reducing(T, split.cnu_space);
  split.unitary_block = ru.block;
  split.cnu_block = rc.block;
  split.unitary_off_residual = ru.off_residual;
  split.cnu_off_residual = rc.off_residual;
  const int k = split.unitary_space.dim();
  Matrix idk = Matrix::Identity(k, k);
  split.unitary_isometry_residual =
      operator_norm(split.unitary_block.adjoint() * split.unitary_block - idk);
  split.unitary_coisometry_residual =
      operator_norm(split.unitary_block * split.unitary_block.adjoint() - idk);
  return split;
}

SubspaceBasis chain_unitary_part(const Matrix& T, const ToleranceProfile& tol, int m_cap) {
  tol.validate();
  if (T.rows() != T.cols()) throw DimensionError("chain_unitary_part: matrix must be square");
  const int d = static_cast<int>(T.rows());
  if (d == 0) return zero_space(0, tol);
  require_contraction(T, tol);
  if (m_cap < 0) m_cap = 2 * d;
  if (m_cap < 1) throw Error("chain_unitary_part: m_cap must be >= 1");

  Matrix id = Matrix::Identity(d, d);
  SubspaceBasis acc = full_space(d, tol);
  Matrix tm = id;
  Matrix sm = id;  // T^{*m}
  for (int m = 1; m <= m_cap && acc.dim() > 0; ++m) {
    tm = tm * T;
    sm = sm * T.adjoint();
    acc = intersect({acc, kernel_of(id - sm * tm, tol), kernel_of(id - tm * sm, tol)});
  }
  return acc;
}

SubspaceBasis ppi_unitary_part(const Matrix& T, const ToleranceProfile& tol, int m_cap) {
  tol.validate();
  if (T.rows() != T.cols()) throw DimensionError("ppi_unitary_part: matrix must be square");
  const int d = static_cast<int>(T.rows());
  if (d == 0) return zero_space(0, tol);
  if (m_cap < 0) m_cap = 2 * d;
  auto cls = classify(T, tol, m_cap);
  if (!cls.power_partial_isometry.ok)
    throw Error("ppi_unitary_part: power " + std::to_string(cls.first_failing_power) +
                " of T is not a partial isometry (residual " +
                std::to_string(cls.power_partial_isometry.residual) + ")");

  SubspaceBasis acc = full_space(d, tol);
  Matrix tn = Matrix::Identity(d, d);
  for (int n = 1; n <= m_cap && acc.dim() > 0; ++n) {
    tn = tn * T;
    acc = intersect({acc, range_of(tn, tol), range_of(Matrix(tn.adjoint()), tol)});
  }
  return acc;
}

WoldSplit wold_split_isometry(const Matrix& T, const ToleranceProfile& tol) {
  tol.validate();
  if (T.rows() != T.cols()) throw DimensionError("wold_split_isometry: matrix must be square");
  const int d = static_cast<int>(T.rows());
  auto cls = classify(T, tol, 1);
  if (!cls.contraction.ok || !cls.partial_isometry.ok)
    throw NotAnIsometry("wold_split_isometry: operator is not isometric on its co-kernel "
                        "(partial isometry residual " +
                        std::to_string(cls.partial_isometry.residual) + ")");

  WoldSplit out;
  // Unitary part: stabilized intersection of forward ranges.
  SubspaceBasis acc = full_space(d, tol);
  Matrix tn = Matrix::Identity(d, d);
  int stable = 0;
  for (int n = 1; n <= 2 * d && acc.dim() > 0; ++n) {
    tn = tn * T;
    SubspaceBasis next = intersect(acc, range_of(tn, tol));
    if (next.dim() == acc.dim())
      ++stable;
    else
      stable = 0;
    acc = next;
    if (stable >= tol.stabilization_window) break;
  }
  out.unitary_space = acc;
  out.wandering = kernel_of(Matrix(T.adjoint()), tol);
  if (out.wandering.dim() > 0) {
    Matrix level = out.wandering.columns;
    for (int k = 0; k <= d; ++k) {
      SubspaceBasis lv = orthonormalize(level, tol);
      if (lv.dim() == 0) break;
      out.levels.push_back(lv);
      level = T * level;
    }
  }
  return out;
}

}  // namespace woldkit
