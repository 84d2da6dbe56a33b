#pragma once

#include <vector>

#include "woldkit/operators.hpp"
#include "woldkit/subspace.hpp"

namespace woldkit {

/// Canonical decomposition H = H_u (+) H_cnu of a contraction.
struct CanonicalSplit {
  SubspaceBasis unitary_space;
  SubspaceBasis cnu_space;
  Matrix unitary_block;
  Matrix cnu_block;
  double unitary_off_residual = 0.0;
  double cnu_off_residual = 0.0;
  double unitary_isometry_residual = 0.0;
  double unitary_coisometry_residual = 0.0;
};

/// Largest T-reducing subspace on which T acts unitarily, by fixed-point
/// refinement of N(D_T) cap N(D_{T*}) under preimages of T and T^*.
SubspaceBasis unitary_part(const Matrix& T, const ToleranceProfile& tol = {});

CanonicalSplit canonical_decompose(const Matrix& T, const ToleranceProfile& tol = {});

/// The truncated kernel-intersection chain
///   cap_{m<=m_cap} [N(I-T^{*m}T^m) cap N(I-T^m T^{*m})];
/// independent oracle for unitary_part. Default m_cap = 2*dim.
SubspaceBasis chain_unitary_part(const Matrix& T, const ToleranceProfile& tol = {}, int m_cap = -1);

/// Range-intersection formula cap_n [R(T^{*n}) cap R(T^n)], valid for power
/// partial isometries; throws when the precondition fails, naming the first
/// failing power.
SubspaceBasis ppi_unitary_part(const Matrix& T, const ToleranceProfile& tol = {}, int m_cap = -1);

struct WoldSplit {
  SubspaceBasis unitary_space;            // stabilized cap_n R(T^n)
  SubspaceBasis wandering;                // N(T^*)
  std::vector<SubspaceBasis> levels;      // T^k wandering, k = 0, 1, ...
};

/// Wold split of an isometry into unitary part and shift levels. Accepts
/// partial isometries so window-truncated shift operators remain usable.
WoldSplit wold_split_isometry(const Matrix& T, const ToleranceProfile& tol = {});

}  // namespace woldkit
