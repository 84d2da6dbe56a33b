#pragma once

#include <vector>

#include "woldkit/types.hpp"

namespace woldkit {

/// Orthonormal spanning family of a closed subspace of C^ambient_dim.
/// `columns` is an ambient_dim x k matrix with orthonormal columns.
struct SubspaceBasis {
  int ambient_dim = 0;
  Matrix columns;
  ToleranceProfile tol;

  int dim() const { return static_cast<int>(columns.cols()); }
};

SubspaceBasis zero_space(int ambient_dim, const ToleranceProfile& tol = {});
SubspaceBasis full_space(int ambient_dim, const ToleranceProfile& tol = {});

/// Orthonormal basis for the column span of `vectors`; rank decided by
/// singular values relative to rank_rtol * sigma_max.
SubspaceBasis orthonormalize(const Matrix& vectors, const ToleranceProfile& tol = {});

/// Basis of the numerical null space of A.
SubspaceBasis kernel_of(const Matrix& A, const ToleranceProfile& tol = {});

/// Basis of the numerical column space of A.
SubspaceBasis range_of(const Matrix& A, const ToleranceProfile& tol = {});

/// Intersection of all input subspaces, computed as the kernel of the
/// stacked complement projectors [I-P_1; I-P_2; ...].
SubspaceBasis intersect(const std::vector<SubspaceBasis>& bases);
SubspaceBasis intersect(const SubspaceBasis& a, const SubspaceBasis& b);

/// Orthogonal complement of `sub` inside `ambient`; requires sub to be
/// contained in ambient up to residual_tol.
SubspaceBasis complement_in(const SubspaceBasis& sub, const SubspaceBasis& ambient);

/// Span of all input subspaces.
SubspaceBasis span_union(const std::vector<SubspaceBasis>& bases);
SubspaceBasis span_union(const SubspaceBasis& a, const SubspaceBasis& b);

/// Principal angles between two subspaces, nondecreasing, in [0, pi/2].
/// Returns min(dim a, dim b) angles.
std::vector<double> principal_angles(const SubspaceBasis& a, const SubspaceBasis& b);

/// Largest principal angle; returns pi/2 when the dimensions differ
/// (the subspaces cannot coincide) and 0 for two zero subspaces.
double max_principal_angle(const SubspaceBasis& a, const SubspaceBasis& b);

bool same_subspace(const SubspaceBasis& a, const SubspaceBasis& b, double angle_tol = 1e-8);

/// Orthogonal projection onto span(b): B B^*.
Matrix projector(const SubspaceBasis& b);

/// ||B^* B - I||, the orthonormality residual of a basis.
double orthonormality_residual(const SubspaceBasis& b);

/// Largest singular value (spectral norm).
double operator_norm(const Matrix& A);

}  // namespace woldkit
