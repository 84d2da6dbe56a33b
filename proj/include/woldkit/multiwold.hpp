#pragma once

#include <array>
#include <string>
#include <vector>

#include "woldkit/twisted.hpp"

namespace woldkit {

/// Subset A of {1..n}; bit i-1 of `mask` set iff i is a member.
struct SliceLabel {
  int n = 0;
  unsigned mask = 0;

  bool contains(int i) const { return (mask >> (i - 1)) & 1u; }
  std::vector<int> members() const;
  std::string to_string() const;  // e.g. "{1,3}" or "{}"

  static SliceLabel from_members(int n, const std::vector<int>& members);
};

struct SliceCoordinateClass {
  int coord = 0;
  bool expect_unitary = false;   // i not in label
  double unitary_residual = 0.0; // max(||B*B-I||, ||BB*-I||) of the block, when expected unitary
  int residual_unitary_dim = 0;  // dim of unitary_part of the block, when expected c.n.u.
};

struct DecompositionSlice {
  SliceLabel label;
  SubspaceBasis space;
  std::vector<Matrix> blocks;  // restriction of each coordinate to `space`
  std::vector<SliceCoordinateClass> classification;
  double max_off_residual = 0.0;  // worst reducing residual over all coordinates
};

struct DecompositionResult {
  int n = 0;
  int ambient_dim = 0;
  std::vector<DecompositionSlice> slices;  // all 2^n in binary-counter label order
  double completeness_residual = 0.0;      // ||sum of slice projectors - I||
  double max_cross_inner = 0.0;            // max |<b_a, b_c>| across distinct slices
  double max_off_residual = 0.0;
};

/// The 2^n-slice decomposition by recursive canonical splitting in the
/// fixed coordinate order T_1, ..., T_n. With `parallel`, slices at each
/// level are processed concurrently; results are merged in label order and
/// are bit-identical to the sequential run.
DecompositionResult decompose(const TwistedTuple& t, bool parallel = false);

/// The explicit n=2 kernel/span formulas, independent of the recursive
/// engine. Returned in label order: {} (uu), {1} (cnu,u), {2} (u,cnu), {1,2}.
std::array<SubspaceBasis, 4> pair_formula_subspaces(const TwistedTuple& t, int m_cap = -1);

struct RestrictionClassReport {
  bool pass = true;
  double max_unitary_residual = 0.0;
  int max_residual_unitary_dim = 0;
};

/// Re-checks every nonzero slice: unitary residuals for coordinates outside
/// the label, vanishing unitary part for coordinates inside it.
RestrictionClassReport classify_restrictions(const TwistedTuple& t,
                                             const DecompositionResult& r,
                                             const ToleranceProfile& tol);

struct PermutationCheck {
  bool permuted_verifies = false;
  double max_angle = 0.0;  // worst principal angle across matched slices
};

/// Decomposes the permuted tuple (T_{perm[0]}, ...) with the relabeled twist
/// and compares slice spaces under label relabeling. `perm` is 1-based.
PermutationCheck permuted_decompose_check(const TwistedTuple& t, const std::vector<int>& perm);

/// Builds the permuted tuple with twist U'_{ij} = U_{perm(i) perm(j)}.
TwistedTuple permute_tuple(const TwistedTuple& t, const std::vector<int>& perm, TupleMode mode);

}  // namespace woldkit
