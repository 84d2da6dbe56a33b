#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "woldkit/multiwold.hpp"
#include "woldkit/twisted.hpp"

namespace woldkit {

/// Multi-index lattice: the first `unilateral` coordinates range over Z_+,
/// the remaining `bilateral` ones over Z.
struct LatticeShape {
  int unilateral = 0;
  int bilateral = 0;

  int dims() const { return unilateral + bilateral; }
  bool admissible(const std::vector<std::int64_t>& m) const;
};

using LatticeIndex = std::vector<std::int64_t>;

/// One multiplicative factor of a monomial weight: base^{<lin,m>+off}.
struct WeightFactor {
  Complex base;
  std::vector<std::int64_t> lin;
  std::int64_t off = 0;
};

/// c(m) = scalar * prod_f base_f^{<lin_f, m> + off_f}.
struct MonomialWeight {
  Complex scalar{1.0, 0.0};
  std::vector<WeightFactor> factors;

  Complex eval(const LatticeIndex& m) const;
};

/// Registry of coefficient base values; symbolic coefficients are integer
/// exponent vectors over these bases, so equality checks are exact.
class CoefficientRegistry {
 public:
  /// Returns (base id, exponent sign). Unimodular conjugates resolve to the
  /// existing base with a negated exponent.
  std::pair<int, int> lookup(Complex value);
  Complex value(int id) const { return values_.at(id); }

 private:
  std::vector<Complex> values_;
};

/// Exact product of registered bases with integer exponents, alongside the
/// evaluated numeric value.
struct SymbolicCoefficient {
  Complex value{1.0, 0.0};
  std::map<int, std::int64_t> expo;

  void mul_base(int id, std::int64_t exponent, Complex base_value);
  bool symbolically_equal(const SymbolicCoefficient& other) const;
};

/// e_m -> c(m) e_{sigma(m)} with affine index map sigma(m) = A m + delta,
/// A lower triangular with unit diagonal (so sigma^{-1} is exact).
struct MonomialOperator {
  LatticeShape shape;
  std::vector<std::vector<std::int64_t>> sigma_mat;  // row-major, dims x dims
  std::vector<std::int64_t> sigma_off;
  MonomialWeight weight;
  bool isometric = false;

  LatticeIndex sigma(const LatticeIndex& m) const;
  LatticeIndex sigma_inv(const LatticeIndex& m) const;
  MonomialOperator adjoint_op() const;
  void validate() const;

  static MonomialOperator identity(const LatticeShape& shape);
};

struct ApplyResult {
  bool annihilated = false;
  LatticeIndex index;
  Complex coefficient{0.0, 0.0};
};

/// Forward action on a basis vector; annihilated when the image index is
/// inadmissible (only possible for adjoint-derived maps).
ApplyResult apply(const MonomialOperator& op, const LatticeIndex& m);
ApplyResult apply_adjoint(const MonomialOperator& op, const LatticeIndex& m);

/// n monomial operators on one lattice with monomial twists.
struct LatticeTuple {
  LatticeShape shape;
  std::vector<MonomialOperator> ops;
  std::map<std::pair<int, int>, MonomialOperator> twists;  // (i,j), i < j
  std::shared_ptr<CoefficientRegistry> registry = std::make_shared<CoefficientRegistry>();

  int n() const { return static_cast<int>(ops.size()); }
  MonomialOperator twist(int i, int j) const;
  void validate() const;
};

struct LatticeRelationFailure {
  int i = 0, j = 0;
  std::string relation;  // "forward" | "adjoint" | "twist-commute"
  LatticeIndex index;
  double residual = 0.0;
};

struct LatticeRelationReport {
  bool pass = true;
  bool forward_pass = true;
  bool adjoint_pass = true;
  bool twist_commute_pass = true;
  double max_residual = 0.0;          // 0 exactly when symbolically equal everywhere
  double max_forward_residual = 0.0;
  double max_adjoint_residual = 0.0;
  std::optional<LatticeRelationFailure> first_failure;
  std::int64_t checked_indices = 0;
};

/// Exact relation check on every window index: symbolic coefficient and
/// index comparison, numeric residual only for genuine mismatches.
LatticeRelationReport verify_lattice_relations(const LatticeTuple& t, int window);

/// Window indices annihilated by every adjoint T_i^*, i in label.
std::vector<LatticeIndex> wandering_set(const LatticeTuple& t, const SliceLabel& label,
                                        int window);

enum class OrbitStatus { FiniteExit, NeverExits, Undecided };

struct LatticeSliceClassification {
  LatticeIndex index;
  SliceLabel label;
  std::vector<std::pair<int, std::int64_t>> witness;  // (coordinate, strip steps)
  LatticeIndex residue;
  bool decided = true;
  std::vector<int> undecided_coords;
};

/// Backward-orbit decision for one coordinate's adjoint, structural
/// certificates first, numeric cap as fallback.
OrbitStatus backward_orbit_status(const MonomialOperator& op, const LatticeIndex& m,
                                  std::int64_t step_cap);

/// Strips e_m by adjoint applications per coordinate; coordinate i joins the
/// label iff its backward orbit exits in finitely many steps.
LatticeSliceClassification classify_index(const LatticeTuple& t, const LatticeIndex& m,
                                          std::int64_t step_cap);

struct SliceCounts {
  std::map<unsigned, std::int64_t> counts;  // label mask -> index count
  std::vector<LatticeIndex> undecided;
  std::vector<LatticeIndex> boundary;  // stripping path leaves the window
  std::int64_t window_size = 0;
};

SliceCounts slice_dimensions(const LatticeTuple& t, int window, std::int64_t step_cap = -1);

/// Window enumeration: unilateral dims run over [0, N), bilateral dims over
/// [-N/2, N - N/2), each with N points, lexicographic order.
struct LatticeWindow {
  LatticeShape shape;
  int n = 0;

  std::int64_t size() const;
  bool contains(const LatticeIndex& m) const;
  LatticeIndex at(std::int64_t flat) const;
  std::int64_t flat(const LatticeIndex& m) const;  // -1 when outside
  std::int64_t lo(int dim) const;
  std::int64_t hi(int dim) const;  // exclusive
};

struct Densified {
  std::vector<Matrix> ops;
  std::vector<Matrix> twist_units;  // aligned with (i,j), i < j, lexicographic
  std::vector<bool> interior;       // margin-limited orbit stays inside the window
  Matrix interior_projector;
  LatticeWindow window;
};

Matrix densify_op(const MonomialOperator& op, const LatticeWindow& w);

/// Dense matrices of the tuple on the window basis, with an interior mask on
/// which every product of up to `margin` factors is exact.
Densified densify(const LatticeTuple& t, int window, int margin = 3);

/// Dense TwistedTuple (audit mode) from a densified lattice tuple.
TwistedTuple densified_tuple(const Densified& d, const ToleranceProfile& tol = {});

/// The four slice index sets of an n=2 isometric lattice pair computed
/// combinatorially from the explicit pair-isometry formulas; independent
/// cross-check for classify_index. Keyed by label mask.
std::map<unsigned, std::vector<LatticeIndex>> pair_isometry_index_sets(const LatticeTuple& t,
                                                                       int window,
                                                                       std::int64_t step_cap = -1);

}  // namespace woldkit
