#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "woldkit/canonical.hpp"
#include "woldkit/operators.hpp"

namespace woldkit {

/// Twist family {U_ij} for i < j; U_ji := U_ij^*, U_ii := I.
struct TwistFamily {
  int n = 1;
  int dim = 0;
  std::map<std::pair<int, int>, Matrix> units;  // keyed by (i,j), 1-based, i < j

  /// U_ij for arbitrary ordered pair, applying the adjoint convention.
  Matrix unit(int i, int j) const;

  static TwistFamily identity_family(int n, int dim);
  static TwistFamily scalar_family(int n, int dim, Complex omega);
};

struct TwistValidation {
  double max_unitarity_residual = 0.0;
  double max_commutation_residual = 0.0;
  bool pass = true;
};

TwistValidation validate_twist(const TwistFamily& f, const ToleranceProfile& tol = {});

struct PairResidual {
  int i = 0, j = 0;
  double forward = 0.0;      // ||T_i T_j - U_ij T_j T_i||
  double adjoint_rel = 0.0;  // ||T_i^* T_j - U_ij^* T_j T_i^*||
};

struct TwistCommuteResidual {
  int k = 0, i = 0, j = 0;
  double value = 0.0;  // ||T_k U_ij - U_ij T_k||
};

struct RelationReport {
  std::vector<PairResidual> pairs;  // ordered pairs (i,j), i != j, lexicographic
  std::vector<TwistCommuteResidual> twist_commute;
  std::vector<double> contraction_residuals;  // per coordinate
  TwistValidation twist;
  double max_residual = 0.0;
  bool pass = true;
  std::string first_failure;  // empty when pass
};

enum class TupleMode { Strict, Audit };

/// n contractions with a twist family; `report` carries the relation
/// residuals from construction time.
struct TwistedTuple {
  std::vector<Matrix> ops;
  TwistFamily twist;
  ToleranceProfile tol;
  RelationReport report;

  int n() const { return static_cast<int>(ops.size()); }
  int dim() const { return ops.empty() ? 0 : static_cast<int>(ops[0].rows()); }
};

/// Residuals of the defining relations. `support` restricts every residual
/// to ||Expr * support|| — used for window-truncated operators whose
/// identities hold only on interior-supported vectors.
RelationReport verify_relations(const std::vector<Matrix>& ops, const TwistFamily& twist,
                                const ToleranceProfile& tol,
                                const Matrix* support = nullptr);

/// Strict mode throws on a failing report; audit mode carries it.
TwistedTuple make_twisted_tuple(std::vector<Matrix> ops, TwistFamily twist,
                                const ToleranceProfile& tol = {},
                                TupleMode mode = TupleMode::Strict,
                                const Matrix* support = nullptr);

RelationReport verify_tuple(const TwistedTuple& t, const Matrix* support = nullptr);

struct CommutationEntry {
  int i = 0, j = 0;
  std::string kind;
  double residual = 0.0;
};

/// Residuals for the commutation consequences of the defining relations:
/// T_i and T_i^* against T_j^m T_j^{*m} and T_j^{*m} T_j^m, and
/// T_i^l T_i^{*l}, T_i^{*l} T_i^l against (I - T_j^m T_j^{*m}),
/// (I - T_j^{*m} T_j^m), for all i != j.
std::vector<CommutationEntry> lemma_commutation_report(const TwistedTuple& t, int l, int m,
                                                       const Matrix* support = nullptr);

double max_commutation_residual(const std::vector<CommutationEntry>& entries);

struct ReductionCheck {
  int index = 0;
  std::vector<double> off_residual_unitary;  // per other coordinate j (in index order)
  std::vector<double> off_residual_cnu;
  double max_off_residual = 0.0;
  bool pass = true;
};

/// Canonical decomposition of T_i, with every other coordinate checked for
/// reduction against both halves.
ReductionCheck reduction_check(const TwistedTuple& t, int i);

}  // namespace woldkit
