#include "woldkit/twisted.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace woldkit {

Matrix TwistFamily::unit(int i, int j) const {
  if (i < 1 || j < 1 || i > n || j > n)
    throw DimensionError("TwistFamily::unit: index out of range");
  if (i == j) return Matrix::Identity(dim, dim);
  if (i < j) {
    auto it = units.find({i, j});
    if (it == units.end()) throw Error("TwistFamily::unit: missing entry");
    return it->second;
  }
  auto it = units.find({j, i});
  if (it == units.end()) throw Error("TwistFamily::unit: missing entry");
  return it->second.adjoint();
}

TwistFamily TwistFamily::identity_family(int n, int dim) {
  TwistFamily f;
  f.n = n;
  f.dim = dim;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) f.units[{i, j}] = Matrix::Identity(dim, dim);
  return f;
}

TwistFamily TwistFamily::scalar_family(int n, int dim, Complex omega) {
  TwistFamily f;
  f.n = n;
  f.dim = dim;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      f.units[{i, j}] = omega * Matrix::Identity(dim, dim);
  return f;
}

TwistValidation validate_twist(const TwistFamily& f, const ToleranceProfile& tol) {
  TwistValidation v;
  Matrix id = Matrix::Identity(f.dim, f.dim);
  std::vector<const Matrix*> all;
  for (const auto& [key, u] : f.units) {
    if (u.rows() != f.dim || u.cols() != f.dim)
      throw DimensionError("validate_twist: unit dimension mismatch");
    double r = std::max(operator_norm(u.adjoint() * u - id), operator_norm(u * u.adjoint() - id));
    v.max_unitarity_residual = std::max(v.max_unitarity_residual, r);
    all.push_back(&u);
  }
  for (std::size_t a = 0; a < all.size(); ++a)
    for (std::size_t b = a + 1; b < all.size(); ++b) {
      double r = operator_norm((*all[a]) * (*all[b]) - (*all[b]) * (*all[a]));
      v.max_commutation_residual = std::max(v.max_commutation_residual, r);
    }
  v.pass = v.max_unitarity_residual <= tol.residual_tol &&
           v.max_commutation_residual <= tol.residual_tol;
  return v;
}

namespace {

double masked_norm(const Matrix& expr, const Matrix* support) {
  if (support == nullptr) return operator_norm(expr);
  return operator_norm(expr * (*support));
}

}  // namespace

RelationReport verify_relations(const std::vector<Matrix>& ops, const TwistFamily& twist,
                                const ToleranceProfile& tol, const Matrix* support) {
  tol.validate();
  RelationReport rep;
  const int n = static_cast<int>(ops.size());
  if (n == 0) throw DimensionError("verify_relations: empty tuple");
  const Eigen::Index d = ops[0].rows();
  for (const auto& t : ops)
    if (t.rows() != d || t.cols() != d)
      throw DimensionError("verify_relations: operator dimension mismatch");
  if (twist.n != n || twist.dim != d)
    throw DimensionError("verify_relations: twist family shape mismatch");

  rep.twist = validate_twist(twist, tol);
  rep.max_residual = std::max(rep.twist.max_unitarity_residual,
                              rep.twist.max_commutation_residual);
  if (!rep.twist.pass && rep.first_failure.empty())
    rep.first_failure = "twist family fails unitarity/commutation";

  for (int i = 1; i <= n; ++i) {
    double r = std::max(operator_norm(ops[i - 1]) - 1.0, 0.0);
    rep.contraction_residuals.push_back(r);
    rep.max_residual = std::max(rep.max_residual, r);
    if (r > tol.residual_tol && rep.first_failure.empty()) {
      std::ostringstream os;
      os << "T_" << i << " is not a contraction (excess norm " << r << ")";
      rep.first_failure = os.str();
    }
  }

  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      if (i == j) continue;
      const Matrix& ti = ops[i - 1];
      const Matrix& tj = ops[j - 1];
      Matrix u = twist.unit(i, j);
      PairResidual pr;
      pr.i = i;
      pr.j = j;
      pr.forward = masked_norm(ti * tj - u * tj * ti, support);
      pr.adjoint_rel = masked_norm(ti.adjoint() * tj - u.adjoint() * tj * ti.adjoint(), support);
      rep.pairs.push_back(pr);
      rep.max_residual = std::max({rep.max_residual, pr.forward, pr.adjoint_rel});
      if (rep.first_failure.empty()) {
        std::ostringstream os;
        if (pr.forward > tol.residual_tol) {
          os << "forward relation (i,j)=(" << i << "," << j << ") residual " << pr.forward;
          rep.first_failure = os.str();
        } else if (pr.adjoint_rel > tol.residual_tol) {
          os << "adjoint relation (i,j)=(" << i << "," << j << ") residual " << pr.adjoint_rel;
          rep.first_failure = os.str();
        }
      }
    }

  for (int k = 1; k <= n; ++k)
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j) {
        Matrix u = twist.unit(i, j);
        TwistCommuteResidual tc;
        tc.k = k;
        tc.i = i;
        tc.j = j;
        tc.value = masked_norm(ops[k - 1] * u - u * ops[k - 1], support);
        rep.twist_commute.push_back(tc);
        rep.max_residual = std::max(rep.max_residual, tc.value);
        if (tc.value > tol.residual_tol && rep.first_failure.empty()) {
          std::ostringstream os;
          os << "twist commutation T_" << k << " U_{" << i << j << "} residual " << tc.value;
          rep.first_failure = os.str();
        }
      }

  rep.pass = rep.first_failure.empty();
  return rep;
}

TwistedTuple make_twisted_tuple(std::vector<Matrix> ops, TwistFamily twist,
                                const ToleranceProfile& tol, TupleMode mode,
                                const Matrix* support) {
  RelationReport rep = verify_relations(ops, twist, tol, support);
  if (mode == TupleMode::Strict && !rep.pass)
    throw Error("make_twisted_tuple: " + rep.first_failure);
  TwistedTuple t;
  t.ops = std::move(ops);
  t.twist = std::move(twist);
  t.tol = tol;
  t.report = std::move(rep);
  return t;
}

RelationReport verify_tuple(const TwistedTuple& t, const Matrix* support) {
  return verify_relations(t.ops, t.twist, t.tol, support);
}

std::vector<CommutationEntry> lemma_commutation_report(const TwistedTuple& t, int l, int m,
                                                       const Matrix* support) {
  if (l < 0 || m < 0) throw Error("lemma_commutation_report: l,m must be >= 0");
  std::vector<CommutationEntry> out;
  const int n = t.n();
  const Eigen::Index d = t.dim();
  Matrix id = Matrix::Identity(d, d);
  auto comm = [&](const Matrix& a, const Matrix& b) {
    return masked_norm(a * b - b * a, support);
  };
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      if (i == j) continue;
      const Matrix& ti = t.ops[i - 1];
      const Matrix& tj = t.ops[j - 1];
      Matrix tjm = power(tj, m);
      Matrix fwd = tjm * tjm.adjoint();   // T_j^m T_j^{*m}
      Matrix bwd = tjm.adjoint() * tjm;   // T_j^{*m} T_j^m
      Matrix til = power(ti, l);
      Matrix pfl = til * til.adjoint();
      Matrix pbl = til.adjoint() * til;
      auto add = [&](const std::string& kind, double r) {
        out.push_back({i, j, kind, r});
      };
      add("[T_i, T_j^m T_j^*m]", comm(ti, fwd));
      add("[T_i, T_j^*m T_j^m]", comm(ti, bwd));
      add("[T_i^*, T_j^m T_j^*m]", comm(Matrix(ti.adjoint()), fwd));
      add("[T_i^*, T_j^*m T_j^m]", comm(Matrix(ti.adjoint()), bwd));
      add("[T_i^l T_i^*l, I - T_j^m T_j^*m]", comm(pfl, Matrix(id - fwd)));
      add("[T_i^l T_i^*l, I - T_j^*m T_j^m]", comm(pfl, Matrix(id - bwd)));
      add("[T_i^*l T_i^l, I - T_j^m T_j^*m]", comm(pbl, Matrix(id - fwd)));
      add("[T_i^*l T_i^l, I - T_j^*m T_j^m]", comm(pbl, Matrix(id - bwd)));
    }
  return out;
}

double max_commutation_residual(const std::vector<CommutationEntry>& entries) {
  double worst = 0.0;
  for (const auto& e : entries) worst = std::max(worst, e.residual);
  return worst;
}

ReductionCheck reduction_check(const TwistedTuple& t, int i) {
  if (i < 1 || i > t.n()) throw DimensionError("reduction_check: index out of range");
  ReductionCheck rc;
  rc.index = i;
  auto split = canonical_decompose(t.ops[i - 1], t.tol);
  for (int j = 1; j <= t.n(); ++j) {
    if (j == i) continue;
    double ru = restrict_to_reducing(t.ops[j - 1], split.unitary_space).off_residual;
    double rcnu = restrict_to_reducing(t.ops[j - 1], split.cnu_space).off_residual;
    rc.off_residual_unitary.push_back(ru);
    rc.off_residual_cnu.push_back(rcnu);
    rc.max_off_residual = std::max({rc.max_off_residual, ru, rcnu});
  }
  rc.pass = rc.max_off_residual <= t.tol.residual_tol;
  return rc;
}

}  // namespace woldkit
