#include "woldkit/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <sstream>

namespace woldkit {

namespace {

std::int64_t dot(const std::vector<std::int64_t>& a, const LatticeIndex& m) {
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * m[i];
  return acc;
}

Complex int_pow(Complex base, std::int64_t e) {
  if (e == 0) return {1.0, 0.0};
  bool neg = e < 0;
  std::uint64_t k = neg ? static_cast<std::uint64_t>(-e) : static_cast<std::uint64_t>(e);
  Complex acc{1.0, 0.0};
  Complex b = base;
  while (k > 0) {
    if (k & 1) acc *= b;
    b *= b;
    k >>= 1;
  }
  return neg ? Complex{1.0, 0.0} / acc : acc;
}

bool is_unimodular(Complex v) { return std::abs(std::abs(v) - 1.0) < 1e-12; }

std::string index_str(const LatticeIndex& m) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) os << ",";
    os << m[i];
  }
  os << ")";
  return os.str();
}

}  // namespace

bool LatticeShape::admissible(const LatticeIndex& m) const {
  if (static_cast<int>(m.size()) != dims()) return false;
  for (int i = 0; i < unilateral; ++i)
    if (m[i] < 0) return false;
  return true;
}

Complex MonomialWeight::eval(const LatticeIndex& m) const {
  Complex c = scalar;
  for (const auto& f : factors) c *= int_pow(f.base, dot(f.lin, m) + f.off);
  return c;
}

std::pair<int, int> CoefficientRegistry::lookup(Complex value) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] == value) return {static_cast<int>(i), 1};
    if (is_unimodular(value) && values_[i] == std::conj(value))
      return {static_cast<int>(i), -1};
  }
  values_.push_back(value);
  return {static_cast<int>(values_.size()) - 1, 1};
}

void SymbolicCoefficient::mul_base(int id, std::int64_t exponent, Complex base_value) {
  if (exponent == 0) return;
  value *= int_pow(base_value, exponent);
  auto it = expo.find(id);
  if (it == expo.end()) {
    expo[id] = exponent;
  } else {
    it->second += exponent;
    if (it->second == 0) expo.erase(it);
  }
}

bool SymbolicCoefficient::symbolically_equal(const SymbolicCoefficient& other) const {
  return expo == other.expo;
}

LatticeIndex MonomialOperator::sigma(const LatticeIndex& m) const {
  const int d = shape.dims();
  LatticeIndex out(d, 0);
  for (int i = 0; i < d; ++i) {
    std::int64_t acc = sigma_off[i];
    for (int j = 0; j < d; ++j) acc += sigma_mat[i][j] * m[j];
    out[i] = acc;
  }
  return out;
}

LatticeIndex MonomialOperator::sigma_inv(const LatticeIndex& m) const {
  // Forward substitution: sigma_mat is lower triangular with unit diagonal.
  const int d = shape.dims();
  LatticeIndex x(d, 0);
  for (int i = 0; i < d; ++i) {
    std::int64_t acc = m[i] - sigma_off[i];
    for (int j = 0; j < i; ++j) acc -= sigma_mat[i][j] * x[j];
    x[i] = acc;
  }
  return x;
}

MonomialOperator MonomialOperator::adjoint_op() const {
  const int d = shape.dims();
  // A^{-1} by forward substitution on identity columns.
  std::vector<std::vector<std::int64_t>> ainv(d, std::vector<std::int64_t>(d, 0));
  for (int col = 0; col < d; ++col) {
    for (int i = 0; i < d; ++i) {
      std::int64_t acc = (i == col) ? 1 : 0;
      for (int j = 0; j < i; ++j) acc -= sigma_mat[i][j] * ainv[j][col];
      ainv[i][col] = acc;
    }
  }
  LatticeIndex ainv_delta(d, 0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) ainv_delta[i] += ainv[i][j] * sigma_off[j];

  MonomialOperator adj;
  adj.shape = shape;
  adj.sigma_mat = ainv;
  adj.sigma_off.assign(d, 0);
  for (int i = 0; i < d; ++i) adj.sigma_off[i] = -ainv_delta[i];
  adj.isometric = false;  // adjoint of an isometry need not be one
  adj.weight.scalar = std::conj(weight.scalar);
  for (const auto& f : weight.factors) {
    WeightFactor nf;
    nf.base = std::conj(f.base);
    nf.lin.assign(d, 0);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) nf.lin[i] += ainv[j][i] * f.lin[j];  // A^{-T} lin
    nf.off = f.off - dot(f.lin, ainv_delta);
    adj.weight.factors.push_back(nf);
  }
  return adj;
}

void MonomialOperator::validate() const {
  const int d = shape.dims();
  if (d < 1) throw Error("MonomialOperator: empty shape");
  if (static_cast<int>(sigma_mat.size()) != d || static_cast<int>(sigma_off.size()) != d)
    throw DimensionError("MonomialOperator: sigma shape mismatch");
  for (int i = 0; i < d; ++i) {
    if (static_cast<int>(sigma_mat[i].size()) != d)
      throw DimensionError("MonomialOperator: sigma row length mismatch");
    if (sigma_mat[i][i] != 1)
      throw Error("MonomialOperator: sigma must have unit diagonal");
    for (int j = i + 1; j < d; ++j)
      if (sigma_mat[i][j] != 0)
        throw Error("MonomialOperator: sigma must be lower triangular");
  }
  // Forward maps must send admissible indices to admissible indices.
  for (int i = 0; i < shape.unilateral; ++i) {
    if (sigma_off[i] < 0)
      throw Error("MonomialOperator: unilateral offset must be >= 0");
    for (int j = 0; j < i; ++j)
      if (sigma_mat[i][j] < 0)
        throw Error("MonomialOperator: unilateral sigma entries must be >= 0");
  }
  if (weight.scalar == Complex{0.0, 0.0})
    throw Error("MonomialOperator: zero weight scalar");
  for (const auto& f : weight.factors) {
    if (static_cast<int>(f.lin.size()) != d)
      throw DimensionError("MonomialOperator: weight factor length mismatch");
    double ab = std::abs(f.base);
    if (ab == 0.0) throw Error("MonomialOperator: zero weight base");
    if (ab > 1.0 + 1e-12) throw Error("MonomialOperator: weight base modulus exceeds 1");
    if (!is_unimodular(f.base)) {
      if (f.off < 0) throw Error("MonomialOperator: damped factor needs offset >= 0");
      for (int i = 0; i < d; ++i) {
        if (f.lin[i] < 0) throw Error("MonomialOperator: damped factor needs lin >= 0");
        if (i >= shape.unilateral && f.lin[i] != 0)
          throw Error("MonomialOperator: damped factor on bilateral dim is unbounded");
      }
    }
  }
  if (isometric) {
    if (!is_unimodular(weight.scalar))
      throw Error("MonomialOperator: isometric weight scalar must be unimodular");
    for (const auto& f : weight.factors)
      if (!is_unimodular(f.base))
        throw Error("MonomialOperator: isometric weight base must be unimodular");
  }
}

MonomialOperator MonomialOperator::identity(const LatticeShape& shape) {
  const int d = shape.dims();
  MonomialOperator op;
  op.shape = shape;
  op.sigma_mat.assign(d, std::vector<std::int64_t>(d, 0));
  for (int i = 0; i < d; ++i) op.sigma_mat[i][i] = 1;
  op.sigma_off.assign(d, 0);
  op.isometric = true;
  return op;
}

ApplyResult apply(const MonomialOperator& op, const LatticeIndex& m) {
  if (!op.shape.admissible(m)) throw Error("apply: inadmissible index " + index_str(m));
  ApplyResult r;
  r.index = op.sigma(m);
  if (!op.shape.admissible(r.index)) {
    r.annihilated = true;
    r.index.clear();
    return r;
  }
  r.coefficient = op.weight.eval(m);
  return r;
}

ApplyResult apply_adjoint(const MonomialOperator& op, const LatticeIndex& m) {
  return woldkit::apply(op.adjoint_op(), m);
}

MonomialOperator LatticeTuple::twist(int i, int j) const {
  if (i == j) return MonomialOperator::identity(shape);
  if (i < j) {
    auto it = twists.find({i, j});
    if (it == twists.end()) throw Error("LatticeTuple::twist: missing entry");
    return it->second;
  }
  auto it = twists.find({j, i});
  if (it == twists.end()) throw Error("LatticeTuple::twist: missing entry");
  return it->second.adjoint_op();
}

void LatticeTuple::validate() const {
  if (ops.empty()) throw Error("LatticeTuple: empty tuple");
  for (const auto& op : ops) {
    if (op.shape.unilateral != shape.unilateral || op.shape.bilateral != shape.bilateral)
      throw DimensionError("LatticeTuple: operator shape mismatch");
    op.validate();
  }
  for (const auto& [key, u] : twists) {
    u.validate();
    if (!is_unimodular(u.weight.scalar))
      throw Error("LatticeTuple: twist weight must be unimodular");
    for (const auto& f : u.weight.factors)
      if (!is_unimodular(f.base)) throw Error("LatticeTuple: twist weight must be unimodular");
    // Unitarity on the lattice: sigma must fix the unilateral block.
    for (int i = 0; i < shape.unilateral; ++i) {
      if (u.sigma_off[i] != 0)
        throw Error("LatticeTuple: twist sigma must fix unilateral coordinates");
      for (int j = 0; j < shape.dims(); ++j)
        if (u.sigma_mat[i][j] != (i == j ? 1 : 0))
          throw Error("LatticeTuple: twist sigma must fix unilateral coordinates");
    }
  }
}

namespace {

struct SymbolicApply {
  bool annihilated = false;
  LatticeIndex index;
  SymbolicCoefficient coeff;
};

void mul_weight(SymbolicCoefficient& acc, const MonomialOperator& op, const LatticeIndex& m,
                CoefficientRegistry& reg) {
  if (op.weight.scalar != Complex{1.0, 0.0}) {
    auto [id, sign] = reg.lookup(op.weight.scalar);
    acc.mul_base(id, sign, reg.value(id));
  }
  for (const auto& f : op.weight.factors) {
    std::int64_t e = dot(f.lin, m) + f.off;
    if (e == 0 || f.base == Complex{1.0, 0.0}) continue;
    auto [id, sign] = reg.lookup(f.base);
    acc.mul_base(id, sign * e, reg.value(id));
  }
}

/// Applies the chain right-to-left: chain_apply({A, B}, m) computes A(B(e_m)).
SymbolicApply chain_apply(const std::vector<const MonomialOperator*>& chain,
                          const LatticeIndex& m, CoefficientRegistry& reg) {
  SymbolicApply r;
  r.index = m;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    const MonomialOperator& op = **it;
    if (!op.shape.admissible(r.index)) {
      r.annihilated = true;
      return r;
    }
    LatticeIndex next = op.sigma(r.index);
    if (!op.shape.admissible(next)) {
      r.annihilated = true;
      return r;
    }
    mul_weight(r.coeff, op, r.index, reg);
    r.index = next;
  }
  return r;
}

/// Numeric distance between two one-basis-vector results; 0 exactly when
/// symbolically identical.
double side_residual(const SymbolicApply& lhs, const SymbolicApply& rhs) {
  if (lhs.annihilated && rhs.annihilated) return 0.0;
  if (lhs.annihilated) return std::abs(rhs.coeff.value);
  if (rhs.annihilated) return std::abs(lhs.coeff.value);
  if (lhs.index == rhs.index) {
    if (lhs.coeff.symbolically_equal(rhs.coeff)) return 0.0;
    return std::abs(lhs.coeff.value - rhs.coeff.value);
  }
  return std::hypot(std::abs(lhs.coeff.value), std::abs(rhs.coeff.value));
}

}  // namespace

std::int64_t LatticeWindow::size() const {
  std::int64_t s = 1;
  for (int i = 0; i < shape.dims(); ++i) s *= n;
  return s;
}

std::int64_t LatticeWindow::lo(int dim) const {
  return dim < shape.unilateral ? 0 : -(static_cast<std::int64_t>(n) / 2);
}

std::int64_t LatticeWindow::hi(int dim) const { return lo(dim) + n; }

bool LatticeWindow::contains(const LatticeIndex& m) const {
  if (static_cast<int>(m.size()) != shape.dims()) return false;
  for (int i = 0; i < shape.dims(); ++i)
    if (m[i] < lo(i) || m[i] >= hi(i)) return false;
  return true;
}

LatticeIndex LatticeWindow::at(std::int64_t flat) const {
  const int d = shape.dims();
  LatticeIndex m(d, 0);
  for (int i = d - 1; i >= 0; --i) {
    m[i] = lo(i) + (flat % n);
    flat /= n;
  }
  return m;
}

std::int64_t LatticeWindow::flat(const LatticeIndex& m) const {
  if (!contains(m)) return -1;
  std::int64_t f = 0;
  for (int i = 0; i < shape.dims(); ++i) f = f * n + (m[i] - lo(i));
  return f;
}

LatticeRelationReport verify_lattice_relations(const LatticeTuple& t, int window) {
  if (window < 1) throw Error("verify_lattice_relations: window must be >= 1");
  t.validate();
  LatticeRelationReport rep;
  LatticeWindow w{t.shape, window};
  CoefficientRegistry& reg = *t.registry;
  const int n = t.n();

  auto record = [&](int i, int j, const char* relation, const LatticeIndex& m, double res,
                    bool& family_pass) {
    rep.max_residual = std::max(rep.max_residual, res);
    if (res > 0.0) {
      family_pass = false;
      rep.pass = false;
      if (!rep.first_failure)
        rep.first_failure = LatticeRelationFailure{i, j, relation, m, res};
    }
  };

  for (std::int64_t f = 0; f < w.size(); ++f) {
    LatticeIndex m = w.at(f);
    ++rep.checked_indices;
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) {
        if (i == j) continue;
        const MonomialOperator& ti = t.ops[i - 1];
        const MonomialOperator& tj = t.ops[j - 1];
        MonomialOperator u = t.twist(i, j);
        MonomialOperator ustar = u.adjoint_op();
        MonomialOperator ti_star = ti.adjoint_op();

        auto lhs_f = chain_apply({&ti, &tj}, m, reg);
        auto rhs_f = chain_apply({&u, &tj, &ti}, m, reg);
        double rf = side_residual(lhs_f, rhs_f);
        rep.max_forward_residual = std::max(rep.max_forward_residual, rf);
        record(i, j, "forward", m, rf, rep.forward_pass);

        auto lhs_a = chain_apply({&ti_star, &tj}, m, reg);
        auto rhs_a = chain_apply({&ustar, &tj, &ti_star}, m, reg);
        double ra = side_residual(lhs_a, rhs_a);
        rep.max_adjoint_residual = std::max(rep.max_adjoint_residual, ra);
        record(i, j, "adjoint", m, ra, rep.adjoint_pass);
      }
    for (int k = 1; k <= n; ++k)
      for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) {
          const MonomialOperator& tk = t.ops[k - 1];
          MonomialOperator u = t.twist(i, j);
          auto lhs = chain_apply({&tk, &u}, m, reg);
          auto rhs = chain_apply({&u, &tk}, m, reg);
          record(k, j, "twist-commute", m, side_residual(lhs, rhs), rep.twist_commute_pass);
        }
  }
  return rep;
}

std::vector<LatticeIndex> wandering_set(const LatticeTuple& t, const SliceLabel& label,
                                        int window) {
  LatticeWindow w{t.shape, window};
  std::vector<LatticeIndex> out;
  std::vector<MonomialOperator> adjoints;
  for (int i : label.members()) adjoints.push_back(t.ops[i - 1].adjoint_op());
  for (std::int64_t f = 0; f < w.size(); ++f) {
    LatticeIndex m = w.at(f);
    bool all_annihilate = true;
    for (const auto& adj : adjoints)
      if (!woldkit::apply(adj, m).annihilated) {
        all_annihilate = false;
        break;
      }
    if (all_annihilate) out.push_back(m);
  }
  return out;
}

OrbitStatus backward_orbit_status(const MonomialOperator& op, const LatticeIndex& m,
                                  std::int64_t step_cap) {
  MonomialOperator adj = op.adjoint_op();
  const int d = op.shape.dims();
  const int uni = op.shape.unilateral;

  bool all_fixed = true;
  for (int i = 0; i < uni; ++i) {
    bool row_identity = adj.sigma_off[i] == 0;
    for (int j = 0; j < d && row_identity; ++j)
      if (adj.sigma_mat[i][j] != (i == j ? 1 : 0)) row_identity = false;
    if (!row_identity) all_fixed = false;

    // Strictly decreasing unilateral coordinate: guaranteed finite exit.
    bool pure_shift = adj.sigma_off[i] < 0;
    for (int j = 0; j < d && pure_shift; ++j)
      if (adj.sigma_mat[i][j] != (i == j ? 1 : 0)) pure_shift = false;
    if (pure_shift) return OrbitStatus::FiniteExit;
  }
  if (all_fixed) return OrbitStatus::NeverExits;

  LatticeIndex cur = m;
  for (std::int64_t s = 0; s < step_cap; ++s) {
    auto r = woldkit::apply(adj, cur);
    if (r.annihilated) return OrbitStatus::FiniteExit;
    cur = r.index;
  }
  return OrbitStatus::Undecided;
}

LatticeSliceClassification classify_index(const LatticeTuple& t, const LatticeIndex& m,
                                          std::int64_t step_cap) {
  if (!t.shape.admissible(m)) throw Error("classify_index: inadmissible index " + index_str(m));
  LatticeSliceClassification out;
  out.index = m;
  out.label.n = t.n();
  LatticeIndex cur = m;
  for (int i = 1; i <= t.n(); ++i) {
    const MonomialOperator& op = t.ops[i - 1];
    OrbitStatus st = backward_orbit_status(op, cur, step_cap);
    if (st == OrbitStatus::Undecided) {
      out.decided = false;
      out.undecided_coords.push_back(i);
      continue;
    }
    if (st == OrbitStatus::NeverExits) continue;
    MonomialOperator adj = op.adjoint_op();
    std::int64_t steps = 0;
    while (true) {
      auto r = woldkit::apply(adj, cur);
      if (r.annihilated) break;
      cur = r.index;
      ++steps;
      if (steps > 4 * step_cap) {
        out.decided = false;
        out.undecided_coords.push_back(i);
        break;
      }
    }
    out.label.mask |= 1u << (i - 1);
    out.witness.push_back({i, steps});
  }
  out.residue = cur;
  return out;
}

SliceCounts slice_dimensions(const LatticeTuple& t, int window, std::int64_t step_cap) {
  if (step_cap < 0) step_cap = 4 * static_cast<std::int64_t>(window);
  LatticeWindow w{t.shape, window};
  SliceCounts out;
  out.window_size = w.size();
  for (std::int64_t f = 0; f < w.size(); ++f) {
    LatticeIndex m = w.at(f);
    auto cls = classify_index(t, m, step_cap);
    if (!cls.decided) {
      out.undecided.push_back(m);
      continue;
    }
    ++out.counts[cls.label.mask];

    // Walk the witness; flag indices whose stripping path leaves the window.
    LatticeIndex cur = m;
    bool in_window = true;
    for (const auto& [coord, steps] : cls.witness) {
      MonomialOperator adj = t.ops[coord - 1].adjoint_op();
      for (std::int64_t s = 0; s < steps && in_window; ++s) {
        cur = woldkit::apply(adj, cur).index;
        if (!w.contains(cur)) in_window = false;
      }
    }
    if (!in_window) out.boundary.push_back(m);
  }
  return out;
}

Matrix densify_op(const MonomialOperator& op, const LatticeWindow& w) {
  Matrix m = Matrix::Zero(w.size(), w.size());
  for (std::int64_t f = 0; f < w.size(); ++f) {
    auto r = woldkit::apply(op, w.at(f));
    if (r.annihilated) continue;
    std::int64_t g = w.flat(r.index);
    if (g >= 0) m(g, f) = r.coefficient;
  }
  return m;
}

Densified densify(const LatticeTuple& t, int window, int margin) {
  if (window < 2) throw Error("densify: window must be >= 2");
  t.validate();
  Densified d;
  d.window = LatticeWindow{t.shape, window};
  for (const auto& op : t.ops) d.ops.push_back(densify_op(op, d.window));
  for (int i = 1; i <= t.n(); ++i)
    for (int j = i + 1; j <= t.n(); ++j)
      d.twist_units.push_back(densify_op(t.twist(i, j), d.window));

  // All forward/adjoint moves whose orbits must stay inside the window for
  // an index to count as interior.
  std::vector<MonomialOperator> moves;
  for (const auto& op : t.ops) {
    moves.push_back(op);
    moves.push_back(op.adjoint_op());
  }
  for (const auto& [key, u] : t.twists) {
    moves.push_back(u);
    moves.push_back(u.adjoint_op());
  }

  const std::int64_t size = d.window.size();
  d.interior.assign(size, false);
  std::int64_t interior_count = 0;
  for (std::int64_t f = 0; f < size; ++f) {
    std::set<LatticeIndex> frontier{d.window.at(f)};
    bool ok = true;
    for (int depth = 0; depth < margin && ok; ++depth) {
      std::set<LatticeIndex> next;
      for (const auto& m : frontier)
        for (const auto& mv : moves) {
          auto r = woldkit::apply(mv, m);
          if (r.annihilated) continue;
          if (!d.window.contains(r.index)) {
            ok = false;
            break;
          }
          next.insert(r.index);
        }
      frontier = std::move(next);
    }
    d.interior[f] = ok;
    if (ok) ++interior_count;
  }
  if (interior_count == 0) throw Error("densify: window too small, interior is empty");
  d.interior_projector = Matrix::Zero(size, size);
  for (std::int64_t f = 0; f < size; ++f)
    if (d.interior[f]) d.interior_projector(f, f) = 1.0;
  return d;
}

TwistedTuple densified_tuple(const Densified& d, const ToleranceProfile& tol) {
  const int n = static_cast<int>(d.ops.size());
  TwistFamily f;
  f.n = n;
  f.dim = static_cast<int>(d.ops[0].rows());
  int at = 0;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) f.units[{i, j}] = d.twist_units[at++];
  return make_twisted_tuple(d.ops, std::move(f), tol, TupleMode::Audit, &d.interior_projector);
}

std::map<unsigned, std::vector<LatticeIndex>> pair_isometry_index_sets(const LatticeTuple& t,
                                                                       int window,
                                                                       std::int64_t step_cap) {
  if (t.n() != 2) throw Error("pair_isometry_index_sets: requires n = 2");
  for (const auto& op : t.ops)
    if (!op.isometric) throw NotAnIsometry("pair_isometry_index_sets: tuple must be isometric");
  if (step_cap < 0) step_cap = 4 * static_cast<std::int64_t>(window);
  LatticeWindow w{t.shape, window};
  MonomialOperator a1 = t.ops[0].adjoint_op();
  MonomialOperator a2 = t.ops[1].adjoint_op();

  // Backward orbit from q survives at least `step_cap` steps, or is
  // structurally infinite; undecided counts as surviving the capped check.
  auto survives = [&](const MonomialOperator& op, const LatticeIndex& q) {
    return backward_orbit_status(op, q, step_cap) != OrbitStatus::FiniteExit;
  };
  // Full strip: returns residue after all successful adjoint applications.
  auto strip = [&](const MonomialOperator& adj, LatticeIndex q) {
    while (true) {
      auto r = woldkit::apply(adj, q);
      if (r.annihilated) return q;
      q = r.index;
    }
  };
  auto in_kernel = [&](const MonomialOperator& adj, const LatticeIndex& q) {
    return woldkit::apply(adj, q).annihilated;
  };
  // q lies in cap_{m} T_other^m N(T_own^*): every backward T_other-iterate
  // exists and is annihilated by T_own^*.
  auto in_core = [&](const MonomialOperator& adj_other, const MonomialOperator& adj_own,
                     const LatticeIndex& q) {
    if (!in_kernel(adj_own, q)) return false;
    LatticeIndex cur = q;
    for (std::int64_t s = 0; s < step_cap; ++s) {
      auto r = woldkit::apply(adj_other, cur);
      if (r.annihilated) return false;
      cur = r.index;
      if (!in_kernel(adj_own, cur)) return false;
    }
    return true;
  };

  std::map<unsigned, std::vector<LatticeIndex>> sets;
  sets[0u];
  sets[1u];
  sets[2u];
  sets[3u];
  for (std::int64_t f = 0; f < w.size(); ++f) {
    LatticeIndex p = w.at(f);
    bool inf1 = survives(t.ops[0], p);
    bool inf2 = survives(t.ops[1], p);
    if (inf1 && inf2) {
      sets[0u].push_back(p);  // H_uu = cap T_1^{m_1} T_2^{m_2} H
    } else if (!inf1 && inf2) {
      // H_su = (+) T_1^{m_1} ( cap T_2^{m_2} N(T_1^*) )
      LatticeIndex q = strip(a1, p);
      if (in_core(a2, a1, q))
        sets[1u].push_back(p);
      else
        sets[3u].push_back(p);
    } else if (inf1 && !inf2) {
      // H_us = (+) T_2^{m_2} ( cap T_1^{m_1} N(T_2^*) )
      LatticeIndex q = strip(a2, p);
      if (in_core(a1, a2, q))
        sets[2u].push_back(p);
      else
        sets[3u].push_back(p);
    } else {
      // H_ss = (+) T_1^{m_1} T_2^{m_2} ( N(T_1^*) cap N(T_2^*) )
      LatticeIndex q = strip(a2, strip(a1, p));
      if (in_kernel(a1, q) && in_kernel(a2, q)) sets[3u].push_back(p);
      // A residue outside both kernels would contradict the decomposition;
      // leave the index unassigned so the cross-check fails loudly.
    }
  }
  return sets;
}

}  // namespace woldkit
