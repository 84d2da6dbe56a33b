#include "woldkit/multiwold.hpp"

#include <algorithm>
#include <future>
#include <sstream>

namespace woldkit {

std::vector<int> SliceLabel::members() const {
  std::vector<int> out;
  for (int i = 1; i <= n; ++i)
    if (contains(i)) out.push_back(i);
  return out;
}

std::string SliceLabel::to_string() const {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (int i : members()) {
    if (!first) os << ",";
    os << i;
    first = false;
  }
  os << "}";
  return os.str();
}

SliceLabel SliceLabel::from_members(int n, const std::vector<int>& members) {
  SliceLabel l;
  l.n = n;
  for (int i : members) {
    if (i < 1 || i > n) throw DimensionError("SliceLabel: member out of range");
    l.mask |= 1u << (i - 1);
  }
  return l;
}

namespace {

struct Frontier {
  unsigned mask;
  SubspaceBasis space;
};

/// Split one frontier slice by the canonical decomposition of T_k restricted
/// to it; returns (unchanged-label, label+{k}) halves.
std::pair<Frontier, Frontier> split_slice(const TwistedTuple& t, int k, const Frontier& f) {
  const ToleranceProfile& tol = t.tol;
  Frontier keep{f.mask, zero_space(t.dim(), tol)};
  Frontier add{f.mask | (1u << (k - 1)), zero_space(t.dim(), tol)};
  if (f.space.dim() == 0) return {keep, add};

  // Every coordinate must nearly reduce the current slice before we recurse.
  for (int j = 1; j <= t.n(); ++j) {
    double off = restrict_to_reducing(t.ops[j - 1], f.space).off_residual;
    if (off > 100.0 * tol.residual_tol) {
      SliceLabel lbl{t.n(), f.mask};
      std::ostringstream os;
      os << "decompose: slice " << lbl.to_string() << " fails to reduce T_" << j
         << " (off-residual " << off << ")";
      throw Error(os.str());
    }
  }

  auto restricted = restrict_to_reducing(t.ops[k - 1], f.space);
  CanonicalSplit split = canonical_decompose(restricted.block, tol);
  keep.space = orthonormalize(f.space.columns * split.unitary_space.columns, tol);
  add.space = orthonormalize(f.space.columns * split.cnu_space.columns, tol);
  return {keep, add};
}

}  // namespace

DecompositionResult decompose(const TwistedTuple& t, bool parallel) {
  const int n = t.n();
  const int d = t.dim();
  const ToleranceProfile& tol = t.tol;
  if (n > 20) throw Error("decompose: tuple too long");

  std::vector<Frontier> frontier{{0u, full_space(d, tol)}};
  for (int k = 1; k <= n; ++k) {
    std::vector<std::pair<Frontier, Frontier>> splits(frontier.size());
    if (parallel && frontier.size() > 1) {
      std::vector<std::future<std::pair<Frontier, Frontier>>> futs;
      futs.reserve(frontier.size());
      for (const auto& f : frontier)
        futs.push_back(std::async(std::launch::async,
                                  [&t, k, &f] { return split_slice(t, k, f); }));
      for (std::size_t i = 0; i < futs.size(); ++i) splits[i] = futs[i].get();
    } else {
      for (std::size_t i = 0; i < frontier.size(); ++i)
        splits[i] = split_slice(t, k, frontier[i]);
    }
    std::vector<Frontier> next;
    next.reserve(frontier.size() * 2);
    for (auto& s : splits) {
      next.push_back(std::move(s.first));
      next.push_back(std::move(s.second));
    }
    frontier = std::move(next);
  }

  std::sort(frontier.begin(), frontier.end(),
            [](const Frontier& a, const Frontier& b) { return a.mask < b.mask; });

  DecompositionResult res;
  res.n = n;
  res.ambient_dim = d;
  Matrix psum = Matrix::Zero(d, d);
  for (auto& f : frontier) {
    DecompositionSlice slice;
    slice.label = SliceLabel{n, f.mask};
    slice.space = f.space;
    for (int i = 1; i <= n; ++i) {
      auto r = restrict_to_reducing(t.ops[i - 1], f.space);
      slice.blocks.push_back(r.block);
      slice.max_off_residual = std::max(slice.max_off_residual, r.off_residual);

      SliceCoordinateClass cls;
      cls.coord = i;
      cls.expect_unitary = !slice.label.contains(i);
      if (slice.space.dim() > 0) {
        if (cls.expect_unitary) {
          Matrix idk = Matrix::Identity(r.block.rows(), r.block.cols());
          cls.unitary_residual =
              std::max(operator_norm(r.block.adjoint() * r.block - idk),
                       operator_norm(r.block * r.block.adjoint() - idk));
        } else {
          cls.residual_unitary_dim = unitary_part(r.block, tol).dim();
        }
      }
      slice.classification.push_back(cls);
    }
    psum += projector(f.space);
    res.max_off_residual = std::max(res.max_off_residual, slice.max_off_residual);
    res.slices.push_back(std::move(slice));
  }

  res.completeness_residual = operator_norm(psum - Matrix::Identity(d, d));
  for (std::size_t a = 0; a < res.slices.size(); ++a)
    for (std::size_t b = a + 1; b < res.slices.size(); ++b) {
      const auto& sa = res.slices[a].space;
      const auto& sb = res.slices[b].space;
      if (sa.dim() == 0 || sb.dim() == 0) continue;
      double inner = (sa.columns.adjoint() * sb.columns).cwiseAbs().maxCoeff();
      res.max_cross_inner = std::max(res.max_cross_inner, inner);
    }
  return res;
}

std::array<SubspaceBasis, 4> pair_formula_subspaces(const TwistedTuple& t, int m_cap) {
  if (t.n() != 2) throw DimensionError("pair_formula_subspaces: requires n = 2");
  const int d = t.dim();
  const ToleranceProfile& tol = t.tol;
  if (m_cap < 0) m_cap = 2 * d;
  const Matrix& t1 = t.ops[0];
  const Matrix& t2 = t.ops[1];
  Matrix id = Matrix::Identity(d, d);

  // Chain of kernel intersections for T_1 and the span formula for its
  // complement, straight from the explicit pair formulas.
  SubspaceBasis hu1 = chain_unitary_part(t1, tol, m_cap);
  std::vector<SubspaceBasis> spans;
  {
    Matrix tm = id, sm = id;
    for (int m = 1; m <= m_cap; ++m) {
      tm = tm * t1;
      sm = sm * t1.adjoint();
      spans.push_back(range_of(id - sm * tm, tol));
      spans.push_back(range_of(id - tm * sm, tol));
    }
  }
  SubspaceBasis hnu1 = span_union(spans);

  SubspaceBasis chain2 = chain_unitary_part(t2, tol, m_cap);
  SubspaceBasis h_uu = intersect(hu1, chain2);
  SubspaceBasis h_nuu = intersect(hnu1, chain2);

  auto cnu_within = [&](const SubspaceBasis& base) {
    std::vector<SubspaceBasis> parts;
    if (base.dim() == 0) return zero_space(d, tol);
    Matrix tm = id, sm = id;
    for (int m = 1; m <= m_cap; ++m) {
      tm = tm * t2;
      sm = sm * t2.adjoint();
      parts.push_back(orthonormalize((id - sm * tm) * base.columns, tol));
      parts.push_back(orthonormalize((id - tm * sm) * base.columns, tol));
    }
    return span_union(parts);
  };
  SubspaceBasis h_unu = cnu_within(hu1);
  SubspaceBasis h_nunu = cnu_within(hnu1);

  // Label order {}, {1}, {2}, {1,2}.
  return {h_uu, h_nuu, h_unu, h_nunu};
}

RestrictionClassReport classify_restrictions(const TwistedTuple& t,
                                             const DecompositionResult& r,
                                             const ToleranceProfile& tol) {
  RestrictionClassReport rep;
  for (const auto& slice : r.slices) {
    if (slice.space.dim() == 0) continue;
    for (int i = 1; i <= t.n(); ++i) {
      const Matrix& block = slice.blocks[i - 1];
      if (!slice.label.contains(i)) {
        Matrix idk = Matrix::Identity(block.rows(), block.cols());
        double res = std::max(operator_norm(block.adjoint() * block - idk),
                              operator_norm(block * block.adjoint() - idk));
        rep.max_unitary_residual = std::max(rep.max_unitary_residual, res);
        if (res > tol.residual_tol) rep.pass = false;
      } else {
        int udim = unitary_part(block, tol).dim();
        rep.max_residual_unitary_dim = std::max(rep.max_residual_unitary_dim, udim);
        if (udim != 0) rep.pass = false;
      }
    }
  }
  return rep;
}

TwistedTuple permute_tuple(const TwistedTuple& t, const std::vector<int>& perm, TupleMode mode) {
  const int n = t.n();
  if (static_cast<int>(perm.size()) != n)
    throw DimensionError("permute_tuple: permutation length mismatch");
  std::vector<Matrix> ops;
  for (int i = 0; i < n; ++i) ops.push_back(t.ops[perm[i] - 1]);
  TwistFamily f;
  f.n = n;
  f.dim = t.dim();
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) f.units[{i, j}] = t.twist.unit(perm[i - 1], perm[j - 1]);
  return make_twisted_tuple(std::move(ops), std::move(f), t.tol, mode);
}

PermutationCheck permuted_decompose_check(const TwistedTuple& t, const std::vector<int>& perm) {
  PermutationCheck out;
  TwistedTuple pt = permute_tuple(t, perm, TupleMode::Strict);
  out.permuted_verifies = pt.report.pass;

  DecompositionResult base = decompose(t);
  DecompositionResult permuted = decompose(pt);
  // Slice with label A in the permuted run holds {perm(i) : i in A} of the base run.
  for (const auto& pslice : permuted.slices) {
    std::vector<int> mapped;
    for (int i : pslice.label.members()) mapped.push_back(perm[i - 1]);
    SliceLabel orig = SliceLabel::from_members(t.n(), mapped);
    const auto& bslice = base.slices[orig.mask];
    double angle = max_principal_angle(pslice.space, bslice.space);
    out.max_angle = std::max(out.max_angle, angle);
  }
  return out;
}

}  // namespace woldkit
