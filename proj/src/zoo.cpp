#include "woldkit/zoo.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace woldkit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool unimodular(Complex v) { return std::abs(std::abs(v) - 1.0) < 1e-12; }

MonomialOperator shift_op(const LatticeShape& shape, int coord, Complex scalar,
                          bool isometric) {
  MonomialOperator op = MonomialOperator::identity(shape);
  op.sigma_off[coord] = 1;
  op.weight.scalar = scalar;
  op.isometric = isometric;
  return op;
}

Matrix clock_matrix(int d, Complex omega) {
  Matrix c = Matrix::Zero(d, d);
  Complex w{1.0, 0.0};
  for (int k = 0; k < d; ++k) {
    c(k, k) = w;
    w *= omega;
  }
  return c;
}

Matrix cyclic_shift(int d) {
  Matrix s = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k) s((k + 1) % d, k) = 1.0;
  return s;
}

Complex random_phase(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  return std::polar(1.0, u(rng));
}

Complex random_strict(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mod(0.3, 0.9);
  std::uniform_real_distribution<double> arg(0.0, kTwoPi);
  return std::polar(mod(rng), arg(rng));
}

}  // namespace

HardyArModel hardy_pair_Ar(Complex r, Complex alpha, int window) {
  if (!unimodular(r)) throw Error("hardy_pair_Ar: |r| must be 1");
  if (std::abs(alpha) > 1.0 + 1e-12) throw Error("hardy_pair_Ar: |alpha| must be <= 1");

  LatticeShape shape{2, 0};
  HardyArModel m;
  m.lattice.shape = shape;
  // T_1 = A_r (x) M_z^alpha: e_(m1,m2) -> (alpha/2) r^m1 e_(m1,m2+1).
  MonomialOperator t1 = shift_op(shape, 1, alpha * 0.5, false);
  t1.weight.factors.push_back({r, {1, 0}, 0});
  // T_2 = M_z^alpha (x) I.
  MonomialOperator t2 = shift_op(shape, 0, alpha, unimodular(alpha));
  m.lattice.ops = {t1, t2};
  MonomialOperator u = MonomialOperator::identity(shape);
  u.weight.scalar = r;
  m.lattice.twists[{1, 2}] = u;
  m.lattice.validate();

  m.dense = densify(m.lattice, window);
  m.pair = densified_tuple(m.dense);

  const Matrix& d1 = m.pair.ops[0];
  const Matrix& d2 = m.pair.ops[1];
  const Eigen::Index s = d1.rows();
  Matrix t1p = Matrix::Zero(2 * s, 2 * s);
  t1p.topLeftCorner(s, s) = d1;
  t1p.bottomRightCorner(s, s) = d2;
  Matrix t2p = Matrix::Zero(2 * s, 2 * s);
  t2p.topLeftCorner(s, s) = d2;
  t2p.bottomRightCorner(s, s) = d1;
  Matrix up = Matrix::Zero(2 * s, 2 * s);
  up.topLeftCorner(s, s) = r * Matrix::Identity(s, s);
  up.bottomRightCorner(s, s) = std::conj(r) * Matrix::Identity(s, s);

  m.doubled_support = Matrix::Zero(2 * s, 2 * s);
  m.doubled_support.topLeftCorner(s, s) = m.dense.interior_projector;
  m.doubled_support.bottomRightCorner(s, s) = m.dense.interior_projector;

  TwistFamily f;
  f.n = 2;
  f.dim = static_cast<int>(2 * s);
  f.units[{1, 2}] = up;
  m.doubled = make_twisted_tuple({t1p, t2p}, std::move(f), m.pair.tol, TupleMode::Audit,
                                 &m.doubled_support);
  return m;
}

LatticeTuple hardy_pair_DU(Complex a1, Complex a2, DUMode mode, double theta) {
  if (std::abs(a1) > 1.0 + 1e-12 || std::abs(a2) > 1.0 + 1e-12)
    throw Error("hardy_pair_DU: |a_i| must be <= 1");
  LatticeTuple t;
  if (mode == DUMode::Phase) {
    LatticeShape shape{2, 0};
    t.shape = shape;
    MonomialOperator t1 = shift_op(shape, 0, a1, unimodular(a1));
    MonomialOperator t2 = shift_op(shape, 1, a2, unimodular(a2));
    Complex phase = std::polar(1.0, theta);
    if (theta != 0.0) t2.weight.factors.push_back({phase, {1, 0}, 0});
    MonomialOperator u = MonomialOperator::identity(shape);
    u.weight.scalar = std::conj(phase);
    t.ops = {t1, t2};
    t.twists[{1, 2}] = u;
  } else {
    // Extra Z dimension carrying the bilateral shift W; D[W] advances it by m_1.
    LatticeShape shape{2, 1};
    t.shape = shape;
    MonomialOperator t1 = shift_op(shape, 0, a1, unimodular(a1));
    MonomialOperator t2 = shift_op(shape, 1, a2, unimodular(a2));
    t2.sigma_mat[2][0] = 1;
    MonomialOperator u = MonomialOperator::identity(shape);
    u.sigma_off[2] = -1;  // I (x) W^*
    t.ops = {t1, t2};
    t.twists[{1, 2}] = u;
  }
  t.validate();
  return t;
}

LatticeTuple counterexample_Br(Complex r) {
  if (!unimodular(r)) throw Error("counterexample_Br: |r| must be 1");
  LatticeShape shape{2, 0};
  LatticeTuple t;
  t.shape = shape;
  // T_1 = B_r (x) M_z: e_(m1,m2) -> r^{m1+1} e_(m1+1,m2+1).
  MonomialOperator t1 = MonomialOperator::identity(shape);
  t1.sigma_off = {1, 1};
  t1.weight.factors.push_back({r, {1, 0}, 1});
  t1.isometric = true;
  MonomialOperator t2 = shift_op(shape, 0, {1.0, 0.0}, true);
  MonomialOperator u = MonomialOperator::identity(shape);
  u.weight.scalar = r;
  t.ops = {t1, t2};
  t.twists[{1, 2}] = u;
  t.validate();
  return t;
}

TwistedTuple clock_shift_tuple(int d, Complex s1, Complex s2, const ToleranceProfile& tol) {
  if (d < 2) throw Error("clock_shift_tuple: d must be >= 2");
  Complex omega = std::polar(1.0, kTwoPi / d);
  std::vector<Matrix> ops{s1 * clock_matrix(d, omega), s2 * cyclic_shift(d)};
  return make_twisted_tuple(std::move(ops), TwistFamily::scalar_family(2, d, omega), tol,
                            TupleMode::Strict);
}

TwistedTuple clock_shift_mixed(int d, Complex s1, Complex s2, const ToleranceProfile& tol) {
  if (d < 2) throw Error("clock_shift_mixed: d must be >= 2");
  if (std::abs(s1) >= 1.0 || std::abs(s2) >= 1.0)
    throw Error("clock_shift_mixed: scales must be strict contractions");
  Complex omega = std::polar(1.0, kTwoPi / d);
  Matrix c = clock_matrix(d, omega);
  Matrix s = cyclic_shift(d);
  Matrix t1 = Matrix::Zero(2 * d, 2 * d);
  t1.topLeftCorner(d, d) = c;
  t1.bottomRightCorner(d, d) = s1 * c;
  Matrix t2 = Matrix::Zero(2 * d, 2 * d);
  t2.topLeftCorner(d, d) = s;
  t2.bottomRightCorner(d, d) = s2 * s;
  return make_twisted_tuple({t1, t2}, TwistFamily::scalar_family(2, 2 * d, omega), tol,
                            TupleMode::Strict);
}

int PlantedSpec::total_dim() const {
  int d = 0;
  for (const auto& b : blocks) d += b.dim;
  return d;
}

void PlantedSpec::validate() const {
  if (n < 1 || n > 20) throw Error("PlantedSpec: n out of range");
  if (blocks.empty()) throw Error("PlantedSpec: no blocks");
  for (const auto& b : blocks) {
    if (b.dim < 1) throw Error("PlantedSpec: block dim must be >= 1");
    if (b.mask >= (1u << n)) throw Error("PlantedSpec: block mask out of range");
    int twisted = 0;
    for (const auto& [key, w] : b.twists) {
      auto [i, j] = key;
      if (i < 1 || j > n || i >= j) throw Error("PlantedSpec: bad twist pair");
      if (w == Complex{1.0, 0.0}) continue;
      ++twisted;
      if (!unimodular(w)) throw Error("PlantedSpec: twist scalar must be unimodular");
      Complex p{1.0, 0.0};
      for (int k = 0; k < b.dim; ++k) p *= w;
      if (std::abs(p - Complex{1.0, 0.0}) > 1e-9)
        throw Error("PlantedSpec: twist scalar must be a dim-th root of unity");
      if (b.dim < 2) throw Error("PlantedSpec: twisted block needs dim >= 2");
    }
    if (twisted > 1) throw Error("PlantedSpec: at most one twisted pair per block");
  }
}

Planted planted_tuple(const PlantedSpec& spec, const ToleranceProfile& tol) {
  spec.validate();
  const int n = spec.n;
  const int dim = spec.total_dim();
  std::mt19937_64 rng(spec.seed);

  std::vector<Matrix> ops(n, Matrix::Zero(dim, dim));
  std::map<std::pair<int, int>, Matrix> units;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) units[{i, j}] = Matrix::Zero(dim, dim);

  int off = 0;
  for (const auto& b : spec.blocks) {
    int tp = 0, tq = 0;
    Complex omega{1.0, 0.0};
    for (const auto& [key, w] : b.twists)
      if (w != Complex{1.0, 0.0}) {
        tp = key.first;
        tq = key.second;
        omega = w;
      }

    for (int i = 1; i <= n; ++i) {
      bool cnu = (b.mask >> (i - 1)) & 1u;
      Matrix block;
      if (i == tp) {
        Complex s = cnu ? random_strict(rng) : random_phase(rng);
        block = s * clock_matrix(b.dim, omega);
      } else if (i == tq) {
        Complex s = cnu ? random_strict(rng) : random_phase(rng);
        block = s * cyclic_shift(b.dim);
      } else if (tp != 0) {
        // Scalar on a twisted block: the only operators commuting with both
        // the clock and the shift.
        Complex s = cnu ? random_strict(rng) : random_phase(rng);
        block = s * Matrix::Identity(b.dim, b.dim);
      } else {
        block = Matrix::Zero(b.dim, b.dim);
        for (int k = 0; k < b.dim; ++k)
          block(k, k) = cnu ? random_strict(rng) : random_phase(rng);
      }
      ops[i - 1].block(off, off, b.dim, b.dim) = block;
    }
    for (auto& [key, u] : units) {
      Complex w{1.0, 0.0};
      auto it = b.twists.find(key);
      if (it != b.twists.end()) w = it->second;
      u.block(off, off, b.dim, b.dim) = w * Matrix::Identity(b.dim, b.dim);
    }
    off += b.dim;
  }

  std::uniform_int_distribution<std::uint64_t> any;
  Matrix q = random_unitary(dim, any(rng));
  for (auto& t : ops) t = (q * t * q.adjoint()).eval();
  TwistFamily f;
  f.n = n;
  f.dim = dim;
  for (auto& [key, u] : units) f.units[key] = q * u * q.adjoint();

  Planted out;
  out.conjugator = q;
  off = 0;
  std::map<unsigned, std::vector<int>> cols;
  for (const auto& b : spec.blocks) {
    for (int k = 0; k < b.dim; ++k) cols[b.mask].push_back(off + k);
    off += b.dim;
  }
  for (const auto& [mask, idx] : cols) {
    SubspaceBasis sb;
    sb.ambient_dim = dim;
    sb.tol = tol;
    sb.columns = Matrix::Zero(dim, static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) sb.columns.col(k) = q.col(idx[k]);
    out.truth[mask] = std::move(sb);
  }
  out.tuple = make_twisted_tuple(std::move(ops), std::move(f), tol, TupleMode::Strict);
  return out;
}

PlantedContraction planted_contraction(int dim, int unitary_dim, std::uint64_t seed,
                                       const ToleranceProfile& tol) {
  if (dim < 1 || unitary_dim < 0 || unitary_dim > dim)
    throw DimensionError("planted_contraction: bad dims");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> any;
  Matrix core = Matrix::Zero(dim, dim);
  if (unitary_dim > 0)
    core.topLeftCorner(unitary_dim, unitary_dim) = random_unitary(unitary_dim, any(rng));
  int rest = dim - unitary_dim;
  if (rest > 0) {
    std::normal_distribution<double> g;
    Matrix k(rest, rest);
    for (int r = 0; r < rest; ++r)
      for (int c = 0; c < rest; ++c) k(r, c) = Complex{g(rng), g(rng)};
    double nrm = operator_norm(k);
    if (nrm > 0.0) k *= 0.9 / nrm;
    core.bottomRightCorner(rest, rest) = k;
  }
  Matrix q = random_unitary(dim, any(rng));
  PlantedContraction out;
  out.op = q * core * q.adjoint();
  out.unitary_space.ambient_dim = dim;
  out.unitary_space.tol = tol;
  out.unitary_space.columns = q.leftCols(unitary_dim);
  return out;
}

Matrix random_unitary(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Matrix a(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) a(r, c) = Complex{g(rng), g(rng)};
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase ambiguity so the result is deterministic.
  for (int k = 0; k < dim; ++k) {
    Complex d = r(k, k);
    q.col(k) *= (d == Complex{0.0, 0.0}) ? Complex{1.0, 0.0} : d / std::abs(d);
  }
  return q;
}

}  // namespace woldkit
