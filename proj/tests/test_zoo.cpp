#include <doctest.h>

#include <numbers>

#include "helpers.hpp"
#include "woldkit/multiwold.hpp"
#include "woldkit/zoo.hpp"

using namespace woldkit;

TEST_CASE("random_unitary: deterministic and unitary") {
  Matrix u = random_unitary(6, 42);
  CHECK(operator_norm(u.adjoint() * u - Matrix::Identity(6, 6)) <= 1e-12);
  CHECK(operator_norm(u - random_unitary(6, 42)) == 0.0);
  CHECK(operator_norm(u - random_unitary(6, 43)) > 1e-3);
}

TEST_CASE("planted_contraction: unitary part is planted exactly") {
  PlantedContraction pc = planted_contraction(8, 3, 5);
  CHECK(operator_norm(pc.op) <= 1.0 + 1e-10);
  CHECK(pc.unitary_space.dim() == 3);
  // The planted space reduces and T acts unitarily on it.
  Matrix b = pc.unitary_space.columns;
  CHECK(operator_norm(Matrix(b.adjoint() * pc.op.adjoint() * pc.op * b) -
                      Matrix::Identity(3, 3)) <= 1e-10);
  CHECK_THROWS_AS(planted_contraction(3, 4, 1), DimensionError);
}

TEST_CASE("clock_shift_tuple: genuinely twisted pair verifies strictly") {
  for (int d : {2, 3, 5}) {
    TwistedTuple t = clock_shift_tuple(d, 0.5, 0.7);
    CHECK(t.report.pass);
    CHECK(t.report.max_residual <= 1e-12);
    // Direct relation oracle with the scalar twist omega.
    Complex omega = t.twist.unit(1, 2)(0, 0);
    CHECK(std::abs(std::pow(omega, d) - Complex{1.0, 0.0}) <= 1e-10);
    CHECK(operator_norm(t.ops[0] * t.ops[1] - omega * t.ops[1] * t.ops[0]) <= 1e-12);
  }
  CHECK_THROWS_AS(clock_shift_tuple(1, 0.5, 0.5), Error);
}

TEST_CASE("clock_shift_mixed: one unitary and one jointly pure block") {
  TwistedTuple t = clock_shift_mixed(3, 0.5, 0.7);
  CHECK(t.report.pass);
  DecompositionResult r = decompose(t);
  CHECK(r.slices[0].space.dim() == 3);   // {}
  CHECK(r.slices[3].space.dim() == 3);   // {1,2}
  CHECK(r.slices[1].space.dim() == 0);
  CHECK(r.slices[2].space.dim() == 0);
  CHECK_THROWS_AS(clock_shift_mixed(3, 1.0, 0.5), Error);
}

TEST_CASE("hardy_pair_Ar: components are consistent") {
  HardyArModel m = hardy_pair_Ar(std::polar(1.0, 0.9), 0.5, 6);
  CHECK(verify_lattice_relations(m.lattice, 8).max_residual == 0.0);
  CHECK(m.pair.report.pass);
  CHECK(m.doubled.report.pass);
  CHECK(m.doubled.dim() == 2 * m.pair.dim());
  // Doubled twist is diag(r I, conj(r) I).
  const Matrix& u = m.doubled.twist.unit(1, 2);
  int half = m.pair.dim();
  CHECK(std::abs(u(0, 0) - std::polar(1.0, 0.9)) <= 1e-12);
  CHECK(std::abs(u(half, half) - std::polar(1.0, -0.9)) <= 1e-12);
  CHECK_THROWS_AS(hardy_pair_Ar(Complex{2.0, 0.0}, 0.5, 4), Error);
}

TEST_CASE("hardy_pair_DU: exact lattice relations in both modes") {
  CHECK(verify_lattice_relations(hardy_pair_DU(1.0, 1.0, DUMode::Phase, 0.4), 6).pass);
  CHECK(verify_lattice_relations(hardy_pair_DU(1.0, 1.0, DUMode::Bilateral), 4).pass);
  // Phase-mode twist is the scalar e^{-i theta}.
  LatticeTuple du = hardy_pair_DU(1.0, 1.0, DUMode::Phase, 0.4);
  auto tw = du.twist(1, 2);
  CHECK(std::abs(tw.weight.eval({0, 0}) - std::polar(1.0, -0.4)) <= 1e-12);
  CHECK_THROWS_AS(hardy_pair_DU(Complex{1.5, 0.0}, 1.0, DUMode::Phase), Error);
}

TEST_CASE("counterexample_Br: adjoint failure is confined to the m1=0 fiber") {
  LatticeTuple br = counterexample_Br(std::polar(1.0, 0.3));
  LatticeRelationReport rep = verify_lattice_relations(br, 5);
  CHECK(!rep.pass);
  CHECK(rep.first_failure->index[0] == 0);
  CHECK_THROWS_AS(counterexample_Br(Complex{0.5, 0.0}), Error);
}

TEST_CASE("planted_tuple: truth slices are orthogonal and exact") {
  PlantedSpec spec;
  spec.n = 2;
  spec.seed = 3;
  spec.blocks = {{0u, 2, {}}, {3u, 3, {{{1, 2}, std::polar(1.0, 2.0 * std::numbers::pi / 3)}}}};
  Planted p = planted_tuple(spec);
  CHECK(p.tuple.report.pass);
  CHECK(p.tuple.dim() == 5);
  REQUIRE(p.truth.size() == 2);
  const Matrix& a = p.truth.at(0u).columns;
  const Matrix& b = p.truth.at(3u).columns;
  CHECK(Matrix(a.adjoint() * b).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(operator_norm(p.conjugator.adjoint() * p.conjugator - Matrix::Identity(5, 5)) <=
        1e-12);
}

TEST_CASE("planted_tuple: spec validation rejects bad input") {
  PlantedSpec bad;
  bad.n = 2;
  bad.blocks = {{0u, 2, {{{1, 2}, std::polar(1.0, 0.5)}}}};  // not a 2nd root of unity
  CHECK_THROWS_AS(planted_tuple(bad), Error);

  PlantedSpec high;
  high.n = 2;
  high.blocks = {{4u, 2, {}}};  // mask out of range
  CHECK_THROWS_AS(planted_tuple(high), Error);

  PlantedSpec empty;
  empty.n = 2;
  CHECK_THROWS_AS(planted_tuple(empty), Error);
}

TEST_CASE("planted_tuple: seeded reproducibility") {
  PlantedSpec spec;
  spec.n = 2;
  spec.seed = 11;
  spec.blocks = {{1u, 2, {}}, {2u, 2, {}}};
  Planted a = planted_tuple(spec);
  Planted b = planted_tuple(spec);
  for (int i = 0; i < 2; ++i) CHECK(operator_norm(a.tuple.ops[i] - b.tuple.ops[i]) == 0.0);
  spec.seed = 12;
  Planted c = planted_tuple(spec);
  CHECK(operator_norm(a.tuple.ops[0] - c.tuple.ops[0]) > 1e-3);
}
