#include <doctest.h>

#include <numbers>
#include <string>

#include "helpers.hpp"
#include "woldkit/canonical.hpp"
#include "woldkit/lattice.hpp"
#include "woldkit/zoo.hpp"

using namespace woldkit;
using testutil::random_matrix;

namespace {

Matrix jordan_shift(int d) {
  Matrix j = Matrix::Zero(d, d);
  for (int k = 0; k + 1 < d; ++k) j(k + 1, k) = 1.0;
  return j;
}

}  // namespace

TEST_CASE("unitary_part: trivial inputs") {
  CHECK(unitary_part(random_unitary(5, 1)).dim() == 5);
  CHECK(unitary_part(jordan_shift(4)).dim() == 0);
}

TEST_CASE("unitary_part: planted block recovered, membership oracle") {
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    PlantedContraction pc = planted_contraction(9, 4, seed);
    SubspaceBasis hu = unitary_part(pc.op);
    CHECK(hu.dim() == 4);
    CHECK(max_principal_angle(hu, pc.unitary_space) <= 1e-8);
    // Membership brute force: norm identities for all powers up to 2*dim.
    for (int c = 0; c < hu.dim(); ++c) {
      Matrix h = hu.columns.col(c);
      for (int m = 1; m <= 18; ++m) {
        CHECK(std::abs((power(pc.op, m) * h).norm() - 1.0) <= 1e-8);
        CHECK(std::abs((power(pc.op, -m) * h).norm() - 1.0) <= 1e-8);
      }
    }
  }
}

TEST_CASE("unitary_part: strict contractions have none") {
  Matrix g = random_matrix(6, 6, 71);
  Matrix t = g * (0.9 / operator_norm(g));
  CHECK(unitary_part(t).dim() == 0);
  CHECK(unitary_part(0.9 * random_unitary(6, 72)).dim() == 0);
}

TEST_CASE("canonical_decompose: invariants") {
  Matrix t = Matrix::Zero(2, 2);
  t(0, 0) = std::polar(1.0, 0.7);
  t(1, 1) = 0.5;
  CanonicalSplit s = canonical_decompose(t);
  CHECK(s.unitary_space.dim() == 1);
  CHECK(max_principal_angle(s.unitary_space, orthonormalize(testutil::unit_vectors(2, {0}))) <=
        1e-10);

  PlantedContraction pc = planted_contraction(10, 3, 99);
  CanonicalSplit split = canonical_decompose(pc.op);
  CHECK(split.unitary_space.dim() + split.cnu_space.dim() == 10);
  CHECK(max_principal_angle(split.unitary_space, pc.unitary_space) <= 1e-8);
  CHECK(split.unitary_off_residual <= 1e-8);
  CHECK(split.cnu_off_residual <= 1e-8);
  CHECK(split.unitary_isometry_residual <= 1e-8);
  CHECK(split.unitary_coisometry_residual <= 1e-8);
  // Orthogonality of the two halves.
  CHECK((split.unitary_space.columns.adjoint() * split.cnu_space.columns)
            .cwiseAbs()
            .maxCoeff() <= 1e-10);
  // Idempotence: both restricted blocks re-decompose trivially.
  CHECK(unitary_part(split.cnu_block).dim() == 0);
  CHECK(unitary_part(split.unitary_block).dim() == split.unitary_space.dim());
}

TEST_CASE("chain_unitary_part: agrees with the fixed-point method") {
  CHECK(chain_unitary_part(random_unitary(4, 3)).dim() == 4);
  CHECK(chain_unitary_part(jordan_shift(5)).dim() == 0);
  for (std::uint64_t seed : {5u, 6u}) {
    PlantedContraction pc = planted_contraction(8, 3, seed);
    SubspaceBasis fixed = unitary_part(pc.op);
    SubspaceBasis chain = chain_unitary_part(pc.op);
    CHECK(chain.dim() == fixed.dim());
    CHECK(max_principal_angle(chain, fixed) <= 1e-8);
  }
}

TEST_CASE("ppi_unitary_part: range-intersection formula") {
  CHECK(ppi_unitary_part(random_unitary(3, 8)).dim() == 3);
  CHECK(ppi_unitary_part(jordan_shift(3)).dim() == 0);

  Matrix t = Matrix::Zero(5, 5);
  t.topLeftCorner(3, 3) = jordan_shift(3);
  t(3, 3) = std::polar(1.0, 0.3);
  t(4, 4) = std::polar(1.0, 2.2);
  SubspaceBasis hu = ppi_unitary_part(t);
  CHECK(hu.dim() == 2);
  CHECK(max_principal_angle(hu, orthonormalize(testutil::unit_vectors(5, {3, 4}))) <= 1e-8);
  CHECK(max_principal_angle(hu, unitary_part(t)) <= 1e-8);
}

TEST_CASE("ppi_unitary_part: names the failing power") {
  Matrix t = 0.5 * Matrix::Identity(2, 2);  // not a partial isometry at power 1
  try {
    ppi_unitary_part(t);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("power") != std::string::npos);
  }
}

TEST_CASE("wold_split_isometry: unitary input") {
  WoldSplit w = wold_split_isometry(random_unitary(4, 14));
  CHECK(w.unitary_space.dim() == 4);
  CHECK(w.wandering.dim() == 0);
  CHECK(w.levels.empty());
}

TEST_CASE("wold_split_isometry: truncated unilateral shift") {
  // Densified shift on a width-4 window: e_k -> e_{k+1}, e_3 -> 0.
  LatticeShape shape{1, 0};
  MonomialOperator op = MonomialOperator::identity(shape);
  op.sigma_off = {1};
  op.isometric = true;
  LatticeWindow win{shape, 4};
  Matrix t = densify_op(op, win);
  WoldSplit w = wold_split_isometry(t);
  CHECK(w.unitary_space.dim() == 0);
  CHECK(w.wandering.dim() == 1);
  CHECK(max_principal_angle(w.wandering, orthonormalize(testutil::unit_vectors(4, {0}))) <=
        1e-10);
  REQUIRE(w.levels.size() == 4);
  for (int k = 0; k < 4; ++k) {
    CHECK(w.levels[k].dim() == 1);
    CHECK(max_principal_angle(w.levels[k],
                              orthonormalize(testutil::unit_vectors(4, {k}))) <= 1e-10);
  }
}

TEST_CASE("wold_split_isometry: densified M_z1 wandering space is the m1=0 slice") {
  LatticeTuple du = hardy_pair_DU(1.0, 1.0, DUMode::Phase, 2.0 * std::numbers::pi / 5);
  LatticeWindow win{du.shape, 8};
  Matrix t1 = densify_op(du.ops[0], win);
  WoldSplit w = wold_split_isometry(t1);
  CHECK(w.wandering.dim() == 8);  // the {m_1 = 0} fiber
  Matrix fiber = Matrix::Zero(64, 8);
  for (int m2 = 0; m2 < 8; ++m2) fiber(win.flat({0, m2}), m2) = 1.0;
  CHECK(max_principal_angle(w.wandering, orthonormalize(fiber)) <= 1e-10);
}

TEST_CASE("wold_split_isometry: rejects a non partial isometry") {
  CHECK_THROWS_AS(wold_split_isometry(0.5 * Matrix::Identity(2, 2)), NotAnIsometry);
}
