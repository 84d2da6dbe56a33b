#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "woldkit/lattice.hpp"

namespace woldkit {

/// Hardy-space weighted pair T_1 = A_r (x) M_z^alpha, T_2 = M_z^alpha (x) I,
/// with scalar twist r, plus the doubled variant with matrix twist
/// diag(r I, conj(r) I).
struct HardyArModel {
  LatticeTuple lattice;
  Densified dense;
  TwistedTuple pair;     // densified, audit mode, interior-masked
  TwistedTuple doubled;  // diag(T_1, T_2), diag(T_2, T_1)
  Matrix doubled_support;
};

HardyArModel hardy_pair_Ar(Complex r, Complex alpha, int window);

enum class DUMode { Phase, Bilateral };

/// T_1 = M_{z_1}^{a_1}, T_2 = M_{z_2}^{a_2} D[U] with U a phase e^{i theta}
/// or the bilateral shift (adds one Z dimension); twist I (x) U^*.
LatticeTuple hardy_pair_DU(Complex a1, Complex a2, DUMode mode, double theta = 0.0);

/// The negative control T_1 = B_r (x) M_z, T_2 = M_z (x) I with
/// B_r z^n = r^{n+1} z^{n+1}: forward relation holds exactly, the adjoint
/// relation fails on the m_1 = 0 fiber.
LatticeTuple counterexample_Br(Complex r);

/// Finite-dimensional genuinely twisted pair: T_1 = s_1 C_d, T_2 = s_2 S_d,
/// clock and cyclic shift, twist omega I with omega a primitive d-th root of
/// unity.
TwistedTuple clock_shift_tuple(int d, Complex s1, Complex s2,
                               const ToleranceProfile& tol = {});

/// diag(unitary clock pair, strictly contractive clock pair): two nonzero
/// slices with planted dimensions d each.
TwistedTuple clock_shift_mixed(int d, Complex s1, Complex s2,
                               const ToleranceProfile& tol = {});

struct PlantedBlock {
  unsigned mask = 0;  // slice label: coordinate i acts c.n.u. iff bit i-1 set
  int dim = 0;
  // At most one pair may carry a non-identity scalar; it is realized by a
  // clock/shift pair, so the scalar must be a dim-th root of unity.
  std::map<std::pair<int, int>, Complex> twists;
};

struct PlantedSpec {
  int n = 0;
  std::vector<PlantedBlock> blocks;
  std::uint64_t seed = 0;

  int total_dim() const;
  void validate() const;
};

struct Planted {
  TwistedTuple tuple;
  std::map<unsigned, SubspaceBasis> truth;  // only masks with nonzero planted dim
  Matrix conjugator;
};

/// Block construction conjugated by a seeded random unitary; ground truth
/// slices are the images of the block coordinate spans.
Planted planted_tuple(const PlantedSpec& spec, const ToleranceProfile& tol = {});

struct PlantedContraction {
  Matrix op;
  SubspaceBasis unitary_space;  // planted H_u
};

/// Single contraction with unitary part of dimension `unitary_dim` planted at
/// a seeded random position.
PlantedContraction planted_contraction(int dim, int unitary_dim, std::uint64_t seed,
                                       const ToleranceProfile& tol = {});

Matrix random_unitary(int dim, std::uint64_t seed);

}  // namespace woldkit
