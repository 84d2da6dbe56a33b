#pragma once

#include <random>

#include "woldkit/subspace.hpp"

namespace testutil {

using woldkit::Complex;
using woldkit::Matrix;

inline Matrix random_matrix(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = Complex{g(rng), g(rng)};
  return m;
}

/// Independent rank oracle: column-pivoted QR, not the SVD used in the library.
inline int qr_rank(const Matrix& m, double rtol = 1e-10) {
  Eigen::ColPivHouseholderQR<Matrix> qr(m);
  qr.setThreshold(rtol);
  return static_cast<int>(qr.rank());
}

inline woldkit::SubspaceBasis span_of(const Matrix& cols) {
  return woldkit::orthonormalize(cols);
}

inline Matrix unit_vectors(int dim, std::initializer_list<int> which) {
  Matrix m = Matrix::Zero(dim, static_cast<int>(which.size()));
  int c = 0;
  for (int w : which) m(w, c++) = 1.0;
  return m;
}

}  // namespace testutil
