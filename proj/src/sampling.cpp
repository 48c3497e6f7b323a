#include "alpha_procrustes/sampling.hpp"

#include <cmath>

namespace alpha_procrustes::sampling {

namespace {

Matrix gaussian_matrix(Rng& rng, Index rows, Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  }
  return m;
}

}  // namespace

Matrix random_orthogonal(Rng& rng, Index n) {
  const Eigen::HouseholderQR<Matrix> qr(gaussian_matrix(rng, n, n));
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix r = qr.matrixQR();
  for (Index j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

SpdMatrix random_spd(Rng& rng, Index n, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  Vector values(n);
  for (Index i = 0; i < n; ++i) values(i) = std::exp(u(rng));
  const Matrix q = random_orthogonal(rng, n);
  return SpdMatrix::strict(Matrix(q * values.asDiagonal() * q.transpose()));
}

SpdMatrix random_psd(Rng& rng, Index n, Index rank) {
  std::uniform_real_distribution<double> u(0.5, 5.0);
  Vector values = Vector::Zero(n);
  for (Index i = 0; i < rank; ++i) values(i) = u(rng);
  return SpdMatrix::from_spectrum(values, random_orthogonal(rng, n));
}

SymMatrix random_symmetric(Rng& rng, Index n) {
  const Matrix g = gaussian_matrix(rng, n, n);
  Matrix s = g.triangularView<Eigen::Upper>();
  s.triangularView<Eigen::StrictlyLower>() = s.transpose().triangularView<Eigen::StrictlyLower>();
  return SymMatrix(s);
}

std::pair<SpdMatrix, SpdMatrix> random_commuting_pair(Rng& rng, Index n) {
  std::uniform_real_distribution<double> u(std::log(0.1), std::log(10.0));
  Vector va(n);
  Vector vb(n);
  for (Index i = 0; i < n; ++i) va(i) = std::exp(u(rng));
  for (Index i = 0; i < n; ++i) vb(i) = std::exp(u(rng));
  const Matrix q = random_orthogonal(rng, n);
  return {SpdMatrix::from_spectrum(va, q), SpdMatrix::from_spectrum(vb, q)};
}

Matrix random_points(Rng& rng, Index m, Index d, double shift, double scale) {
  return (gaussian_matrix(rng, m, d) * scale).array() + shift;
}

Vector random_vector(Rng& rng, Index n) { return gaussian_matrix(rng, n, 1).col(0); }

}  // namespace alpha_procrustes::sampling
