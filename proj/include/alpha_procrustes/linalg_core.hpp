#pragma once

// Spectral matrix functions on symmetric matrices.
//
// Every matrix function in the library (power, log, exp, square root, the
// h_alpha quotient) is evaluated through one full symmetric eigendecomposition,
// so identities such as exp(log A) == A or (A^p)^q == A^(pq) hold to the
// accuracy of a single eigensolve.

#include <Eigen/Dense>

#include <cmath>
#include <functional>

#include "alpha_procrustes/error.hpp"

namespace alpha_procrustes {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

namespace tol {
/// Relative width of the band around zero in which eigenvalues count as zero.
inline constexpr double psd_rel = 1e-12;
/// Eigenvalue pairs closer than this (relative) use f'(lambda) in divided differences.
inline constexpr double divided_diff = 1e-8;
/// Relative threshold below which an eigenvalue is treated as outside range(E) in h_alpha.
inline constexpr double rank_rel = 1e-10;
/// |alpha| below this routes every family formula to its alpha = 0 limit.
inline constexpr double alpha_switch = 1e-7;
}  // namespace tol

/// psd_tol = 1e-12 * max(1, |lambda_max|).
inline double psd_tol(double lambda_max) {
  return tol::psd_rel * std::max(1.0, std::abs(lambda_max));
}

/// A real symmetric matrix. The stored entries are exactly symmetric.
class SymMatrix {
 public:
  SymMatrix() = default;

  /// Symmetrizes (M + M^T) / 2. Throws DimensionError for non-square input and
  /// NonFinite for NaN/inf entries.
  explicit SymMatrix(const Matrix& m);

  static SymMatrix zero(Index n) { return SymMatrix(Matrix::Zero(n, n)); }
  static SymMatrix identity(Index n) { return SymMatrix(Matrix::Identity(n, n)); }

  Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  double operator()(Index i, Index j) const { return m_(i, j); }

  double frobenius_norm() const { return m_.norm(); }
  double trace() const { return m_.trace(); }

  friend SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) { return SymMatrix(a.m_ + b.m_); }
  friend SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) { return SymMatrix(a.m_ - b.m_); }
  friend SymMatrix operator*(double s, const SymMatrix& a) { return SymMatrix(s * a.m_); }

 private:
  Matrix m_;
};

/// Eigenvalues in ascending order with orthonormal eigenvectors as columns.
struct EigenDecomposition {
  Vector values;
  Matrix vectors;

  Index dim() const { return values.size(); }

  /// V * diag(f(lambda)) * V^T.
  template <class F>
  Matrix apply(F&& f) const {
    Vector mapped(values.size());
    for (Index i = 0; i < values.size(); ++i) mapped(i) = f(values(i));
    return vectors * mapped.asDiagonal() * vectors.transpose();
  }

  Matrix reconstruct() const {
    return vectors * values.asDiagonal() * vectors.transpose();
  }
};

/// A symmetric positive semi-definite matrix together with its cached spectrum.
///
/// Eigenvalues within psd_tol of zero are clamped to exactly 0 when the matrix
/// is built with psd(); strict() additionally rejects anything <= psd_tol.
class SpdMatrix {
 public:
  SpdMatrix() = default;

  /// Requires every eigenvalue > psd_tol. Throws SingularBase otherwise
  /// (NotPositive if an eigenvalue is below -psd_tol).
  static SpdMatrix strict(const SymMatrix& s);
  static SpdMatrix strict(const Matrix& m) { return strict(SymMatrix(m)); }

  /// Accepts eigenvalues >= -psd_tol and clamps the small negatives to 0.
  static SpdMatrix psd(const SymMatrix& s);
  static SpdMatrix psd(const Matrix& m) { return psd(SymMatrix(m)); }

  /// Builds from a spectrum assumed nonnegative; reorders to ascending.
  static SpdMatrix from_spectrum(const Vector& values, const Matrix& vectors);

  static SpdMatrix identity(Index n);

  Index dim() const { return sym_.dim(); }
  const SymMatrix& sym() const { return sym_; }
  const Matrix& matrix() const { return sym_.matrix(); }
  const EigenDecomposition& eig() const { return eig_; }
  double min_eig() const { return eig_.values(0); }
  double max_eig() const { return eig_.values(eig_.values.size() - 1); }
  double trace() const { return eig_.values.sum(); }

  /// True when min_eig > psd_tol.
  bool is_strict() const { return min_eig() > psd_tol(max_eig()); }

 private:
  SpdMatrix(SymMatrix sym, EigenDecomposition eig) : sym_(std::move(sym)), eig_(std::move(eig)) {}

  SymMatrix sym_;
  EigenDecomposition eig_;
};

/// The family parameter alpha. |alpha| < tol::alpha_switch selects the
/// analytic alpha = 0 (Log-Euclidean) limit.
class AlphaParam {
 public:
  enum class Mode { General, LogLimit };

  explicit AlphaParam(double value);
  static AlphaParam log_limit() { return AlphaParam(0.0); }

  double value() const { return value_; }
  Mode mode() const { return mode_; }
  bool is_log_limit() const { return mode_ == Mode::LogLimit; }

 private:
  double value_;
  Mode mode_;
};

/// Scalar functions with a known derivative, used by loewner_apply.
struct ScalarFunction {
  enum class Kind { Exp, Log, Power };
  Kind kind = Kind::Exp;
  double exponent = 1.0;

  static ScalarFunction exp() { return {Kind::Exp, 1.0}; }
  static ScalarFunction log() { return {Kind::Log, 1.0}; }
  static ScalarFunction power(double p) { return {Kind::Power, p}; }

  double value(double x) const;
  double derivative(double x) const;
};

/// Throws NonFinite / ConvergenceFailure.
EigenDecomposition sym_eigendecompose(const SymMatrix& s);

/// A^p. Throws SingularBase when p < 0 and A is not strictly positive.
SpdMatrix spd_power(const SpdMatrix& a, double p);

/// Principal logarithm. Throws SingularBase unless A is strictly positive.
SymMatrix spd_log(const SpdMatrix& a);

SpdMatrix sym_exp(const SymMatrix& s);

SpdMatrix psd_sqrt(const SpdMatrix& a);

/// tr[(A^alpha B^{2 alpha} A^alpha)^{1/2}].
double trace_sqrt_triple(const SpdMatrix& a, const SpdMatrix& b, double alpha);

/// Frechet derivative Df(P)[S] for P = V diag(lambda) V^T, computed with first
/// divided differences (Daleckii-Krein).
SymMatrix loewner_apply(const EigenDecomposition& point, const ScalarFunction& f, const SymMatrix& s);

/// U g(lambda)/lambda U^T over the eigenvalues lambda > rank_tol of E; zero on
/// the (numerical) kernel. g must vanish at 0 for this to be the continuous
/// extension of g(E) E^{-1}.
SymMatrix range_quotient(const SpdMatrix& e, const std::function<double(double)>& numerator);

/// h_alpha(E) = U [(Sigma + I)^alpha - I] Sigma^{-1} U^T on range(E).
SymMatrix h_alpha(const SpdMatrix& e, double alpha);

/// max |m_ij - m_ji| <= abs_tol.
bool is_symmetric_within(const Matrix& m, double abs_tol);

}  // namespace alpha_procrustes
