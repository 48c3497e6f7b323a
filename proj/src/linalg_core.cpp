#include "alpha_procrustes/linalg_core.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

namespace alpha_procrustes {

namespace {

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw Error(ErrorCode::NonFinite, std::string(what) + " has non-finite entries");
}

// Stable first divided difference (f(x) - f(y)) / (x - y) for x != y.
double divided_difference(const ScalarFunction& f, double x, double y) {
  const double d = x - y;
  switch (f.kind) {
    case ScalarFunction::Kind::Exp:
      return std::exp(y) * std::expm1(d) / d;
    case ScalarFunction::Kind::Log:
      return std::log1p(d / y) / d;
    case ScalarFunction::Kind::Power:
      if (y > 0.0 && x > 0.0) return std::pow(y, f.exponent) * std::expm1(f.exponent * std::log1p(d / y)) / d;
      return (f.value(x) - f.value(y)) / d;
  }
  return 0.0;
}

}  // namespace

SymMatrix::SymMatrix(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::DimensionError,
                "matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ", expected square");
  }
  require_finite(m, "matrix");
  m_ = 0.5 * (m + m.transpose());
}

AlphaParam::AlphaParam(double value) : value_(value) {
  if (!std::isfinite(value)) throw Error(ErrorCode::NonFinite, "alpha is not finite");
  mode_ = std::abs(value) < tol::alpha_switch ? Mode::LogLimit : Mode::General;
}

double ScalarFunction::value(double x) const {
  switch (kind) {
    case Kind::Exp: return std::exp(x);
    case Kind::Log: return std::log(x);
    case Kind::Power: return std::pow(x, exponent);
  }
  return 0.0;
}

double ScalarFunction::derivative(double x) const {
  switch (kind) {
    case Kind::Exp: return std::exp(x);
    case Kind::Log: return 1.0 / x;
    case Kind::Power: return exponent == 0.0 ? 0.0 : exponent * std::pow(x, exponent - 1.0);
  }
  return 0.0;
}

EigenDecomposition sym_eigendecompose(const SymMatrix& s) {
  require_finite(s.matrix(), "symmetric matrix");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(s.matrix());
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::ConvergenceFailure, "symmetric eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

SpdMatrix SpdMatrix::psd(const SymMatrix& s) {
  EigenDecomposition eig = sym_eigendecompose(s);
  const double lmax = eig.values.size() ? eig.values(eig.values.size() - 1) : 0.0;
  const double tol = psd_tol(lmax);
  bool clamped = false;
  for (Index i = 0; i < eig.values.size(); ++i) {
    if (eig.values(i) < -tol) {
      throw Error(ErrorCode::NotPositive,
                  "eigenvalue " + std::to_string(eig.values(i)) + " is below -psd_tol");
    }
    if (eig.values(i) < tol && eig.values(i) != 0.0) {
      eig.values(i) = 0.0;
      clamped = true;
    }
  }
  if (!clamped) return SpdMatrix(s, std::move(eig));
  SymMatrix rebuilt(eig.reconstruct());
  return SpdMatrix(std::move(rebuilt), std::move(eig));
}

SpdMatrix SpdMatrix::strict(const SymMatrix& s) {
  SpdMatrix out = psd(s);
  if (!out.is_strict()) {
    throw Error(ErrorCode::SingularBase,
                "matrix is not strictly positive definite (min eigenvalue " + std::to_string(out.min_eig()) + ")");
  }
  return out;
}

SpdMatrix SpdMatrix::from_spectrum(const Vector& values, const Matrix& vectors) {
  const Index n = values.size();
  std::vector<Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return values(a) < values(b); });
  EigenDecomposition eig{Vector(n), Matrix(vectors.rows(), n)};
  for (Index k = 0; k < n; ++k) {
    const Index src = order[static_cast<size_t>(k)];
    eig.values(k) = std::max(values(src), 0.0);
    eig.vectors.col(k) = vectors.col(src);
  }
  if (!eig.values.allFinite()) throw Error(ErrorCode::NonFinite, "spectrum has non-finite values");
  SymMatrix sym(eig.reconstruct());
  return SpdMatrix(std::move(sym), std::move(eig));
}

SpdMatrix SpdMatrix::identity(Index n) {
  return from_spectrum(Vector::Ones(n), Matrix::Identity(n, n));
}

SpdMatrix spd_power(const SpdMatrix& a, double p) {
  if (p < 0.0 && !a.is_strict()) {
    throw Error(ErrorCode::SingularBase, "negative power of a singular matrix");
  }
  const EigenDecomposition& eig = a.eig();
  Vector mapped(eig.dim());
  for (Index i = 0; i < eig.dim(); ++i) mapped(i) = std::pow(eig.values(i), p);
  return SpdMatrix::from_spectrum(mapped, eig.vectors);
}

SymMatrix spd_log(const SpdMatrix& a) {
  if (!a.is_strict()) throw Error(ErrorCode::SingularBase, "logarithm of a singular matrix");
  return SymMatrix(a.eig().apply([](double x) { return std::log(x); }));
}

SpdMatrix sym_exp(const SymMatrix& s) {
  const EigenDecomposition eig = sym_eigendecompose(s);
  Vector mapped = eig.values.array().exp().matrix();
  if (!mapped.allFinite()) throw Error(ErrorCode::NonFinite, "matrix exponential overflowed");
  return SpdMatrix::from_spectrum(mapped, eig.vectors);
}

SpdMatrix psd_sqrt(const SpdMatrix& a) {
  const EigenDecomposition& eig = a.eig();
  return SpdMatrix::from_spectrum(eig.values.cwiseSqrt(), eig.vectors);
}

double trace_sqrt_triple(const SpdMatrix& a, const SpdMatrix& b, double alpha) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionError, "trace_sqrt_triple: dimension mismatch");
  const SpdMatrix a_pow = spd_power(a, alpha);
  const SpdMatrix b_pow = spd_power(b, 2.0 * alpha);
  const SymMatrix inner(a_pow.matrix() * b_pow.matrix() * a_pow.matrix());
  const EigenDecomposition eig = sym_eigendecompose(inner);
  double sum = 0.0;
  for (Index i = 0; i < eig.dim(); ++i) sum += std::sqrt(std::max(eig.values(i), 0.0));
  return sum;
}

SymMatrix loewner_apply(const EigenDecomposition& point, const ScalarFunction& f, const SymMatrix& s) {
  const Index n = point.dim();
  if (s.dim() != n) throw Error(ErrorCode::DimensionError, "loewner_apply: dimension mismatch");
  const bool needs_positive =
      f.kind == ScalarFunction::Kind::Log ||
      (f.kind == ScalarFunction::Kind::Power && (f.exponent < 1.0 || f.exponent != std::floor(f.exponent)));
  if (needs_positive) {
    const double tol = psd_tol(point.values(n - 1));
    for (Index i = 0; i < n; ++i) {
      if (point.values(i) <= tol) {
        throw Error(ErrorCode::DomainError, "function is not differentiable at a nonpositive eigenvalue");
      }
    }
  }

  const Matrix& v = point.vectors;
  Matrix rotated = v.transpose() * s.matrix() * v;
  for (Index j = 0; j < n; ++j) {
    for (Index i = j; i < n; ++i) {
      const double li = point.values(i);
      const double lj = point.values(j);
      double dd;
      if (std::abs(li - lj) < tol::divided_diff * std::max(1.0, std::abs(li))) {
        dd = f.derivative(0.5 * (li + lj));
      } else {
        dd = divided_difference(f, li, lj);
      }
      rotated(i, j) *= dd;
      if (i != j) rotated(j, i) *= dd;
    }
  }
  return SymMatrix(v * rotated * v.transpose());
}

SymMatrix range_quotient(const SpdMatrix& e, const std::function<double(double)>& numerator) {
  const EigenDecomposition& eig = e.eig();
  const double rank_tol = tol::rank_rel * std::max(e.max_eig(), 0.0);
  return SymMatrix(eig.apply([&](double lambda) {
    return lambda > rank_tol ? numerator(lambda) / lambda : 0.0;
  }));
}

SymMatrix h_alpha(const SpdMatrix& e, double alpha) {
  return range_quotient(e, [alpha](double lambda) { return std::expm1(alpha * std::log1p(lambda)); });
}

bool is_symmetric_within(const Matrix& m, double abs_tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= abs_tol;
}

}  // namespace alpha_procrustes
