#include "alpha_procrustes/spd_metrics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "alpha_procrustes/parallel.hpp"

namespace alpha_procrustes {

namespace {

void require_same_dim(const SpdMatrix& a, const SpdMatrix& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::DimensionError,
                "dimension mismatch: " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
}

// sqrt of a trace expression that is nonnegative analytically. Values that dip
// below zero by less than 1e-9 * scale are roundoff and clamp to 0.
double clamped_sqrt(double trace_expr, double scale) {
  if (trace_expr >= 0.0) return std::sqrt(trace_expr);
  if (-trace_expr < 1e-9 * std::max(scale, std::numeric_limits<double>::min())) return 0.0;
  throw Error(ErrorCode::NumericalInconsistency,
              "trace expression " + std::to_string(trace_expr) + " is negative beyond roundoff (scale " +
                  std::to_string(scale) + ")");
}

double trace_power(const SpdMatrix& a, double p) {
  double sum = 0.0;
  for (Index i = 0; i < a.dim(); ++i) sum += std::pow(a.eig().values(i), p);
  return sum;
}

}  // namespace

bool commute(const SpdMatrix& a, const SpdMatrix& b) {
  const Matrix& am = a.matrix();
  const Matrix& bm = b.matrix();
  const double scale = std::max(1.0, am.norm() * bm.norm());
  return (am * bm - bm * am).norm() < 1e-12 * scale;
}

SpdMatrix shift_identity(const SpdMatrix& a, double gamma) {
  Vector shifted = a.eig().values.array() + gamma;
  return SpdMatrix::from_spectrum(shifted, a.eig().vectors);
}

DistanceResult log_euclidean(const SpdMatrix& a, const SpdMatrix& b) {
  require_same_dim(a, b);
  const double value = (spd_log(a).matrix() - spd_log(b).matrix()).norm();
  return {value, AlphaParam::log_limit(), 0.0, FormulaPath::LogLimit};
}

DistanceResult alpha_procrustes(const SpdMatrix& a, const SpdMatrix& b, AlphaParam alpha) {
  require_same_dim(a, b);
  if (alpha.is_log_limit()) {
    if (!a.is_strict() || !b.is_strict()) {
      throw Error(ErrorCode::SingularBase, "the log limit needs strictly positive definite matrices");
    }
    return log_euclidean(a, b);
  }
  const double al = alpha.value();
  if (al < 0.0 && (!a.is_strict() || !b.is_strict())) {
    throw Error(ErrorCode::SingularBase, "alpha < 0 needs strictly positive definite matrices");
  }
  const double ta = trace_power(a, 2.0 * al);
  const double tb = trace_power(b, 2.0 * al);
  const double cross = trace_sqrt_triple(a, b, al);
  const double value = clamped_sqrt(ta + tb - 2.0 * cross, ta + tb) / std::abs(al);
  return {value, alpha, 0.0, commute(a, b) ? FormulaPath::Commuting : FormulaPath::General};
}

DistanceResult bures_wasserstein(const SpdMatrix& a, const SpdMatrix& b) {
  require_same_dim(a, b);
  const SpdMatrix root_a = psd_sqrt(a);
  const SpdMatrix inner = SpdMatrix::psd(SymMatrix(root_a.matrix() * b.matrix() * root_a.matrix()));
  const double cross = psd_sqrt(inner).trace();
  const double scale = a.trace() + b.trace();
  const double value = clamped_sqrt(scale - 2.0 * cross, scale);
  return {value, AlphaParam(0.5), 0.0, commute(a, b) ? FormulaPath::Commuting : FormulaPath::General};
}

DistanceResult power_euclidean(const SpdMatrix& a, const SpdMatrix& b, double alpha) {
  require_same_dim(a, b);
  if (std::abs(alpha) < tol::alpha_switch) {
    throw Error(ErrorCode::DomainError, "power_euclidean needs alpha != 0");
  }
  if (alpha < 0.0 && (!a.is_strict() || !b.is_strict())) {
    throw Error(ErrorCode::SingularBase, "alpha < 0 needs strictly positive definite matrices");
  }
  const double value =
      (spd_power(a, alpha).matrix() - spd_power(b, alpha).matrix()).norm() / std::abs(alpha);
  return {value, AlphaParam(alpha), 0.0, commute(a, b) ? FormulaPath::Commuting : FormulaPath::General};
}

DistanceResult alpha_procrustes_regularized(const SpdMatrix& a, const SpdMatrix& b, double gamma,
                                            AlphaParam alpha) {
  require_same_dim(a, b);
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::DomainError, "regularization gamma must be > 0");
  }
  DistanceResult r = alpha_procrustes(shift_identity(a, gamma), shift_identity(b, gamma), alpha);
  r.gamma = gamma;
  return r;
}

double procrustes_bruteforce_2x2(const SpdMatrix& a, const SpdMatrix& b, double alpha, int grid_size) {
  if (a.dim() != 2 || b.dim() != 2) {
    throw Error(ErrorCode::DimensionError, "procrustes_bruteforce_2x2 needs 2x2 matrices");
  }
  if (grid_size < 360) throw Error(ErrorCode::DomainError, "grid_size must be >= 360");
  if (std::abs(alpha) < tol::alpha_switch) throw Error(ErrorCode::DomainError, "alpha must be nonzero");
  if (alpha < 0.0 && (!a.is_strict() || !b.is_strict())) {
    throw Error(ErrorCode::SingularBase, "alpha < 0 needs strictly positive definite matrices");
  }
  const Matrix pa = spd_power(a, alpha).matrix();
  const Matrix pb = spd_power(b, alpha).matrix();

  // U = R(theta) for det U = +1 and R(theta) diag(1, -1) for det U = -1.
  auto objective = [&](double theta, bool reflect) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    Eigen::Matrix2d u;
    if (reflect) {
      u << c, s, s, -c;
    } else {
      u << c, -s, s, c;
    }
    return (pa - pb * u).squaredNorm();
  };

  const double step = 2.0 * std::numbers::pi / grid_size;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double best = std::numeric_limits<double>::infinity();
  for (bool reflect : {false, true}) {
    int best_k = 0;
    double best_grid = std::numeric_limits<double>::infinity();
    for (int k = 0; k < grid_size; ++k) {
      const double v = objective(k * step, reflect);
      if (v < best_grid) {
        best_grid = v;
        best_k = k;
      }
    }
    double lo = (best_k - 1) * step;
    double hi = (best_k + 1) * step;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = objective(x1, reflect);
    double f2 = objective(x2, reflect);
    while (hi - lo > 1e-10) {
      if (f1 < f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - inv_phi * (hi - lo);
        f1 = objective(x1, reflect);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + inv_phi * (hi - lo);
        f2 = objective(x2, reflect);
      }
    }
    best = std::min({best, best_grid, f1, f2});
  }
  return std::sqrt(std::max(best, 0.0)) / std::abs(alpha);
}

namespace {

std::vector<std::pair<Index, Index>> upper_pairs(Index n) {
  std::vector<std::pair<Index, Index>> pairs;
  pairs.reserve(static_cast<size_t>(n * (n - 1) / 2));
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  return pairs;
}

}  // namespace

Matrix pairwise_distances(std::span<const SpdMatrix> items, const PairMetric& metric) {
  const Index n = static_cast<Index>(items.size());
  const auto pairs = upper_pairs(n);
  Matrix out = Matrix::Zero(n, n);
  parallel::for_each_index(static_cast<Index>(pairs.size()), [&](Index k) {
    const auto [i, j] = pairs[static_cast<size_t>(k)];
    out(i, j) = metric(items[static_cast<size_t>(i)], items[static_cast<size_t>(j)]);
    out(j, i) = out(i, j);
  });
  return out;
}

Matrix pairwise_distances_serial(std::span<const SpdMatrix> items, const PairMetric& metric) {
  const Index n = static_cast<Index>(items.size());
  Matrix out = Matrix::Zero(n, n);
  for (const auto& [i, j] : upper_pairs(n)) {
    out(i, j) = metric(items[static_cast<size_t>(i)], items[static_cast<size_t>(j)]);
    out(j, i) = out(i, j);
  }
  return out;
}

}  // namespace alpha_procrustes
