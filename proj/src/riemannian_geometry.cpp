#include "alpha_procrustes/riemannian_geometry.hpp"

#include <cmath>
#include <vector>

#include "alpha_procrustes/parallel.hpp"

namespace alpha_procrustes {

namespace {

void require_strict(const SpdMatrix& p, const char* what) {
  if (!p.is_strict()) {
    throw Error(ErrorCode::SingularBase, std::string(what) + " must be strictly positive definite");
  }
}

// Eigenbasis representation of H = L_{P0,alpha}(Y).
Matrix lyapunov_in_eigenbasis(const SpdMatrix& p0, const SymMatrix& y, AlphaParam alpha) {
  require_strict(p0, "base point");
  if (y.dim() != p0.dim()) throw Error(ErrorCode::DimensionError, "tangent vector dimension mismatch");
  const EigenDecomposition& eig = p0.eig();
  Matrix h = eig.vectors.transpose() * y.matrix() * eig.vectors;
  for (Index j = 0; j < eig.dim(); ++j) {
    for (Index i = 0; i < eig.dim(); ++i) {
      h(i, j) /= lyapunov_factor(eig.values(i), eig.values(j), alpha);
    }
  }
  return 0.5 * (h + h.transpose());
}

// Speed of the curve at a midpoint, from the two bracketing grid points.
double speed_at(const GeodesicCurve& curve, int k, int steps) {
  const double dt = 1.0 / steps;
  const SpdMatrix left = curve.eval(k * dt);
  const SpdMatrix right = curve.eval(k + 1 == steps ? 1.0 : (k + 1) * dt);
  const SpdMatrix mid = curve.eval((k + 0.5) * dt);
  const SymMatrix velocity((right.matrix() - left.matrix()) / dt);
  const double sq = metric_inner(mid, velocity, velocity, AlphaParam(curve.alpha()));
  return std::sqrt(std::max(sq, 0.0));
}

void require_steps(int steps) {
  if (steps < 100) throw Error(ErrorCode::DomainError, "geodesic_length_numeric needs steps >= 100");
}

}  // namespace

double lyapunov_factor(double li, double lj, AlphaParam alpha) {
  if (std::abs(li - lj) < tol::divided_diff * std::max(1.0, std::abs(li))) return li + lj;
  const double r = std::log(li / lj);
  if (alpha.is_log_limit()) return 2.0 * lj * std::expm1(r) / r;
  const double a = alpha.value();
  const double mi = std::pow(li, 2.0 * a);
  const double mj = std::pow(lj, 2.0 * a);
  // 2a (li - lj)(mi + mj) / (mi - mj) with both differences in expm1 form.
  return 2.0 * a * lj * std::expm1(r) * (mi + mj) / (mj * std::expm1(2.0 * a * r));
}

SymMatrix solve_general_lyapunov(const SpdMatrix& p0, const SymMatrix& y, AlphaParam alpha) {
  const Matrix h = lyapunov_in_eigenbasis(p0, y, alpha);
  const Matrix& v = p0.eig().vectors;
  return SymMatrix(v * h * v.transpose());
}

SymMatrix lyapunov_forward_map(const SpdMatrix& p0, const SymMatrix& h, double alpha) {
  require_strict(p0, "base point");
  if (h.dim() != p0.dim()) throw Error(ErrorCode::DimensionError, "tangent vector dimension mismatch");
  const SpdMatrix p_pow = spd_power(p0, 2.0 * alpha);
  const SymMatrix sum(h.matrix() * p_pow.matrix() + p_pow.matrix() * h.matrix());
  const SymMatrix dlog = loewner_apply(p_pow.eig(), ScalarFunction::log(), sum);
  const EigenDecomposition log_p0{p0.eig().values.array().log().matrix(), p0.eig().vectors};
  return loewner_apply(log_p0, ScalarFunction::exp(), dlog);
}

double metric_inner(const SpdMatrix& p0, const SymMatrix& y, const SymMatrix& z, AlphaParam alpha) {
  if (alpha.is_log_limit()) {
    require_strict(p0, "base point");
    const SymMatrix dy = loewner_apply(p0.eig(), ScalarFunction::log(), y);
    const SymMatrix dz = loewner_apply(p0.eig(), ScalarFunction::log(), z);
    return (dy.matrix().array() * dz.matrix().array()).sum();
  }
  const Matrix hy = lyapunov_in_eigenbasis(p0, y, alpha);
  const Matrix hz = lyapunov_in_eigenbasis(p0, z, alpha);
  const Vector& lambda = p0.eig().values;
  // 4 tr(H_Y P^{2a} H_Z) = 4 sum_ij (H_Y)_ij (H_Z)_ij lambda_j^{2a}; symmetric in (Y, Z) term by term.
  double sum = 0.0;
  for (Index j = 0; j < lambda.size(); ++j) {
    const double mu = std::pow(lambda(j), 2.0 * alpha.value());
    for (Index i = 0; i < lambda.size(); ++i) sum += hy(i, j) * hz(i, j) * mu;
  }
  return 4.0 * sum;
}

double metric_inner(const TangentVector& y, const SymMatrix& z, AlphaParam alpha) {
  return metric_inner(y.base_point, y.direction, z, alpha);
}

GeodesicCurve::GeodesicCurve(SpdMatrix a, SpdMatrix b, double alpha)
    : a_(std::move(a)), b_(std::move(b)), alpha_(alpha) {
  if (a_.dim() != b_.dim()) throw Error(ErrorCode::DimensionError, "geodesic endpoints differ in dimension");
  if (std::abs(alpha) < tol::alpha_switch) {
    throw Error(ErrorCode::DomainError, "geodesic needs alpha != 0");
  }
  require_strict(a_, "geodesic start");
  require_strict(b_, "geodesic end");
  const SpdMatrix a_half = spd_power(a_, alpha);
  const SpdMatrix a_half_inv = spd_power(a_, -alpha);
  a_pow_ = spd_power(a_, 2.0 * alpha).matrix();
  b_pow_ = spd_power(b_, 2.0 * alpha).matrix();
  const SpdMatrix inner = SpdMatrix::psd(SymMatrix(a_half.matrix() * b_pow_ * a_half.matrix()));
  const Matrix root = a_half.matrix() * psd_sqrt(inner).matrix() * a_half_inv.matrix();
  cross_sum_ = root + root.transpose();
}

SpdMatrix GeodesicCurve::eval(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorCode::DomainError, "geodesic parameter outside [0, 1]");
  const double s = 1.0 - t;
  const SymMatrix bracket(s * s * a_pow_ + t * t * b_pow_ + t * s * cross_sum_);
  SpdMatrix spd;
  try {
    spd = SpdMatrix::strict(bracket);
  } catch (const Error&) {
    throw Error(ErrorCode::NonSpdIntermediate, "geodesic bracket is not positive definite at t = " +
                                                   std::to_string(t));
  }
  return spd_power(spd, 1.0 / (2.0 * alpha_));
}

double geodesic_length_numeric(const GeodesicCurve& curve, int steps) {
  require_steps(steps);
  std::vector<double> speeds(static_cast<size_t>(steps));
  parallel::for_each_index(steps, [&](Index k) {
    speeds[static_cast<size_t>(k)] = speed_at(curve, static_cast<int>(k), steps);
  });
  double total = 0.0;
  for (double v : speeds) total += v;
  return total / steps;
}

double geodesic_length_numeric_serial(const GeodesicCurve& curve, int steps) {
  require_steps(steps);
  std::vector<double> speeds(static_cast<size_t>(steps));
  for (int k = 0; k < steps; ++k) speeds[static_cast<size_t>(k)] = speed_at(curve, k, steps);
  double total = 0.0;
  for (double v : speeds) total += v;
  return total / steps;
}

}  // namespace alpha_procrustes
