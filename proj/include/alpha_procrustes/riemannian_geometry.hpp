#pragma once

// Riemannian metric on SPD(n) whose geodesic distance is the Alpha Procrustes
// distance d_alpha.
//
// The metric at P0 is <Y, Z> = 4 tr(L(Y) P0^{2a} L(Z)), where H = L(Y) is the
// unique symmetric solution of the generalized Lyapunov equation
//
//   Dexp(log P0) o Dlog(P0^{2a}) (H P0^{2a} + P0^{2a} H) = Y.
//
// In the eigenbasis of P0 this operator is diagonal: Y~_ij = f(l_i, l_j) H~_ij
// with f(l_i, l_j) = 2a (l_i - l_j)(l_i^{2a} + l_j^{2a}) / (l_i^{2a} - l_j^{2a})
// and f(l, l) = 2l.

#include "alpha_procrustes/linalg_core.hpp"

namespace alpha_procrustes {

struct TangentVector {
  SpdMatrix base_point;
  SymMatrix direction;
};

/// f(l_i, l_j) above. The log-limit mode returns 2 (l_i - l_j) / (log l_i - log l_j).
double lyapunov_factor(double li, double lj, AlphaParam alpha);

/// H = L_{P0, alpha}(Y). P0 must be strictly SPD.
SymMatrix solve_general_lyapunov(const SpdMatrix& p0, const SymMatrix& y, AlphaParam alpha);

/// Dexp(log P0) o Dlog(P0^{2a}) (H P0^{2a} + P0^{2a} H), applied with two
/// separate Frechet derivatives rather than the combined factor f. Residual
/// oracle for solve_general_lyapunov.
SymMatrix lyapunov_forward_map(const SpdMatrix& p0, const SymMatrix& h, double alpha);

/// <Y, Z>_{P0}. In the log-limit mode this is <Dlog(P0) Y, Dlog(P0) Z>_F.
double metric_inner(const SpdMatrix& p0, const SymMatrix& y, const SymMatrix& z, AlphaParam alpha);
double metric_inner(const TangentVector& y, const SymMatrix& z, AlphaParam alpha);

/// gamma(t) = [(1-t)^2 A^{2a} + t^2 B^{2a} + t(1-t)((A^{2a}B^{2a})^{1/2} + (B^{2a}A^{2a})^{1/2})]^{1/(2a)}
///
/// The t-independent pieces are computed once at construction. The
/// non-symmetric root is A^a (A^a B^{2a} A^a)^{1/2} A^{-a}.
class GeodesicCurve {
 public:
  /// A and B strictly SPD, alpha != 0 (not the log limit).
  GeodesicCurve(SpdMatrix a, SpdMatrix b, double alpha);

  const SpdMatrix& start() const { return a_; }
  const SpdMatrix& end() const { return b_; }
  double alpha() const { return alpha_; }
  Index dim() const { return a_.dim(); }

  /// Throws DomainError for t outside [0, 1] and NonSpdIntermediate when the
  /// bracket loses positive definiteness.
  SpdMatrix eval(double t) const;

 private:
  SpdMatrix a_;
  SpdMatrix b_;
  double alpha_;
  Matrix a_pow_;       // A^{2a}
  Matrix b_pow_;       // B^{2a}
  Matrix cross_sum_;   // (A^{2a}B^{2a})^{1/2} + (B^{2a}A^{2a})^{1/2}
};

inline SpdMatrix geodesic_eval(const GeodesicCurve& curve, double t) { return curve.eval(t); }

/// Sum over k of sqrt(<g'(t_k), g'(t_k)>_{g(t_k)}) dt at the midpoints
/// t_k = (k + 1/2) dt, with g'(t_k) = (g(t_k + dt/2) - g(t_k - dt/2)) / dt.
/// steps >= 100. Samples are evaluated in parallel.
double geodesic_length_numeric(const GeodesicCurve& curve, int steps);

/// Serial reference for geodesic_length_numeric (bitwise identical result).
double geodesic_length_numeric_serial(const GeodesicCurve& curve, int steps);

}  // namespace alpha_procrustes
