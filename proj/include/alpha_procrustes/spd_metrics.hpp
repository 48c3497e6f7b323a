#pragma once

// The Alpha Procrustes family of distances on SPD/PSD matrices:
//
//   d_alpha(A, B) = min_U ||(A^alpha - B^alpha U) / alpha||_F
//                 = (1/|alpha|) sqrt(tr[A^{2a} + B^{2a} - 2 (A^a B^{2a} A^a)^{1/2}])
//
// alpha = 1/2 gives twice the Bures-Wasserstein distance, alpha -> 0 gives the
// Log-Euclidean distance, and commuting pairs reduce to the power-Euclidean
// distance ||(A^alpha - B^alpha) / alpha||_F.

#include <functional>
#include <span>

#include "alpha_procrustes/linalg_core.hpp"

namespace alpha_procrustes {

/// Which formula produced a value. Diagnostic only.
enum class FormulaPath { General, LogLimit, Commuting };

struct DistanceResult {
  double value;
  AlphaParam alpha;
  double gamma;  // 0 for unregularized distances
  FormulaPath formula_path;
};

/// Closed-form Alpha Procrustes distance. PSD inputs are accepted for
/// alpha > 0; alpha <= 0 (including the log limit) needs strictly SPD inputs.
DistanceResult alpha_procrustes(const SpdMatrix& a, const SpdMatrix& b, AlphaParam alpha);

/// sqrt(tr[A + B - 2 (A^{1/2} B A^{1/2})^{1/2}]).
DistanceResult bures_wasserstein(const SpdMatrix& a, const SpdMatrix& b);

/// ||log A - log B||_F.
DistanceResult log_euclidean(const SpdMatrix& a, const SpdMatrix& b);

/// ||A^alpha - B^alpha||_F / |alpha|, alpha != 0.
DistanceResult power_euclidean(const SpdMatrix& a, const SpdMatrix& b, double alpha);

/// d_alpha[(A + gamma I), (B + gamma I)] for PSD A, B and gamma > 0. In the log
/// limit this is ||log(A + gamma I) - log(B + gamma I)||_F.
DistanceResult alpha_procrustes_regularized(const SpdMatrix& a, const SpdMatrix& b, double gamma,
                                            AlphaParam alpha);

/// Direct minimization of ||A^alpha - B^alpha U||_F / |alpha| over the full
/// orthogonal group O(2): a uniform angle grid on rotations and reflections,
/// refined by golden-section search to 1e-10 in the angle. Test oracle for the
/// closed form; 2x2 only.
double procrustes_bruteforce_2x2(const SpdMatrix& a, const SpdMatrix& b, double alpha, int grid_size = 720);

/// Shifted copy A + gamma I sharing A's eigenvectors.
SpdMatrix shift_identity(const SpdMatrix& a, double gamma);

/// ||AB - BA||_F < 1e-12 * max(1, ||A||_F ||B||_F).
bool commute(const SpdMatrix& a, const SpdMatrix& b);

using PairMetric = std::function<double(const SpdMatrix&, const SpdMatrix&)>;

/// Symmetric matrix of metric(items[i], items[j]) with a zero diagonal; pairs
/// are evaluated in parallel.
Matrix pairwise_distances(std::span<const SpdMatrix> items, const PairMetric& metric);

/// Serial reference for pairwise_distances.
Matrix pairwise_distances_serial(std::span<const SpdMatrix> items, const PairMetric& metric);

}  // namespace alpha_procrustes
