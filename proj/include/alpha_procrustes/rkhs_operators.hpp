#pragma once

// Alpha Procrustes distances between RKHS covariance operators and between
// Gaussian measures in an RKHS, computed entirely from kernel Gram matrices.
//
// With A = Phi(X) J_m / sqrt(m) and B = Phi(Y) J_n / sqrt(n), the covariance
// operators are AA* and BB*, and every formula here only needs
//
//   A*A = J_m K[X] J_m / m,   B*B = J_n K[Y] J_n / n,   A*B = J_m K[X,Y] J_n / sqrt(mn).

#include <string>
#include <string_view>

#include "alpha_procrustes/linalg_core.hpp"

namespace alpha_procrustes {

class KernelSpec {
 public:
  enum class Kind { Linear, Polynomial, GaussianRBF };

  static KernelSpec linear() { return KernelSpec(Kind::Linear, 1, 0.0, 1.0); }
  /// (x.y + offset)^degree; degree >= 1, offset >= 0.
  static KernelSpec polynomial(int degree, double offset);
  /// exp(-||x - y||^2 / (2 sigma^2)); sigma > 0.
  static KernelSpec gaussian_rbf(double sigma);

  /// Parses "linear", "poly:d=2,c=1" or "rbf:sigma=0.5". Throws ParseError.
  static KernelSpec parse(std::string_view text);
  std::string to_string() const;

  Kind kind() const { return kind_; }
  int degree() const { return degree_; }
  double offset() const { return offset_; }
  double sigma() const { return sigma_; }

  double operator()(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y) const;

 private:
  KernelSpec(Kind kind, int degree, double offset, double sigma)
      : kind_(kind), degree_(degree), offset_(offset), sigma_(sigma) {}

  Kind kind_;
  int degree_;
  double offset_;
  double sigma_;
};

/// Samples as rows; at least two samples, finite entries.
class Dataset {
 public:
  explicit Dataset(Matrix points);

  Index size() const { return points_.rows(); }
  Index dim() const { return points_.cols(); }
  const Matrix& points() const { return points_; }

 private:
  Matrix points_;
};

struct GramBundle {
  Matrix kxx;  // m x m
  Matrix kyy;  // n x n
  Matrix kxy;  // m x n

  Index m() const { return kxx.rows(); }
  Index n() const { return kyy.rows(); }
};

struct CenteredGram {
  SpdMatrix aa;  // J_m K[X] J_m / m
  SpdMatrix bb;  // J_n K[Y] J_n / n
  Matrix ab;     // J_m K[X,Y] J_n / sqrt(mn)
};

/// Gram matrices, rows filled in parallel. Throws DimensionError if X and Y
/// live in different dimensions.
GramBundle gram_bundle(const Dataset& x, const Dataset& y, const KernelSpec& k);

/// Serial reference for gram_bundle (bitwise identical result).
GramBundle gram_bundle_serial(const Dataset& x, const Dataset& y, const KernelSpec& k);

/// J_m M J_n for an m x n matrix.
Matrix double_center(const Matrix& m);

CenteredGram center(const GramBundle& gb);

/// ||mu_X - mu_Y||^2 in the RKHS; tiny negative roundoff clamps to 0.
double mean_discrepancy_squared(const GramBundle& gb);

/// d_alpha[(C_X + gamma I), (C_Y + gamma I)] through the 3m x 3m block matrix.
/// Needs m == n, alpha != 0, gamma > 0.
double rkhs_alpha_distance(const GramBundle& gb, double alpha, double gamma);
double rkhs_alpha_distance(const Dataset& x, const Dataset& y, const KernelSpec& k, double alpha, double gamma);

/// d_alpha(C_X, C_Y) without regularization, alpha >= 1/2; m and n may differ.
double rkhs_alpha_distance_unregularized(const GramBundle& gb, double alpha);
double rkhs_alpha_distance_unregularized(const Dataset& x, const Dataset& y, const KernelSpec& k, double alpha);

/// ||log(C_X + gamma I) - log(C_Y + gamma I)||_eHS, the alpha -> 0 limit of
/// rkhs_alpha_distance. m and n may differ.
double rkhs_log_hs_distance(const GramBundle& gb, double gamma);

struct RkhsGaussianTerms {
  double mean_term;        // ||mu_X - mu_Y||^2
  double covariance_term;  // (1/4) d_alpha^2
  double total;            // sqrt(mean_term + covariance_term)
};

/// Distance between N(mu_X, C_X) and N(mu_Y, C_Y) in the RKHS.
/// gamma > 0: regularized family (m == n unless alpha is the log limit).
/// gamma == 0: pure Gram-matrix form, alpha >= 1/2, m and n may differ.
RkhsGaussianTerms rkhs_gaussian_terms(const GramBundle& gb, AlphaParam alpha, double gamma);
double rkhs_gaussian_distance(const Dataset& x, const Dataset& y, const KernelSpec& k, AlphaParam alpha,
                              double gamma);

/// L2-Wasserstein distance between the RKHS Gaussians; m and n may differ.
double rkhs_wasserstein(const GramBundle& gb);
double rkhs_wasserstein(const Dataset& x, const Dataset& y, const KernelSpec& k);

/// Explicit finite feature map (rows = samples). Linear: identity. Polynomial:
/// monomials of total degree d in (x, sqrt(c)) with sqrt-multinomial weights,
/// so that Phi(x).Phi(y) = (x.y + c)^d. Throws UnsupportedKernel for RBF or
/// when the feature dimension exceeds 10000.
Matrix explicit_feature_map(const Dataset& x, const KernelSpec& k);

struct FeatureMoments {
  Vector mean;
  SpdMatrix covariance;  // (1/m) Phi J_m Phi^T
};

FeatureMoments explicit_feature_covariance(const Dataset& x, const KernelSpec& k);

}  // namespace alpha_procrustes
