#pragma once

#include <functional>
#include <variant>

#include "alpha_procrustes/linalg_core.hpp"

namespace alpha_procrustes {

struct GaussianMeasure {
  Vector mean;
  SpdMatrix covariance;  // PSD allowed

  /// Throws DimensionError when the mean and covariance sizes differ.
  GaussianMeasure(Vector mean, SpdMatrix covariance);

  Index dim() const { return mean.size(); }
};

/// Metric on the means. Euclidean, diagonal-weighted Euclidean, or any
/// caller-supplied metric.
class MeanMetricSpec {
 public:
  struct Euclidean {};
  struct WeightedEuclidean {
    Vector weights;
  };
  using Custom = std::function<double(const Vector&, const Vector&)>;

  MeanMetricSpec() = default;
  static MeanMetricSpec euclidean() { return MeanMetricSpec(); }
  /// Throws DomainError unless every weight is finite and > 0.
  static MeanMetricSpec weighted(Vector weights);
  static MeanMetricSpec custom(Custom metric);

  /// d_mean(m1, m2).
  double distance(const Vector& m1, const Vector& m2) const;

 private:
  std::variant<Euclidean, WeightedEuclidean, Custom> kind_;
};

/// sqrt(d_mean^2 + (1/(4 a^2)) tr[C1^{2a} + C2^{2a} - 2 (C1^a C2^{2a} C1^a)^{1/2}]);
/// log limit: sqrt(d_mean^2 + (1/4)||log C1 - log C2||_F^2).
double gaussian_alpha_distance(const GaussianMeasure& g1, const GaussianMeasure& g2, AlphaParam alpha,
                               const MeanMetricSpec& mean_metric = {});

/// L2-Wasserstein distance between Gaussians.
double wasserstein_gaussian(const GaussianMeasure& g1, const GaussianMeasure& g2);

/// Same family with covariances regularized to C + gamma I, gamma > 0.
double gaussian_alpha_distance_regularized(const GaussianMeasure& g1, const GaussianMeasure& g2,
                                           AlphaParam alpha, double gamma,
                                           const MeanMetricSpec& mean_metric = {});

}  // namespace alpha_procrustes
