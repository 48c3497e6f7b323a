#include "alpha_procrustes/gaussian_measures.hpp"

#include <cmath>

#include "alpha_procrustes/spd_metrics.hpp"

namespace alpha_procrustes {

namespace {

void require_compatible(const GaussianMeasure& g1, const GaussianMeasure& g2) {
  if (g1.dim() != g2.dim()) throw Error(ErrorCode::DimensionError, "Gaussian measures differ in dimension");
}

double combine(double mean_dist, double cov_dist) {
  return std::sqrt(mean_dist * mean_dist + cov_dist * cov_dist);
}

}  // namespace

GaussianMeasure::GaussianMeasure(Vector m, SpdMatrix c) : mean(std::move(m)), covariance(std::move(c)) {
  if (mean.size() != covariance.dim()) {
    throw Error(ErrorCode::DimensionError, "mean length does not match covariance dimension");
  }
  if (!mean.allFinite()) throw Error(ErrorCode::NonFinite, "mean has non-finite entries");
}

MeanMetricSpec MeanMetricSpec::weighted(Vector weights) {
  for (Index i = 0; i < weights.size(); ++i) {
    if (!(weights(i) > 0.0) || !std::isfinite(weights(i))) {
      throw Error(ErrorCode::DomainError, "mean-metric weights must be finite and > 0");
    }
  }
  MeanMetricSpec spec;
  spec.kind_ = WeightedEuclidean{std::move(weights)};
  return spec;
}

MeanMetricSpec MeanMetricSpec::custom(Custom metric) {
  MeanMetricSpec spec;
  spec.kind_ = std::move(metric);
  return spec;
}

double MeanMetricSpec::distance(const Vector& m1, const Vector& m2) const {
  if (m1.size() != m2.size()) throw Error(ErrorCode::DimensionError, "mean vectors differ in length");
  if (std::holds_alternative<Euclidean>(kind_)) return (m1 - m2).norm();
  if (const auto* w = std::get_if<WeightedEuclidean>(&kind_)) {
    if (w->weights.size() != m1.size()) throw Error(ErrorCode::DimensionError, "weight vector length mismatch");
    return std::sqrt((w->weights.array() * (m1 - m2).array().square()).sum());
  }
  return std::get<Custom>(kind_)(m1, m2);
}

double gaussian_alpha_distance(const GaussianMeasure& g1, const GaussianMeasure& g2, AlphaParam alpha,
                               const MeanMetricSpec& mean_metric) {
  require_compatible(g1, g2);
  const double cov = alpha_procrustes(g1.covariance, g2.covariance, alpha).value;
  return combine(mean_metric.distance(g1.mean, g2.mean), 0.5 * cov);
}

double wasserstein_gaussian(const GaussianMeasure& g1, const GaussianMeasure& g2) {
  require_compatible(g1, g2);
  return combine((g1.mean - g2.mean).norm(), bures_wasserstein(g1.covariance, g2.covariance).value);
}

double gaussian_alpha_distance_regularized(const GaussianMeasure& g1, const GaussianMeasure& g2,
                                           AlphaParam alpha, double gamma, const MeanMetricSpec& mean_metric) {
  require_compatible(g1, g2);
  const double cov = alpha_procrustes_regularized(g1.covariance, g2.covariance, gamma, alpha).value;
  return combine(mean_metric.distance(g1.mean, g2.mean), 0.5 * cov);
}

}  // namespace alpha_procrustes
