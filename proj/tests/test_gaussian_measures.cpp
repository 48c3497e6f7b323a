#include <cmath>

#include "alpha_procrustes/gaussian_measures.hpp"
#include "alpha_procrustes/spd_metrics.hpp"
#include "test_support.hpp"

using namespace alpha_procrustes;
using namespace ap_test;

namespace {

Vector vec(std::initializer_list<double> values) { return diag(values).diagonal(); }

GaussianMeasure random_gaussian(sampling::Rng& rng, Index n) {
  return GaussianMeasure(sampling::random_vector(rng, n), sampling::random_spd(rng, n));
}

}  // namespace

TEST(GaussianMeasure, DimensionChecks) {
  EXPECT_ERROR_CODE(GaussianMeasure(vec({1.0, 2.0, 3.0}), SpdMatrix::identity(2)), ErrorCode::DimensionError);
  const GaussianMeasure g2(vec({0.0, 0.0}), SpdMatrix::identity(2));
  const GaussianMeasure g3(vec({0.0, 0.0, 0.0}), SpdMatrix::identity(3));
  EXPECT_ERROR_CODE(gaussian_alpha_distance(g2, g3, AlphaParam(0.5)), ErrorCode::DimensionError);
  EXPECT_ERROR_CODE(wasserstein_gaussian(g2, g3), ErrorCode::DimensionError);
}

TEST(GaussianAlpha, MeanShiftOnlyIsEuclidean) {
  const GaussianMeasure g1(vec({1.0, 0.0}), SpdMatrix::identity(2));
  const GaussianMeasure g2(vec({0.0, 0.0}), SpdMatrix::identity(2));
  for (double alpha : {-1.0, 0.25, 0.5, 2.0}) {
    EXPECT_NEAR(gaussian_alpha_distance(g1, g2, AlphaParam(alpha)), 1.0, 1e-12);
  }
  EXPECT_NEAR(gaussian_alpha_distance(g1, g2, AlphaParam::log_limit()), 1.0, 1e-15);
  EXPECT_NEAR(gaussian_alpha_distance(g1, g1, AlphaParam(0.7)), 0.0, 1e-7);
}

TEST(GaussianAlpha, HalfIsWasserstein) {
  sampling::Rng rng(301);
  for (int trial = 0; trial < 20; ++trial) {
    const GaussianMeasure g1 = random_gaussian(rng, 2 + trial % 5);
    const GaussianMeasure g2 = random_gaussian(rng, g1.dim());
    EXPECT_LT(rel_err(gaussian_alpha_distance(g1, g2, AlphaParam(0.5)), wasserstein_gaussian(g1, g2)), 1e-10);
  }
}

TEST(Wasserstein, CommutingExampleAndComposition) {
  const GaussianMeasure g1(vec({0.0, 0.0}), SpdMatrix::strict(diag({1.0, 4.0})));
  const GaussianMeasure g2(vec({0.0, 0.0}), SpdMatrix::strict(diag({9.0, 16.0})));
  EXPECT_NEAR(wasserstein_gaussian(g1, g2), 2.0 * std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(wasserstein_gaussian(g1, g1), 0.0, 1e-7);

  sampling::Rng rng(302);
  const GaussianMeasure r1 = random_gaussian(rng, 3);
  const GaussianMeasure r2 = random_gaussian(rng, 3);
  const double bw = bures_wasserstein(r1.covariance, r2.covariance).value;
  EXPECT_LT(rel_err(wasserstein_gaussian(r1, r2), std::sqrt((r1.mean - r2.mean).squaredNorm() + bw * bw)), 1e-14);
}

TEST(GaussianAlpha, ZeroMeansGiveHalfProcrustes) {
  sampling::Rng rng(303);
  const Vector zero = Vector::Zero(4);
  const SpdMatrix c1 = sampling::random_spd(rng, 4);
  const SpdMatrix c2 = sampling::random_spd(rng, 4);
  for (double alpha : {-0.5, 0.3, 1.0}) {
    EXPECT_LT(rel_err(gaussian_alpha_distance(GaussianMeasure(zero, c1), GaussianMeasure(zero, c2), AlphaParam(alpha)),
                      0.5 * alpha_procrustes::alpha_procrustes(c1, c2, AlphaParam(alpha)).value),
              1e-15);
  }
}

TEST(GaussianAlpha, MeanCovarianceSeparability) {
  sampling::Rng rng(304);
  const SpdMatrix c1 = sampling::random_spd(rng, 3);
  const SpdMatrix c2 = sampling::random_spd(rng, 3);
  const Vector m1 = sampling::random_vector(rng, 3);
  const Vector m2 = sampling::random_vector(rng, 3);
  const double cov = 0.5 * alpha_procrustes::alpha_procrustes(c1, c2, AlphaParam(0.8)).value;
  const double d = gaussian_alpha_distance(GaussianMeasure(m1, c1), GaussianMeasure(m2, c2), AlphaParam(0.8));
  EXPECT_NEAR(d * d, (m1 - m2).squaredNorm() + cov * cov, 1e-12 * std::max(1.0, d * d));
}

TEST(GaussianAlpha, LogLimitFormula) {
  sampling::Rng rng(305);
  const GaussianMeasure g1 = random_gaussian(rng, 3);
  const GaussianMeasure g2 = random_gaussian(rng, 3);
  const double le = (spd_log(g1.covariance).matrix() - spd_log(g2.covariance).matrix()).norm();
  const double want = std::sqrt((g1.mean - g2.mean).squaredNorm() + 0.25 * le * le);
  EXPECT_LT(rel_err(gaussian_alpha_distance(g1, g2, AlphaParam::log_limit()), want), 1e-14);
}

TEST(GaussianAlpha, SingularCovarianceNeedsPositiveAlpha) {
  const GaussianMeasure g1(vec({0.0, 0.0}), SpdMatrix::psd(diag({0.0, 1.0})));
  const GaussianMeasure g2(vec({1.0, 0.0}), SpdMatrix::identity(2));
  EXPECT_NO_THROW(gaussian_alpha_distance(g1, g2, AlphaParam(0.5)));
  EXPECT_ERROR_CODE(gaussian_alpha_distance(g1, g2, AlphaParam(-0.5)), ErrorCode::SingularBase);
  EXPECT_ERROR_CODE(gaussian_alpha_distance(g1, g2, AlphaParam::log_limit()), ErrorCode::SingularBase);
}

TEST(MeanMetric, WeightedAndCustom) {
  const Vector m1 = vec({1.0, 2.0});
  const Vector m2 = vec({0.0, 0.0});
  EXPECT_NEAR(MeanMetricSpec::weighted(vec({4.0, 0.25})).distance(m1, m2), std::sqrt(5.0), 1e-15);
  const MeanMetricSpec l1 = MeanMetricSpec::custom([](const Vector& a, const Vector& b) {
    return (a - b).lpNorm<1>();
  });
  EXPECT_DOUBLE_EQ(l1.distance(m1, m2), 3.0);
  EXPECT_ERROR_CODE(MeanMetricSpec::weighted(vec({1.0, 0.0})), ErrorCode::DomainError);
  EXPECT_ERROR_CODE(MeanMetricSpec::weighted(vec({1.0})).distance(m1, m2), ErrorCode::DimensionError);

  const GaussianMeasure g1(m1, SpdMatrix::identity(2));
  const GaussianMeasure g2(m2, SpdMatrix::identity(2));
  EXPECT_NEAR(gaussian_alpha_distance(g1, g2, AlphaParam(0.5), l1), 3.0, 1e-12);
}

TEST(GaussianRegularized, MatchesShiftedAndConverges) {
  sampling::Rng rng(306);
  const GaussianMeasure g1(sampling::random_vector(rng, 3), sampling::random_psd(rng, 3, 2));
  const GaussianMeasure g2(sampling::random_vector(rng, 3), sampling::random_psd(rng, 3, 1));
  const double gamma = 0.2;
  const double cov = alpha_procrustes_regularized(g1.covariance, g2.covariance, gamma, AlphaParam(0.75)).value;
  EXPECT_LT(rel_err(gaussian_alpha_distance_regularized(g1, g2, AlphaParam(0.75), gamma),
                    std::sqrt((g1.mean - g2.mean).squaredNorm() + 0.25 * cov * cov)),
            1e-14);

  const double le = log_euclidean(shift_identity(g1.covariance, gamma), shift_identity(g2.covariance, gamma)).value;
  EXPECT_LT(rel_err(gaussian_alpha_distance_regularized(g1, g2, AlphaParam::log_limit(), gamma),
                    std::sqrt((g1.mean - g2.mean).squaredNorm() + 0.25 * le * le)),
            1e-14);

  const GaussianMeasure s1 = random_gaussian(rng, 3);
  const GaussianMeasure s2 = random_gaussian(rng, 3);
  EXPECT_LT(rel_err(gaussian_alpha_distance_regularized(s1, s2, AlphaParam(0.5), 1e-7), wasserstein_gaussian(s1, s2)),
            1e-3);
  EXPECT_NEAR(gaussian_alpha_distance_regularized(s1, s1, AlphaParam(0.5), 0.1), 0.0, 1e-7);
}

TEST(GaussianAlpha, TriangleInequality) {
  sampling::Rng rng(307);
  for (int trial = 0; trial < 60; ++trial) {
    const GaussianMeasure x = random_gaussian(rng, 3);
    const GaussianMeasure y = random_gaussian(rng, 3);
    const GaussianMeasure z = random_gaussian(rng, 3);
    for (const AlphaParam& a : {AlphaParam(-1.0), AlphaParam::log_limit(), AlphaParam(0.5), AlphaParam(2.0)}) {
      EXPECT_GE(gaussian_alpha_distance(x, y, a) + gaussian_alpha_distance(y, z, a) - gaussian_alpha_distance(x, z, a),
                -1e-9);
    }
  }
}
