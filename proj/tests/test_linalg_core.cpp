#include <cmath>
#include <limits>

#include "alpha_procrustes/linalg_core.hpp"
#include "test_support.hpp"

using namespace alpha_procrustes;
using namespace ap_test;

namespace {

Matrix exp_series(const Matrix& s) {
  Matrix term = Matrix::Identity(s.rows(), s.cols());
  Matrix sum = term;
  for (int k = 1; k < 40; ++k) {
    term = term * s / k;
    sum += term;
  }
  return sum;
}

// log(I + X) for ||X|| < 1/2.
Matrix log1p_series(const Matrix& x) {
  Matrix power = x;
  Matrix sum = x;
  for (int k = 2; k < 80; ++k) {
    power = power * x;
    sum += ((k % 2 == 0) ? -1.0 : 1.0) * power / k;
  }
  return sum;
}

Matrix random_spd_matrix(sampling::Rng& rng, Index n) { return sampling::random_spd(rng, n).matrix(); }

}  // namespace

TEST(SymMatrix, SymmetrizesInput) {
  Matrix m(2, 2);
  m << 1, 2, 4, 3;
  const SymMatrix s(m);
  EXPECT_EQ(s(0, 1), 3.0);
  EXPECT_EQ(s(1, 0), 3.0);
}

TEST(SymMatrix, RejectsBadInput) {
  EXPECT_ERROR_CODE(SymMatrix(Matrix::Zero(2, 3)), ErrorCode::DimensionError);
  Matrix m = Matrix::Identity(2, 2);
  m(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_ERROR_CODE(SymMatrix{m}, ErrorCode::NonFinite);
}

TEST(SpdMatrix, StrictAndPsdFactories) {
  EXPECT_NO_THROW(SpdMatrix::strict(diag({1.0, 2.0})));
  EXPECT_ERROR_CODE(SpdMatrix::strict(diag({1.0, 0.0})), ErrorCode::SingularBase);
  EXPECT_ERROR_CODE(SpdMatrix::psd(diag({1.0, -0.5})), ErrorCode::NotPositive);

  const SpdMatrix clamped = SpdMatrix::psd(diag({1.0, -1e-14}));
  EXPECT_EQ(clamped.min_eig(), 0.0);
  EXPECT_FALSE(clamped.is_strict());
}

TEST(SpdMatrix, EigenvaluesAscending) {
  sampling::Rng rng(3);
  const SpdMatrix a = sampling::random_spd(rng, 6);
  for (Index i = 1; i < a.dim(); ++i) EXPECT_LE(a.eig().values(i - 1), a.eig().values(i));
  EXPECT_LT(max_abs_diff(a.eig().reconstruct(), a.matrix()), 1e-12 * a.max_eig());
}

TEST(AlphaParam, SwitchesToLogLimitNearZero) {
  EXPECT_TRUE(AlphaParam(0.0).is_log_limit());
  EXPECT_TRUE(AlphaParam(5e-8).is_log_limit());
  EXPECT_TRUE(AlphaParam(-5e-8).is_log_limit());
  EXPECT_FALSE(AlphaParam(2e-7).is_log_limit());
  EXPECT_ERROR_CODE(AlphaParam(std::numeric_limits<double>::infinity()), ErrorCode::NonFinite);
}

TEST(SpdPower, IntegerPowersMatchProducts) {
  sampling::Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const SpdMatrix a = sampling::random_spd(rng, 5);
    const Matrix& m = a.matrix();
    EXPECT_LT(max_abs_diff(spd_power(a, 3.0).matrix(), m * m * m), 1e-10 * std::pow(a.max_eig(), 3));
    EXPECT_LT(max_abs_diff(spd_power(a, -1.0).matrix() * m, Matrix::Identity(5, 5)), 1e-10);
    const Matrix root = spd_power(a, 0.5).matrix();
    EXPECT_LT(max_abs_diff(root * root, m), 1e-11 * a.max_eig());
  }
}

TEST(SpdPower, ZeroPowerOfPsdIsIdentity) {
  const SpdMatrix p = SpdMatrix::psd(diag({0.0, 3.0}));
  EXPECT_LT(max_abs_diff(spd_power(p, 0.0).matrix(), Matrix::Identity(2, 2)), 1e-15);
  EXPECT_ERROR_CODE(spd_power(p, -0.5), ErrorCode::SingularBase);
}

TEST(SpdLog, MatchesSeriesNearIdentity) {
  sampling::Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix x = sampling::random_symmetric(rng, 4).matrix();
    x *= 0.3 / x.norm();
    const SpdMatrix a = SpdMatrix::strict(Matrix(Matrix::Identity(4, 4) + x));
    EXPECT_LT(max_abs_diff(spd_log(a).matrix(), log1p_series(x)), 1e-13);
  }
}

TEST(SymExp, MatchesSeriesAndInvertsLog) {
  sampling::Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const SymMatrix s = sampling::random_symmetric(rng, 4);
    const Matrix series = exp_series(s.matrix());
    EXPECT_LT(max_abs_diff(sym_exp(s).matrix(), series), 1e-11 * series.norm());

    const SpdMatrix a = sampling::random_spd(rng, 4);
    EXPECT_LT(max_abs_diff(sym_exp(spd_log(a)).matrix(), a.matrix()), 1e-12 * a.max_eig());
  }
  EXPECT_ERROR_CODE(spd_log(SpdMatrix::psd(diag({0.0, 1.0}))), ErrorCode::SingularBase);
}

TEST(PsdSqrt, HandlesSingularInput) {
  sampling::Rng rng(8);
  const SpdMatrix p = sampling::random_psd(rng, 5, 2);
  const Matrix r = psd_sqrt(p).matrix();
  EXPECT_LT(max_abs_diff(r * r, p.matrix()), 1e-12 * p.max_eig());
}

TEST(TraceSqrtTriple, MatchesSquareRootOfProduct) {
  sampling::Rng rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const SpdMatrix a = sampling::random_spd(rng, 4);
    const SpdMatrix b = sampling::random_spd(rng, 4);
    const double alpha = 0.3 + 0.2 * trial;
    // tr (A^a B^{2a} A^a)^{1/2} = sum of sqrt(eig(A^{2a} B^{2a})).
    const Matrix prod = spd_power(a, 2 * alpha).matrix() * spd_power(b, 2 * alpha).matrix();
    const Eigen::VectorXcd ev = prod.eigenvalues();
    double want = 0.0;
    for (Index i = 0; i < ev.size(); ++i) want += std::sqrt(ev(i).real());
    EXPECT_LT(rel_err(trace_sqrt_triple(a, b, alpha), want), 1e-9);
    EXPECT_LT(rel_err(trace_sqrt_triple(a, b, alpha), trace_sqrt_triple(b, a, alpha)), 1e-9);
  }
}

TEST(LoewnerApply, MatchesFiniteDifferences) {
  sampling::Rng rng(21);
  const double h = 1e-5;
  for (int trial = 0; trial < 8; ++trial) {
    const SpdMatrix p = sampling::random_spd(rng, 4, 0.5, 4.0);
    const SymMatrix s = sampling::random_symmetric(rng, 4);
    const Matrix dexp = central_difference([](const Matrix& m) { return exp_series(m); }, p.matrix(), s.matrix(), h);
    EXPECT_LT(max_abs_diff(loewner_apply(p.eig(), ScalarFunction::exp(), s).matrix(), dexp), 1e-6 * dexp.norm());

    const Matrix dlog = central_difference(
        [](const Matrix& m) { return spd_log(SpdMatrix::strict(m)).matrix(); }, p.matrix(), s.matrix(), h);
    EXPECT_LT(max_abs_diff(loewner_apply(p.eig(), ScalarFunction::log(), s).matrix(), dlog), 1e-7 * dlog.norm());

    const double q = 1.7 - 0.6 * trial;
    const Matrix dpow = central_difference(
        [q](const Matrix& m) { return spd_power(SpdMatrix::strict(m), q).matrix(); }, p.matrix(), s.matrix(), h);
    EXPECT_LT(max_abs_diff(loewner_apply(p.eig(), ScalarFunction::power(q), s).matrix(), dpow),
              1e-7 * dpow.norm());
  }
}

TEST(LoewnerApply, RepeatedAndNearlyRepeatedEigenvalues) {
  sampling::Rng rng(22);
  const Matrix q = sampling::random_orthogonal(rng, 3);
  const SymMatrix s = sampling::random_symmetric(rng, 3);
  for (double gap : {0.0, 1e-12, 1e-9, 1e-6}) {
    Vector lam(3);
    lam << 2.0, 2.0 + gap, 5.0;
    const SpdMatrix p = SpdMatrix::from_spectrum(lam, q);
    const Matrix fd = central_difference(
        [](const Matrix& m) { return spd_log(SpdMatrix::strict(m)).matrix(); }, p.matrix(), s.matrix(), 1e-5);
    EXPECT_LT(max_abs_diff(loewner_apply(p.eig(), ScalarFunction::log(), s).matrix(), fd), 1e-8)
        << "gap " << gap;
  }
}

TEST(LoewnerApply, IdentityPointScalesDirection) {
  const SymMatrix s(diag({1.0, -2.0}) + Matrix::Constant(2, 2, 0.5));
  const EigenDecomposition id = SpdMatrix::identity(2).eig();
  EXPECT_LT(max_abs_diff(loewner_apply(id, ScalarFunction::power(3.0), s).matrix(), 3.0 * s.matrix()), 1e-15);
  EXPECT_ERROR_CODE(loewner_apply(SpdMatrix::psd(diag({0.0, 1.0})).eig(), ScalarFunction::log(), s),
                    ErrorCode::DomainError);
}

TEST(HAlpha, FullRankClosedForm) {
  sampling::Rng rng(31);
  const SpdMatrix e = sampling::random_spd(rng, 4);
  for (double alpha : {-0.5, 0.5, 1.0, 1.5, 2.0}) {
    const SpdMatrix shifted = SpdMatrix::strict(Matrix(e.matrix() + Matrix::Identity(4, 4)));
    const Matrix want = (spd_power(shifted, alpha).matrix() - Matrix::Identity(4, 4)) * e.matrix().inverse();
    EXPECT_LT(max_abs_diff(h_alpha(e, alpha).matrix(), want), 1e-11) << alpha;
  }
}

TEST(HAlpha, RankDeficientInput) {
  sampling::Rng rng(32);
  const SpdMatrix e = sampling::random_psd(rng, 5, 2);
  const double alpha = 0.75;
  const Matrix h = h_alpha(e, alpha).matrix();
  const SpdMatrix shifted = SpdMatrix::strict(Matrix(e.matrix() + Matrix::Identity(5, 5)));
  EXPECT_LT(max_abs_diff(e.matrix() * h, spd_power(shifted, alpha).matrix() - Matrix::Identity(5, 5)), 1e-12);
  // zero on the kernel of E
  for (Index k = 0; k < 3; ++k) EXPECT_LT((h * e.eig().vectors.col(k)).norm(), 1e-12);
}

TEST(RangeQuotient, SmallEigenvaluesUseSeriesLimit) {
  // log1p(x)/x -> 1 as x -> 0 without cancellation.
  const SpdMatrix e = SpdMatrix::psd(diag({1e-9, 2.0}));
  const Matrix g = range_quotient(e, [](double x) { return std::log1p(x); }).matrix();
  EXPECT_NEAR(g(0, 0), 1.0, 1e-9);
  EXPECT_NEAR(g(1, 1), std::log(3.0) / 2.0, 1e-15);
}

TEST(IsSymmetricWithin, Tolerance) {
  Matrix m = Matrix::Identity(3, 3);
  m(0, 2) = 1e-9;
  EXPECT_TRUE(is_symmetric_within(m, 1e-8));
  EXPECT_FALSE(is_symmetric_within(m, 1e-10));
  EXPECT_FALSE(is_symmetric_within(Matrix::Zero(2, 3), 1.0));
}
