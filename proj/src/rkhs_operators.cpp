#include "alpha_procrustes/rkhs_operators.hpp"

#include <Eigen/Eigenvalues>

#include <charconv>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <vector>

#include <fmt/format.h>

#include "alpha_procrustes/parallel.hpp"

namespace alpha_procrustes {

namespace {

constexpr double kSpectrumRel = 1e-8;
constexpr Index kMaxFeatureDim = 10000;

// Eigenvalues of a non-symmetric matrix that is similar to a PSD operator up
// to roundoff. Imaginary parts beyond 1e-8 (1 + |lambda|) plus the solver's
// backward-error floor n eps ||M||_F are rejected.
Vector real_spectrum(const Matrix& m) {
  Eigen::EigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::ConvergenceFailure, "non-symmetric eigensolver did not converge");
  }
  const Eigen::VectorXcd& values = solver.eigenvalues();
  const double floor = static_cast<double>(m.rows()) * std::numeric_limits<double>::epsilon() * m.norm();
  Vector out(values.size());
  for (Index i = 0; i < values.size(); ++i) {
    const std::complex<double> z = values(i);
    if (std::abs(z.imag()) > kSpectrumRel * (1.0 + std::abs(z)) + floor) {
      throw Error(ErrorCode::ComplexSpectrum,
                  fmt::format("eigenvalue {}{:+}i has a non-negligible imaginary part", z.real(), z.imag()));
    }
    out(i) = z.real();
  }
  return out;
}

// tr (P)^{1/2} for a product P similar to a PSD matrix. Eigenvalues within the
// backward-error floor are exact zeros of P up to roundoff and contribute 0.
double trace_sqrt_product(const Matrix& product) {
  const Vector values = real_spectrum(product);
  const double floor = static_cast<double>(product.rows()) * std::numeric_limits<double>::epsilon() * product.norm();
  double sum = 0.0;
  for (Index i = 0; i < values.size(); ++i) {
    if (values(i) > floor) sum += std::sqrt(values(i));
  }
  return sum;
}

double clamped_sqrt(double value, double scale) {
  if (value >= 0.0) return std::sqrt(value);
  if (-value < 1e-9 * std::max(scale, std::numeric_limits<double>::min())) return 0.0;
  throw Error(ErrorCode::NumericalInconsistency,
              fmt::format("trace expression {} is negative beyond roundoff (scale {})", value, scale));
}

SpdMatrix scaled(const SpdMatrix& e, double factor) {
  return SpdMatrix::from_spectrum(e.eig().values * factor, e.eig().vectors);
}

void require_gamma(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw Error(ErrorCode::DomainError, "gamma must be > 0");
}

double parse_number(std::string_view text, std::string_view what) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::ParseError, fmt::format("invalid value '{}' for {}", text, what));
  }
  return value;
}

std::map<std::string, std::string, std::less<>> parse_params(std::string_view text) {
  std::map<std::string, std::string, std::less<>> params;
  while (!text.empty()) {
    const size_t comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    const size_t eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw Error(ErrorCode::ParseError, fmt::format("kernel parameter '{}' is not key=value", item));
    }
    params.emplace(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return params;
}

void fill_gram_row(const Matrix& left, const Matrix& right, const KernelSpec& k, Index i, Matrix& out) {
  for (Index j = 0; j < right.rows(); ++j) out(i, j) = k(left.row(i).transpose(), right.row(j).transpose());
}

Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

// Multi-indices of total degree `degree` over `vars` variables.
void enumerate_exponents(int vars, int degree, std::vector<int>& current, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(current.size()) == vars - 1) {
    current.push_back(degree);
    out.push_back(current);
    current.pop_back();
    return;
  }
  for (int e = degree; e >= 0; --e) {
    current.push_back(e);
    enumerate_exponents(vars, degree - e, current, out);
    current.pop_back();
  }
}

double log_factorial(int n) { return std::lgamma(n + 1.0); }

}  // namespace

KernelSpec KernelSpec::polynomial(int degree, double offset) {
  if (degree < 1) throw Error(ErrorCode::DomainError, "polynomial kernel degree must be >= 1");
  if (!(offset >= 0.0) || !std::isfinite(offset)) {
    throw Error(ErrorCode::DomainError, "polynomial kernel offset must be >= 0");
  }
  return KernelSpec(Kind::Polynomial, degree, offset, 1.0);
}

KernelSpec KernelSpec::gaussian_rbf(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw Error(ErrorCode::DomainError, "rbf sigma must be > 0");
  return KernelSpec(Kind::GaussianRBF, 1, 0.0, sigma);
}

KernelSpec KernelSpec::parse(std::string_view text) {
  if (text == "linear") return linear();
  const size_t colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  const auto params = parse_params(colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1));
  auto get = [&](std::string_view key) -> std::string_view {
    auto it = params.find(key);
    if (it == params.end()) throw Error(ErrorCode::ParseError, fmt::format("kernel '{}' needs {}=", name, key));
    return it->second;
  };
  try {
    if (name == "poly") {
      for (const auto& [key, _] : params) {
        if (key != "d" && key != "c") throw Error(ErrorCode::ParseError, fmt::format("unknown poly parameter '{}'", key));
      }
      const double d = parse_number(get("d"), "d");
      if (d != std::floor(d)) throw Error(ErrorCode::ParseError, "poly degree must be an integer");
      const double c = params.count("c") ? parse_number(get("c"), "c") : 0.0;
      return polynomial(static_cast<int>(d), c);
    }
    if (name == "rbf") {
      for (const auto& [key, _] : params) {
        if (key != "sigma") throw Error(ErrorCode::ParseError, fmt::format("unknown rbf parameter '{}'", key));
      }
      return gaussian_rbf(parse_number(get("sigma"), "sigma"));
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError) throw;
    throw Error(ErrorCode::ParseError, e.what());
  }
  throw Error(ErrorCode::ParseError, fmt::format("unknown kernel '{}'", text));
}

std::string KernelSpec::to_string() const {
  switch (kind_) {
    case Kind::Linear: return "linear";
    case Kind::Polynomial: return fmt::format("poly:d={},c={}", degree_, offset_);
    case Kind::GaussianRBF: return fmt::format("rbf:sigma={}", sigma_);
  }
  return "?";
}

double KernelSpec::operator()(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y) const {
  switch (kind_) {
    case Kind::Linear: return x.dot(y);
    case Kind::Polynomial: return std::pow(x.dot(y) + offset_, degree_);
    case Kind::GaussianRBF: return std::exp(-(x - y).squaredNorm() / (2.0 * sigma_ * sigma_));
  }
  return 0.0;
}

Dataset::Dataset(Matrix points) : points_(std::move(points)) {
  if (points_.rows() < 2) throw Error(ErrorCode::DimensionError, "a dataset needs at least two samples");
  if (points_.cols() < 1) throw Error(ErrorCode::DimensionError, "a dataset needs at least one column");
  if (!points_.allFinite()) throw Error(ErrorCode::NonFinite, "dataset has non-finite entries");
}

GramBundle gram_bundle(const Dataset& x, const Dataset& y, const KernelSpec& k) {
  if (x.dim() != y.dim()) throw Error(ErrorCode::DimensionError, "datasets differ in sample dimension");
  const Index m = x.size();
  const Index n = y.size();
  GramBundle gb{Matrix(m, m), Matrix(n, n), Matrix(m, n)};
  parallel::for_each_index(m + n + m, [&](Index r) {
    if (r < m) {
      fill_gram_row(x.points(), x.points(), k, r, gb.kxx);
    } else if (r < m + n) {
      fill_gram_row(y.points(), y.points(), k, r - m, gb.kyy);
    } else {
      fill_gram_row(x.points(), y.points(), k, r - m - n, gb.kxy);
    }
  });
  gb.kxx = symmetrized(gb.kxx);
  gb.kyy = symmetrized(gb.kyy);
  return gb;
}

GramBundle gram_bundle_serial(const Dataset& x, const Dataset& y, const KernelSpec& k) {
  if (x.dim() != y.dim()) throw Error(ErrorCode::DimensionError, "datasets differ in sample dimension");
  const Index m = x.size();
  const Index n = y.size();
  GramBundle gb{Matrix(m, m), Matrix(n, n), Matrix(m, n)};
  for (Index i = 0; i < m; ++i) fill_gram_row(x.points(), x.points(), k, i, gb.kxx);
  for (Index i = 0; i < n; ++i) fill_gram_row(y.points(), y.points(), k, i, gb.kyy);
  for (Index i = 0; i < m; ++i) fill_gram_row(x.points(), y.points(), k, i, gb.kxy);
  gb.kxx = symmetrized(gb.kxx);
  gb.kyy = symmetrized(gb.kyy);
  return gb;
}

Matrix double_center(const Matrix& m) {
  Matrix out = m;
  out.rowwise() -= m.colwise().mean();
  const Vector row_means = out.rowwise().mean();
  out.colwise() -= row_means;
  return out;
}

CenteredGram center(const GramBundle& gb) {
  const double m = static_cast<double>(gb.m());
  const double n = static_cast<double>(gb.n());
  return {SpdMatrix::psd(SymMatrix(double_center(gb.kxx) / m)),
          SpdMatrix::psd(SymMatrix(double_center(gb.kyy) / n)),
          double_center(gb.kxy) / std::sqrt(m * n)};
}

double mean_discrepancy_squared(const GramBundle& gb) {
  const double m = static_cast<double>(gb.m());
  const double n = static_cast<double>(gb.n());
  const double xx = gb.kxx.sum() / (m * m);
  const double yy = gb.kyy.sum() / (n * n);
  const double xy = gb.kxy.sum() / (m * n);
  const double value = xx + yy - 2.0 * xy;
  if (value >= 0.0) return value;
  if (-value <= 1e-10 * std::max(1.0, xx + yy)) return 0.0;
  throw Error(ErrorCode::NumericalInconsistency, fmt::format("mean discrepancy {} is negative", value));
}

double rkhs_alpha_distance(const GramBundle& gb, double alpha, double gamma) {
  if (gb.m() != gb.n()) {
    throw Error(ErrorCode::DimensionError, "the regularized RKHS distance needs equal sample counts");
  }
  if (std::abs(alpha) < tol::alpha_switch) throw Error(ErrorCode::DomainError, "alpha must be nonzero");
  require_gamma(gamma);
  const Index m = gb.m();
  const CenteredGram c = center(gb);
  const SpdMatrix ea = scaled(c.aa, 1.0 / gamma);
  const SpdMatrix eb = scaled(c.bb, 1.0 / gamma);
  const double two_a = 2.0 * alpha;
  auto shifted_power_minus_one = [two_a](double lambda) { return std::expm1(two_a * std::log1p(lambda)); };

  // (I + E)^{2a} - I and h_{2a}(E) for both sides.
  const Matrix pa = ea.eig().apply(shifted_power_minus_one);
  const Matrix pb = eb.eig().apply(shifted_power_minus_one);
  const Matrix ha = h_alpha(ea, two_a).matrix();
  const Matrix hb = h_alpha(eb, two_a).matrix();
  const Matrix& ab = c.ab;
  const Matrix ba = ab.transpose();

  const Matrix c11 = pa;
  const Matrix c12 = ab * hb / gamma;
  const Matrix c13 = pa * ab * hb / gamma;
  const Matrix c21 = ba * ha / gamma;
  const Matrix c22 = pb;
  const Matrix c23 = ba * ha * ab * hb / (gamma * gamma);

  Matrix block(3 * m, 3 * m);
  block << c11, c12, c13,
           c21, c22, c23,
           c21, c22, c23;

  const Vector spectrum = real_spectrum(block);
  double cross = 0.0;
  for (Index i = 0; i < spectrum.size(); ++i) {
    const double lambda = std::max(spectrum(i), -1.0);
    cross += lambda / (std::sqrt(1.0 + lambda) + 1.0);  // sqrt(1 + lambda) - 1
  }
  const double ta = pa.trace();
  const double tb = pb.trace();
  const double normalized = ta + tb - 2.0 * cross;  // alpha^2 d^2 / gamma^{2a}
  return std::pow(gamma, alpha) * clamped_sqrt(normalized, std::abs(ta) + std::abs(tb)) / std::abs(alpha);
}

double rkhs_alpha_distance(const Dataset& x, const Dataset& y, const KernelSpec& k, double alpha, double gamma) {
  return rkhs_alpha_distance(gram_bundle(x, y, k), alpha, gamma);
}

double rkhs_alpha_distance_unregularized(const GramBundle& gb, double alpha) {
  if (!(alpha >= 0.5)) throw Error(ErrorCode::DomainError, "the unregularized RKHS distance needs alpha >= 1/2");
  const CenteredGram c = center(gb);
  const Matrix pa = spd_power(c.aa, 2.0 * alpha - 1.0).matrix();
  const Matrix pb = spd_power(c.bb, 2.0 * alpha - 1.0).matrix();
  const Matrix product = c.ab.transpose() * pa * c.ab * pb;
  const double cross = trace_sqrt_product(product);
  const double ta = spd_power(c.aa, 2.0 * alpha).trace();
  const double tb = spd_power(c.bb, 2.0 * alpha).trace();
  return clamped_sqrt(ta + tb - 2.0 * cross, ta + tb) / alpha;
}

double rkhs_alpha_distance_unregularized(const Dataset& x, const Dataset& y, const KernelSpec& k, double alpha) {
  return rkhs_alpha_distance_unregularized(gram_bundle(x, y, k), alpha);
}

double rkhs_log_hs_distance(const GramBundle& gb, double gamma) {
  require_gamma(gamma);
  const CenteredGram c = center(gb);
  const SpdMatrix ea = scaled(c.aa, 1.0 / gamma);
  const SpdMatrix eb = scaled(c.bb, 1.0 / gamma);
  // log(I + AA*/gamma) = A g(A*A/gamma) A* / gamma with g(e) = log(1 + e) / e.
  auto log1p_fn = [](double lambda) { return std::log1p(lambda); };
  const Matrix ga = range_quotient(ea, log1p_fn).matrix();
  const Matrix gb_ = range_quotient(eb, log1p_fn).matrix();
  double la = 0.0;
  double lb = 0.0;
  for (Index i = 0; i < ea.dim(); ++i) la += std::pow(std::log1p(ea.eig().values(i)), 2);
  for (Index i = 0; i < eb.dim(); ++i) lb += std::pow(std::log1p(eb.eig().values(i)), 2);
  const double cross = (ga * c.ab * gb_ * c.ab.transpose()).trace() / (gamma * gamma);
  return clamped_sqrt(la + lb - 2.0 * cross, la + lb);
}

RkhsGaussianTerms rkhs_gaussian_terms(const GramBundle& gb, AlphaParam alpha, double gamma) {
  RkhsGaussianTerms out{};
  out.mean_term = mean_discrepancy_squared(gb);
  if (gamma > 0.0) {
    const double d = alpha.is_log_limit() ? rkhs_log_hs_distance(gb, gamma)
                                          : rkhs_alpha_distance(gb, alpha.value(), gamma);
    out.covariance_term = 0.25 * d * d;
  } else if (gamma == 0.0) {
    const double a = alpha.value();
    if (alpha.is_log_limit() || a < 0.5) {
      throw Error(ErrorCode::DomainError, "gamma = 0 needs alpha >= 1/2");
    }
    // Gram form: (1/(4a^2)) [m^{-2a} tr(JK[X]J)^{2a} + n^{-2a} tr(JK[Y]J)^{2a}
    //   - 2 (mn)^{-a} tr[JK[Y,X]J (JK[X]J)^{2a-1} JK[X,Y]J (JK[Y]J)^{2a-1}]^{1/2}]
    const double m = static_cast<double>(gb.m());
    const double n = static_cast<double>(gb.n());
    const SpdMatrix kx = SpdMatrix::psd(SymMatrix(double_center(gb.kxx)));
    const SpdMatrix ky = SpdMatrix::psd(SymMatrix(double_center(gb.kyy)));
    const Matrix kxy = double_center(gb.kxy);
    const double tx = spd_power(kx, 2.0 * a).trace() / std::pow(m, 2.0 * a);
    const double ty = spd_power(ky, 2.0 * a).trace() / std::pow(n, 2.0 * a);
    const Matrix product = kxy.transpose() * spd_power(kx, 2.0 * a - 1.0).matrix() * kxy *
                           spd_power(ky, 2.0 * a - 1.0).matrix();
    const double cross = trace_sqrt_product(product) / std::pow(m * n, a);
    const double root = clamped_sqrt(tx + ty - 2.0 * cross, tx + ty);
    out.covariance_term = root * root / (4.0 * a * a);
  } else {
    throw Error(ErrorCode::DomainError, "gamma must be >= 0");
  }
  out.total = std::sqrt(out.mean_term + out.covariance_term);
  return out;
}

double rkhs_gaussian_distance(const Dataset& x, const Dataset& y, const KernelSpec& k, AlphaParam alpha,
                              double gamma) {
  return rkhs_gaussian_terms(gram_bundle(x, y, k), alpha, gamma).total;
}

double rkhs_wasserstein(const GramBundle& gb) {
  const double m = static_cast<double>(gb.m());
  const double n = static_cast<double>(gb.n());
  const Matrix kxy = double_center(gb.kxy);
  // J_n K[Y,X] J_m K[X,Y] J_n = (J_m K[X,Y] J_n)^T (J_m K[X,Y] J_n) is symmetric PSD.
  const SpdMatrix cross_gram = SpdMatrix::psd(SymMatrix(kxy.transpose() * kxy));
  const double cross = psd_sqrt(cross_gram).trace() / std::sqrt(m * n);
  const double tx = double_center(gb.kxx).trace() / m;
  const double ty = double_center(gb.kyy).trace() / n;
  const double cov = tx + ty - 2.0 * cross;
  return clamped_sqrt(mean_discrepancy_squared(gb) + cov, tx + ty);
}

double rkhs_wasserstein(const Dataset& x, const Dataset& y, const KernelSpec& k) {
  return rkhs_wasserstein(gram_bundle(x, y, k));
}

Matrix explicit_feature_map(const Dataset& x, const KernelSpec& k) {
  switch (k.kind()) {
    case KernelSpec::Kind::Linear:
      return x.points();
    case KernelSpec::Kind::GaussianRBF:
      throw Error(ErrorCode::UnsupportedKernel, "the Gaussian RBF kernel has no finite feature map");
    case KernelSpec::Kind::Polynomial:
      break;
  }
  const int vars = static_cast<int>(x.dim()) + 1;  // last variable is the constant sqrt(c)
  const int degree = k.degree();
  // C(vars - 1 + degree, degree) monomials
  double count = 1.0;
  for (int i = 1; i <= degree; ++i) count = count * (vars - 1 + i) / i;
  if (count > static_cast<double>(kMaxFeatureDim)) {
    throw Error(ErrorCode::UnsupportedKernel, fmt::format("feature dimension {} exceeds {}", count, kMaxFeatureDim));
  }
  std::vector<std::vector<int>> exponents;
  std::vector<int> current;
  enumerate_exponents(vars, degree, current, exponents);
  if (k.offset() == 0.0) std::erase_if(exponents, [](const std::vector<int>& e) { return e.back() > 0; });

  const double root_c = std::sqrt(k.offset());
  Matrix features(x.size(), static_cast<Index>(exponents.size()));
  for (size_t f = 0; f < exponents.size(); ++f) {
    const std::vector<int>& e = exponents[f];
    double log_weight = log_factorial(degree);
    for (int p : e) log_weight -= log_factorial(p);
    const double weight = std::sqrt(std::exp(log_weight)) * std::pow(root_c, e.back());
    for (Index s = 0; s < x.size(); ++s) {
      double v = weight;
      for (int d = 0; d + 1 < vars; ++d) v *= std::pow(x.points()(s, d), e[static_cast<size_t>(d)]);
      features(s, static_cast<Index>(f)) = v;
    }
  }
  return features;
}

FeatureMoments explicit_feature_covariance(const Dataset& x, const KernelSpec& k) {
  const Matrix phi = explicit_feature_map(x, k);
  const Vector mean = phi.colwise().mean().transpose();
  const Matrix centered = phi.rowwise() - mean.transpose();
  const Matrix cov = centered.transpose() * centered / static_cast<double>(phi.rows());
  return {mean, SpdMatrix::psd(SymMatrix(cov))};
}

}  // namespace alpha_procrustes
