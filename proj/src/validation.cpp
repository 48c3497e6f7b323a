#include "alpha_procrustes/validation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <ostream>

#include <fmt/format.h>

#include "alpha_procrustes/gaussian_measures.hpp"
#include "alpha_procrustes/riemannian_geometry.hpp"
#include "alpha_procrustes/sampling.hpp"
#include "alpha_procrustes/spd_metrics.hpp"

namespace alpha_procrustes::validation {

namespace {

using sampling::Rng;

std::string show(const Matrix& m) {
  std::string s = "[";
  for (Index i = 0; i < m.rows(); ++i) {
    if (i > 0) s += "; ";
    for (Index j = 0; j < m.cols(); ++j) s += fmt::format("{}{:.17g}", j > 0 ? " " : "", m(i, j));
  }
  return s + "]";
}

std::string show_alpha(AlphaParam a) { return a.is_log_limit() ? "log-limit" : fmt::format("{}", a.value()); }

Index random_dim(Rng& rng, Index lo, Index hi) {
  return std::uniform_int_distribution<Index>(lo, hi)(rng);
}

class SuiteRunner {
 public:
  SuiteRunner(std::string name, std::uint64_t seed) : rng(seed) { result.name = std::move(name); }

  void check(bool ok, const std::function<std::string()>& witness) {
    ++result.checks;
    if (ok) return;
    if (result.failures++ == 0) result.witness = witness();
  }

  // A thrown library error counts as a failure of the trial.
  template <class F>
  void guarded(int trial, F&& body) {
    try {
      body();
    } catch (const Error& e) {
      check(false, [&] { return fmt::format("trial {}: {}", trial, e.what()); });
    }
  }

  Rng rng;
  SuiteResult result;
};

const std::array<AlphaParam, 5> kAxiomAlphas = {AlphaParam(-1.0), AlphaParam::log_limit(), AlphaParam(0.5),
                                                 AlphaParam(1.0), AlphaParam(2.0)};

SuiteResult bw_coincidence(std::uint64_t seed, int trials, const Tolerances& tol) {
  SuiteRunner s("alpha=1/2 is twice Bures-Wasserstein", seed);
  for (int t = 0; t < trials; ++t) {
    s.guarded(t, [&] {
      const Index n = random_dim(s.rng, 2, 8);
      const SpdMatrix a = sampling::random_spd(s.rng, n);
      const SpdMatrix b = sampling::random_spd(s.rng, n);
      const double ap = alpha_procrustes(a, b, AlphaParam(0.5)).value;
      const double bw = 2.0 * bures_wasserstein(a, b).value;
      s.check(std::abs(ap - bw) <= tol.bw_relative * std::max(bw, 1.0), [&] {
        return fmt::format("trial {}: d_1/2={:.17g} 2*BW={:.17g} A={} B={}", t, ap, bw, show(a.matrix()),
                           show(b.matrix()));
      });
    });
  }
  return s.result;
}

// Triangle inequality and symmetry for one distance on random triples.
template <class Sample, class Distance, class Show>
SuiteResult triangle_suite(std::string name, std::uint64_t seed, int trials, const Tolerances& tol,
                           Sample sample, Distance distance, Show show_item) {
  SuiteRunner s(std::move(name), seed);
  for (int t = 0; t < trials; ++t) {
    s.guarded(t, [&] {
      const AlphaParam alpha = kAxiomAlphas[static_cast<size_t>(t) % kAxiomAlphas.size()];
      const Index n = random_dim(s.rng, 2, 5);
      const auto x = sample(s.rng, n);
      const auto y = sample(s.rng, n);
      const auto z = sample(s.rng, n);
      const double xy = distance(x, y, alpha);
      const double yz = distance(y, z, alpha);
      const double xz = distance(x, z, alpha);
      const double yx = distance(y, x, alpha);
      s.check(xy + yz - xz >= -tol.triangle_slack && xy >= 0.0, [&] {
        return fmt::format("trial {} alpha={}: d(x,y)+d(y,z)-d(x,z)={:.3e} x={} y={} z={}", t, show_alpha(alpha),
                           xy + yz - xz, show_item(x), show_item(y), show_item(z));
      });
      s.check(std::abs(xy - yx) <= tol.triangle_slack * std::max(1.0, xy), [&] {
        return fmt::format("trial {} alpha={}: d(x,y)={:.17g} d(y,x)={:.17g} x={} y={}", t, show_alpha(alpha), xy,
                           yx, show_item(x), show_item(y));
      });
    });
  }
  return s.result;
}

SuiteResult triangle_matrices(std::uint64_t seed, int trials, const Tolerances& tol) {
  return triangle_suite(
      "triangle inequality, SPD matrices", seed, trials, tol,
      [](Rng& rng, Index n) { return sampling::random_spd(rng, n); },
      [](const SpdMatrix& a, const SpdMatrix& b, AlphaParam alpha) { return alpha_procrustes(a, b, alpha).value; },
      [](const SpdMatrix& a) { return show(a.matrix()); });
}

SuiteResult triangle_gaussians(std::uint64_t seed, int trials, const Tolerances& tol) {
  return triangle_suite(
      "triangle inequality, Gaussian measures", seed, trials, tol,
      [](Rng& rng, Index n) { return GaussianMeasure(sampling::random_vector(rng, n), sampling::random_spd(rng, n)); },
      [](const GaussianMeasure& a, const GaussianMeasure& b, AlphaParam alpha) {
        return gaussian_alpha_distance(a, b, alpha);
      },
      [](const GaussianMeasure& g) {
        return fmt::format("N({}, {})", show(g.mean.transpose()), show(g.covariance.matrix()));
      });
}

SuiteResult triangle_regularized(std::uint64_t seed, int trials, const Tolerances& tol) {
  constexpr double kGamma = 0.1;
  return triangle_suite(
      "triangle inequality, regularized PSD", seed, trials, tol,
      [](Rng& rng, Index n) { return sampling::random_psd(rng, n, random_dim(rng, 1, n - 1)); },
      [](const SpdMatrix& a, const SpdMatrix& b, AlphaParam alpha) {
        return alpha_procrustes_regularized(a, b, kGamma, alpha).value;
      },
      [](const SpdMatrix& a) { return show(a.matrix()); });
}

SuiteResult alt_comparison(std::uint64_t seed, int trials, const Tolerances& tol) {
  SuiteRunner s("alpha procrustes <= power Euclidean", seed);
  const std::array<double, 5> alphas = {-1.0, 0.25, 0.5, 1.0, 2.0};
  for (int t = 0; t < trials; ++t) {
    s.guarded(t, [&] {
      const double alpha = alphas[static_cast<size_t>(t) % alphas.size()];
      const Index n = random_dim(s.rng, 2, 6);
      const SpdMatrix a = sampling::random_spd(s.rng, n);
      const SpdMatrix b = sampling::random_spd(s.rng, n);
      const double ap = alpha_procrustes(a, b, AlphaParam(alpha)).value;
      const double pe = power_euclidean(a, b, alpha).value;
      s.check(pe - ap > tol.alt_noncommuting_gap, [&] {
        return fmt::format("trial {} alpha={}: power-Euclidean - procrustes = {:.3e} A={} B={}", t, alpha, pe - ap,
                           show(a.matrix()), show(b.matrix()));
      });
      const auto [c, d] = sampling::random_commuting_pair(s.rng, n);
      const double cap = alpha_procrustes(c, d, AlphaParam(alpha)).value;
      const double cpe = power_euclidean(c, d, alpha).value;
      s.check(std::abs(cap - cpe) <= tol.alt_commuting_relative * std::max(cpe, 1.0), [&] {
        return fmt::format("trial {} alpha={}: commuting pair differs by {:.3e} A={} B={}", t, alpha, cap - cpe,
                           show(c.matrix()), show(d.matrix()));
      });
    });
  }
  return s.result;
}

SuiteResult log_limit(std::uint64_t seed, int trials, const Tolerances& tol) {
  SuiteRunner s("convergence to Log-Euclidean", seed);
  for (int t = 0; t < trials; ++t) {
    s.guarded(t, [&] {
      const Index n = random_dim(s.rng, 2, 6);
      const SpdMatrix a = sampling::random_spd(s.rng, n);
      const SpdMatrix b = sampling::random_spd(s.rng, n);
      const double le = log_euclidean(a, b).value;
      std::array<double, 3> gaps{};
      const std::array<double, 3> alphas = {1e-2, 1e-3, 1e-4};
      for (size_t k = 0; k < alphas.size(); ++k) {
        gaps[k] = std::abs(alpha_procrustes(a, b, AlphaParam(alphas[k])).value - le);
      }
      s.check(gaps[1] < gaps[0] && gaps[2] < gaps[1] && gaps[2] < tol.log_limit_relative * le, [&] {
        return fmt::format("trial {}: gaps {:.3e} {:.3e} {:.3e} d_logE={:.17g} A={} B={}", t, gaps[0], gaps[1],
                           gaps[2], le, show(a.matrix()), show(b.matrix()));
      });
    });
  }
  return s.result;
}

SuiteResult lyapunov(std::uint64_t seed, int trials, const Tolerances& tol) {
  SuiteRunner s("generalized Lyapunov residual", seed);
  std::uniform_real_distribution<double> alpha_dist(0.05, 1.5);
  std::bernoulli_distribution negate(0.25);
  for (int t = 0; t < trials; ++t) {
    s.guarded(t, [&] {
      const Index n = random_dim(s.rng, 2, 6);
      const SpdMatrix p0 = sampling::random_spd(s.rng, n);
      const SymMatrix y = sampling::random_symmetric(s.rng, n);
      const double alpha = negate(s.rng) ? -alpha_dist(s.rng) : alpha_dist(s.rng);
      const SymMatrix h = solve_general_lyapunov(p0, y, AlphaParam(alpha));
      const double residual = (lyapunov_forward_map(p0, h, alpha) - y).frobenius_norm();
      s.check(residual <= tol.lyapunov_residual * y.frobenius_norm(), [&] {
        return fmt::format("trial {} alpha={}: residual {:.3e} P0={} Y={}", t, alpha, residual, show(p0.matrix()),
                           show(y.matrix()));
      });
      const SymMatrix h_half = solve_general_lyapunov(p0, y, AlphaParam(0.5));
      const Matrix classic = h_half.matrix() * p0.matrix() + p0.matrix() * h_half.matrix();
      const double classic_residual = (classic - y.matrix()).norm();
      s.check(classic_residual <= 0.1 * tol.lyapunov_residual * y.frobenius_norm(), [&] {
        return fmt::format("trial {} alpha=0.5: |HP0+P0H-Y| = {:.3e} P0={} Y={}", t, classic_residual,
                           show(p0.matrix()), show(y.matrix()));
      });
    });
  }
  return s.result;
}

SuiteResult geodesic(std::uint64_t seed, int trials, const Tolerances& tol) {
  SuiteRunner s("geodesic endpoints and length", seed);
  const std::array<double, 3> alphas = {0.25, 0.5, 1.0};
  const int curves = std::max(1, trials / 10);
  for (int t = 0; t < curves; ++t) {
    s.guarded(t, [&] {
      const double alpha = alphas[static_cast<size_t>(t) % alphas.size()];
      const Index n = random_dim(s.rng, 2, 5);
      const SpdMatrix a = sampling::random_spd(s.rng, n);
      const SpdMatrix b = sampling::random_spd(s.rng, n);
      const GeodesicCurve curve(a, b, alpha);
      const double e0 = (curve.eval(0.0).matrix() - a.matrix()).norm() / a.matrix().norm();
      const double e1 = (curve.eval(1.0).matrix() - b.matrix()).norm() / b.matrix().norm();
      s.check(e0 <= tol.geodesic_endpoint && e1 <= tol.geodesic_endpoint, [&] {
        return fmt::format("trial {} alpha={}: endpoint errors {:.3e} {:.3e} A={} B={}", t, alpha, e0, e1,
                           show(a.matrix()), show(b.matrix()));
      });
      const double length = geodesic_length_numeric(curve, 500);
      const double d = alpha_procrustes(a, b, AlphaParam(alpha)).value;
      s.check(std::abs(length - d) <= tol.geodesic_length_relative * d, [&] {
        return fmt::format("trial {} alpha={}: length {:.17g} vs distance {:.17g} A={} B={}", t, alpha, length, d,
                           show(a.matrix()), show(b.matrix()));
      });
    });
  }
  return s.result;
}

}  // namespace

Tolerances Tolerances::broken() {
  Tolerances t;
  t.bw_relative = -1.0;
  t.triangle_slack = -1e6;
  t.alt_commuting_relative = -1.0;
  t.alt_noncommuting_gap = 1e6;
  t.log_limit_relative = -1.0;
  t.lyapunov_residual = -1.0;
  t.geodesic_endpoint = -1.0;
  t.geodesic_length_relative = -1.0;
  return t;
}

bool ValidationReport::passed() const {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& r) { return r.passed(); });
}

ValidationReport run_validation(const ValidationConfig& cfg) {
  if (cfg.trials < 1) throw Error(ErrorCode::DomainError, "trials must be >= 1");
  using Suite = SuiteResult (*)(std::uint64_t, int, const Tolerances&);
  const std::array<Suite, 8> suites = {bw_coincidence,    triangle_matrices, triangle_gaussians,
                                       triangle_regularized, alt_comparison, log_limit,
                                       lyapunov,          geodesic};
  ValidationReport report;
  for (size_t k = 0; k < suites.size(); ++k) {
    report.suites.push_back(suites[k](cfg.seed + 7919 * k, cfg.trials, cfg.tolerances));
  }
  return report;
}

void print_report(std::ostream& out, const ValidationReport& report) {
  out << fmt::format("{:<42} {:>7} {:>9}  {}\n", "property", "checks", "failures", "result");
  for (const SuiteResult& r : report.suites) {
    out << fmt::format("{:<42} {:>7} {:>9}  {}\n", r.name, r.checks, r.failures, r.passed() ? "PASS" : "FAIL");
  }
  for (const SuiteResult& r : report.suites) {
    if (!r.passed()) out << fmt::format("witness [{}]: {}\n", r.name, r.witness);
  }
  out << (report.passed() ? "all properties passed\n" : "some properties FAILED\n");
}

}  // namespace alpha_procrustes::validation
