#include "alpha_procrustes/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "alpha_procrustes/csv_io.hpp"
#include "alpha_procrustes/gaussian_measures.hpp"
#include "alpha_procrustes/riemannian_geometry.hpp"
#include "alpha_procrustes/rkhs_operators.hpp"
#include "alpha_procrustes/spd_metrics.hpp"
#include "alpha_procrustes/validation.hpp"

namespace alpha_procrustes::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kSchema = 1;

// Values are rounded to 12 significant digits before serialization so that
// output is byte-stable across platforms and runs.
double rounded(double v) {
  if (v == 0.0) return 0.0;
  return std::stod(fmt::format("{:.12g}", v));
}

Json alpha_json(AlphaParam a) { return a.is_log_limit() ? Json("log-limit") : Json(rounded(a.value())); }

std::string alpha_text(AlphaParam a) { return a.is_log_limit() ? "log-limit" : csv::format_number(a.value()); }

double parse_real(std::string_view text, std::string_view flag) {
  double v = 0.0;
  std::string_view t = text;
  if (!t.empty() && t.front() == '+') t.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
    throw Error(ErrorCode::ParseError, fmt::format("{}: '{}' is not a finite number", flag, text));
  }
  return v;
}

AlphaParam parse_alpha(std::string_view text) {
  if (text == "log-limit") return AlphaParam::log_limit();
  return AlphaParam(parse_real(text, "--alpha"));
}

double parse_gamma(std::string_view text) {
  const double g = parse_real(text, "--gamma");
  if (g < 0.0) throw Error(ErrorCode::ParseError, "--gamma must be >= 0");
  return g;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  if (s.empty()) return parts;
  while (true) {
    const size_t pos = s.find(sep);
    parts.emplace_back(s.substr(0, pos));
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return parts;
}

struct Output {
  std::string format = "json";
  std::string path;

  void add_flags(CLI::App* cmd) {
    cmd->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--output,-o", path, "write results here instead of stdout");
  }

  bool json() const { return format == "json"; }

  void write(std::ostream& out, const std::string& text) const {
    if (path.empty()) {
      out << text;
      return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw Error(ErrorCode::ParseError, fmt::format("cannot open '{}' for writing", path));
    file << text;
  }
};

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(rounded(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

SpdMatrix read_spd(const std::string& path) { return SpdMatrix::psd(csv::read_symmetric_file(path)); }

// ---- dist / sweep -----------------------------------------------------------

struct MatrixPair {
  std::string a_path;
  std::string b_path;

  void add_flags(CLI::App* cmd) {
    cmd->add_option("A", a_path, "first matrix CSV")->required();
    cmd->add_option("B", b_path, "second matrix CSV")->required();
  }
};

double metric_value(const std::string& metric, const SpdMatrix& a, const SpdMatrix& b, AlphaParam alpha,
                    double gamma) {
  if (metric == "alpha-procrustes") {
    return gamma > 0.0 ? alpha_procrustes_regularized(a, b, gamma, alpha).value
                       : alpha_procrustes(a, b, alpha).value;
  }
  const SpdMatrix as = gamma > 0.0 ? shift_identity(a, gamma) : a;
  const SpdMatrix bs = gamma > 0.0 ? shift_identity(b, gamma) : b;
  if (metric == "bures-wasserstein") return bures_wasserstein(as, bs).value;
  if (metric == "log-euclidean") return log_euclidean(as, bs).value;
  if (alpha.is_log_limit()) return log_euclidean(as, bs).value;
  return power_euclidean(as, bs, alpha.value()).value;
}

struct DistCommand {
  MatrixPair files;
  Output output;
  std::string metric = "alpha-procrustes";
  std::string alpha = "0.5";
  std::string gamma = "0";

  void attach(CLI::App& app) {
    CLI::App* cmd = app.add_subcommand("dist", "distance between two SPD/PSD matrices");
    files.add_flags(cmd);
    output.add_flags(cmd);
    cmd->add_option("--metric", metric)
        ->check(CLI::IsMember({"alpha-procrustes", "bures-wasserstein", "log-euclidean", "power-euclidean"}));
    cmd->add_option("--alpha", alpha, "real number or log-limit (default 0.5)");
    cmd->add_option("--gamma", gamma, "regularization gamma >= 0 (default 0)");
  }

  int run(std::ostream& out) const {
    const AlphaParam a = parse_alpha(alpha);
    const double g = parse_gamma(gamma);
    const SpdMatrix ma = read_spd(files.a_path);
    const SpdMatrix mb = read_spd(files.b_path);
    const double d = metric_value(metric, ma, mb, a, g);
    const bool uses_alpha = metric == "alpha-procrustes" || metric == "power-euclidean";
    if (output.json()) {
      Json j;
      j["schema"] = kSchema;
      j["command"] = "dist";
      j["metric"] = metric;
      j["alpha"] = uses_alpha ? alpha_json(a) : Json(nullptr);
      j["gamma"] = rounded(g);
      j["distance"] = rounded(d);
      output.write(out, dump(j));
    } else {
      output.write(out, fmt::format("metric,alpha,gamma,distance\n{},{},{},{}\n", metric,
                                    uses_alpha ? alpha_text(a) : "", csv::format_number(g),
                                    csv::format_number(d)));
    }
    return kOk;
  }
};

struct SweepCommand {
  MatrixPair files;
  Output output{"csv", {}};
  std::string alphas;
  std::string range;
  std::string gamma = "0";
  CLI::App* cmd = nullptr;

  void attach(CLI::App& app) {
    cmd = app.add_subcommand("sweep", "alpha procrustes distance over a grid of alpha values");
    files.add_flags(cmd);
    output.add_flags(cmd);
    auto* list = cmd->add_option("--alphas", alphas, "comma-separated alphas (numbers or log-limit)");
    auto* grid = cmd->add_option("--alpha-range", range, "lo:hi:steps, evenly spaced");
    list->excludes(grid);
    cmd->add_option("--gamma", gamma, "regularization gamma >= 0 (default 0)");
  }

  std::vector<AlphaParam> grid_values() const {
    std::vector<AlphaParam> values;
    if (cmd->count("--alphas") > 0) {
      for (const std::string& item : split(alphas, ',')) values.push_back(parse_alpha(item));
    } else if (cmd->count("--alpha-range") > 0) {
      const auto parts = split(range, ':');
      if (parts.size() != 3) throw Error(ErrorCode::ParseError, "--alpha-range expects lo:hi:steps");
      const double lo = parse_real(parts[0], "--alpha-range");
      const double hi = parse_real(parts[1], "--alpha-range");
      const double steps = parse_real(parts[2], "--alpha-range");
      if (steps < 1 || steps != std::floor(steps) || hi < lo) {
        throw Error(ErrorCode::ParseError, "--alpha-range needs lo <= hi and an integer steps >= 1");
      }
      const int count = static_cast<int>(steps);
      for (int k = 0; k < count; ++k) {
        const double v = count == 1 ? lo : lo + (hi - lo) * k / (count - 1);
        const AlphaParam a(v);
        if (!a.is_log_limit()) values.push_back(a);
      }
      if (lo <= 0.0 && hi >= 0.0) values.push_back(AlphaParam::log_limit());
    }
    if (values.empty()) throw Error(ErrorCode::ParseError, "sweep needs a nonempty --alphas or --alpha-range");
    return values;
  }

  int run(std::ostream& out) const {
    const std::vector<AlphaParam> values = grid_values();
    const double g = parse_gamma(gamma);
    const SpdMatrix ma = read_spd(files.a_path);
    const SpdMatrix mb = read_spd(files.b_path);
    std::vector<double> distances;
    for (const AlphaParam& a : values) distances.push_back(metric_value("alpha-procrustes", ma, mb, a, g));
    if (output.json()) {
      Json j;
      j["schema"] = kSchema;
      j["command"] = "sweep";
      j["gamma"] = rounded(g);
      Json rows = Json::array();
      for (size_t k = 0; k < values.size(); ++k) {
        rows.push_back(Json{{"alpha", alpha_json(values[k])}, {"distance", rounded(distances[k])}});
      }
      j["rows"] = rows;
      output.write(out, dump(j));
    } else {
      std::string text = "alpha,distance\n";
      for (size_t k = 0; k < values.size(); ++k) {
        text += fmt::format("{},{}\n", alpha_text(values[k]), csv::format_number(distances[k]));
      }
      output.write(out, text);
    }
    return kOk;
  }
};

// ---- geodesic ---------------------------------------------------------------

struct GeodesicCommand {
  MatrixPair files;
  Output output;
  std::string alpha = "0.5";
  int t_steps = 10;
  bool report_length = false;
  int length_steps = 2000;

  void attach(CLI::App& app) {
    CLI::App* cmd = app.add_subcommand("geodesic", "sample the alpha geodesic from A to B");
    files.add_flags(cmd);
    output.add_flags(cmd);
    cmd->add_option("--alpha", alpha, "nonzero real (default 0.5)");
    cmd->add_option("--t-steps", t_steps, "number of intervals; emits t-steps + 1 matrices");
    cmd->add_flag("--report-length", report_length, "append the numerically integrated length");
    cmd->add_option("--length-steps", length_steps, "quadrature steps for --report-length (default 2000)");
  }

  int run(std::ostream& out) const {
    if (t_steps < 1) throw Error(ErrorCode::ParseError, "--t-steps must be >= 1");
    if (report_length && length_steps < 100) throw Error(ErrorCode::ParseError, "--length-steps must be >= 100");
    const AlphaParam a = parse_alpha(alpha);
    if (a.is_log_limit()) throw Error(ErrorCode::DomainError, "geodesic needs alpha != 0");
    const GeodesicCurve curve(read_spd(files.a_path), read_spd(files.b_path), a.value());
    std::vector<double> ts;
    std::vector<Matrix> points;
    for (int k = 0; k <= t_steps; ++k) {
      const double t = k == t_steps ? 1.0 : static_cast<double>(k) / t_steps;
      ts.push_back(t);
      points.push_back(curve.eval(t).matrix());
    }
    const double length = report_length ? geodesic_length_numeric(curve, length_steps) : 0.0;
    if (output.json()) {
      Json j;
      j["schema"] = kSchema;
      j["command"] = "geodesic";
      j["alpha"] = alpha_json(a);
      Json samples = Json::array();
      for (size_t k = 0; k < ts.size(); ++k) {
        samples.push_back(Json{{"t", rounded(ts[k])}, {"matrix", matrix_json(points[k])}});
      }
      j["points"] = samples;
      if (report_length) j["length"] = rounded(length);
      output.write(out, dump(j));
    } else {
      std::ostringstream text;
      for (size_t k = 0; k < ts.size(); ++k) {
        if (k > 0) text << '\n';
        text << "# t=" << csv::format_number(ts[k]) << '\n';
        csv::write_matrix(text, points[k]);
      }
      if (report_length) text << "\n# length=" << csv::format_number(length) << '\n';
      output.write(out, text.str());
    }
    return kOk;
  }
};

// ---- gauss-dist -------------------------------------------------------------

struct GaussCommand {
  std::string mean1, cov1, mean2, cov2, weights;
  Output output;
  std::string metric = "alpha-procrustes";
  std::string alpha = "0.5";
  std::string gamma = "0";

  void attach(CLI::App& app) {
    CLI::App* cmd = app.add_subcommand("gauss-dist", "distance between two Gaussian measures");
    cmd->add_option("--mean1", mean1, "mean vector CSV")->required();
    cmd->add_option("--cov1", cov1, "covariance CSV")->required();
    cmd->add_option("--mean2", mean2, "mean vector CSV")->required();
    cmd->add_option("--cov2", cov2, "covariance CSV")->required();
    cmd->add_option("--mean-weights", weights, "diagonal weights of the mean metric (CSV)");
    cmd->add_option("--metric", metric)->check(CLI::IsMember({"alpha-procrustes", "wasserstein"}));
    cmd->add_option("--alpha", alpha, "real number or log-limit (default 0.5)");
    cmd->add_option("--gamma", gamma, "regularization gamma >= 0 (default 0)");
    output.add_flags(cmd);
  }

  int run(std::ostream& out) const {
    const AlphaParam a = parse_alpha(alpha);
    const double g = parse_gamma(gamma);
    const GaussianMeasure g1(csv::read_vector_file(mean1), read_spd(cov1));
    const GaussianMeasure g2(csv::read_vector_file(mean2), read_spd(cov2));
    const MeanMetricSpec mm =
        weights.empty() ? MeanMetricSpec::euclidean() : MeanMetricSpec::weighted(csv::read_vector_file(weights));
    double d = 0.0;
    if (metric == "wasserstein") {
      d = g > 0.0 ? wasserstein_gaussian(GaussianMeasure(g1.mean, shift_identity(g1.covariance, g)),
                                         GaussianMeasure(g2.mean, shift_identity(g2.covariance, g)))
                  : wasserstein_gaussian(g1, g2);
    } else {
      d = g > 0.0 ? gaussian_alpha_distance_regularized(g1, g2, a, g, mm) : gaussian_alpha_distance(g1, g2, a, mm);
    }
    const bool uses_alpha = metric == "alpha-procrustes";
    if (output.json()) {
      Json j;
      j["schema"] = kSchema;
      j["command"] = "gauss-dist";
      j["metric"] = metric;
      j["alpha"] = uses_alpha ? alpha_json(a) : Json(nullptr);
      j["gamma"] = rounded(g);
      j["distance"] = rounded(d);
      output.write(out, dump(j));
    } else {
      output.write(out, fmt::format("metric,alpha,gamma,distance\n{},{},{},{}\n", metric,
                                    uses_alpha ? alpha_text(a) : "", csv::format_number(g),
                                    csv::format_number(d)));
    }
    return kOk;
  }
};

// ---- rkhs-dist --------------------------------------------------------------

struct RkhsCommand {
  std::string x_path, y_path;
  Output output;
  std::string kernel = "linear";
  std::string metric = "alpha-procrustes";
  std::string alpha = "0.5";
  std::string gamma = "0";
  bool header = false;

  void attach(CLI::App& app) {
    CLI::App* cmd = app.add_subcommand("rkhs-dist", "distance between RKHS Gaussians of two datasets");
    cmd->add_option("X", x_path, "dataset CSV, one sample per row")->required();
    cmd->add_option("Y", y_path, "dataset CSV, one sample per row")->required();
    cmd->add_option("--kernel", kernel, "linear | poly:d=<int>,c=<real> | rbf:sigma=<real>");
    cmd->add_option("--metric", metric)->check(CLI::IsMember({"alpha-procrustes", "wasserstein"}));
    cmd->add_option("--alpha", alpha, "real number or log-limit (default 0.5)");
    cmd->add_option("--gamma", gamma, "regularization gamma >= 0; 0 uses the unregularized Gram form");
    cmd->add_flag("--header", header, "skip the first row of each dataset");
    output.add_flags(cmd);
  }

  int run(std::ostream& out) const {
    const KernelSpec k = KernelSpec::parse(kernel);
    const AlphaParam a = parse_alpha(alpha);
    const double g = parse_gamma(gamma);
    const Dataset x(csv::read_table_file(x_path, header));
    const Dataset y(csv::read_table_file(y_path, header));
    const GramBundle gb = gram_bundle(x, y, k);
    RkhsGaussianTerms terms{};
    if (metric == "wasserstein") {
      terms.total = rkhs_wasserstein(gb);
      terms.mean_term = mean_discrepancy_squared(gb);
      terms.covariance_term = std::max(terms.total * terms.total - terms.mean_term, 0.0);
    } else {
      terms = rkhs_gaussian_terms(gb, a, g);
    }
    const bool uses_alpha = metric == "alpha-procrustes";
    if (output.json()) {
      Json j;
      j["schema"] = kSchema;
      j["command"] = "rkhs-dist";
      j["metric"] = metric;
      j["kernel"] = k.to_string();
      j["alpha"] = uses_alpha ? alpha_json(a) : Json(nullptr);
      j["gamma"] = uses_alpha ? Json(rounded(g)) : Json(nullptr);
      j["mean_term"] = rounded(terms.mean_term);
      j["covariance_term"] = rounded(terms.covariance_term);
      j["distance"] = rounded(terms.total);
      output.write(out, dump(j));
    } else {
      output.write(out, fmt::format("metric,kernel,alpha,gamma,mean_term,covariance_term,distance\n"
                                    "{},{},{},{},{},{},{}\n",
                                    metric, k.to_string(), uses_alpha ? alpha_text(a) : "",
                                    uses_alpha ? csv::format_number(g) : "", csv::format_number(terms.mean_term),
                                    csv::format_number(terms.covariance_term), csv::format_number(terms.total)));
    }
    return kOk;
  }
};

// ---- validate ---------------------------------------------------------------

struct ValidateCommand {
  std::uint64_t seed = validation::ValidationConfig{}.seed;
  int trials = validation::ValidationConfig{}.trials;
  bool broken = false;

  void attach(CLI::App& app) {
    CLI::App* cmd = app.add_subcommand("validate", "run the randomized property suites");
    cmd->add_option("--seed", seed, "random seed");
    cmd->add_option("--trials", trials, "trials per property (default 50)");
    cmd->add_flag("--inject-broken-tolerance", broken)->group("");
  }

  int run(std::ostream& out) const {
    if (trials < 1) throw Error(ErrorCode::ParseError, "--trials must be >= 1");
    validation::ValidationConfig cfg;
    cfg.seed = seed;
    cfg.trials = trials;
    if (broken) cfg.tolerances = validation::Tolerances::broken();
    const validation::ValidationReport report = validation::run_validation(cfg);
    out << fmt::format("seed {} trials {}\n", seed, trials);
    validation::print_report(out, report);
    return report.passed() ? kOk : kValidationFailed;
  }
};

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::NonFinite:
      return kUsage;
    case ErrorCode::ComplexSpectrum:
      return kComplexSpectrum;
    default:
      return kDomain;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app("Alpha Procrustes distances between SPD matrices, Gaussian measures and RKHS covariance operators",
               "alpha_proc");
  app.require_subcommand(1);
  DistCommand dist;
  SweepCommand sweep;
  GeodesicCommand geodesic;
  GaussCommand gauss;
  RkhsCommand rkhs;
  ValidateCommand validate;
  dist.attach(app);
  sweep.attach(app);
  geodesic.attach(app);
  gauss.attach(app);
  rkhs.attach(app);
  validate.attach(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (app.got_subcommand("dist")) return dist.run(out);
    if (app.got_subcommand("sweep")) return sweep.run(out);
    if (app.got_subcommand("geodesic")) return geodesic.run(out);
    if (app.got_subcommand("gauss-dist")) return gauss.run(out);
    if (app.got_subcommand("rkhs-dist")) return rkhs.run(out);
    if (app.got_subcommand("validate")) return validate.run(out);
  } catch (const Error& e) {
    err << "alpha_proc: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "alpha_proc: " << e.what() << '\n';
    return kDomain;
  }
  return kUsage;
}

}  // namespace alpha_procrustes::cli
