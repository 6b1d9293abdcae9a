#include "pdk/cli.hpp"

#include <cmath>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pdk/errors.hpp"
#include "pdk/interpolation.hpp"
#include "pdk/io.hpp"
#include "pdk/kernels.hpp"
#include "pdk/verification.hpp"

namespace pdk::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kNumerical = 2;

std::function<double(double)> builtin_function(const std::string& name) {
  if (name == "abs") return [](double t) { return std::abs(t); };
  if (name == "step-smooth") return [](double t) { return 0.5 * (1.0 + std::tanh(8.0 * t)); };
  if (name.rfind("poly:", 0) == 0) {
    std::vector<double> c;
    std::string_view rest(name);
    rest.remove_prefix(5);
    for (std::size_t i = 1; !rest.empty(); ++i) {
      const auto comma = rest.find(',');
      const std::string field(rest.substr(0, comma));
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(field, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != field.size() || !std::isfinite(v)) {
        throw std::invalid_argument("--fn: poly coefficient " + std::to_string(i) + " is not a number: '" + field +
                                    "'");
      }
      c.push_back(v);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (c.empty()) throw std::invalid_argument("--fn: poly needs at least one coefficient");
    return [c](double t) {
      double acc = 0.0;
      for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
      return acc;
    };
  }
  throw std::invalid_argument("--fn: unknown function '" + name + "' (abs, step-smooth, poly:c0,c1,...)");
}

nlohmann::json parse_json_file(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

CoefficientSeries load_series(const std::string& path) {
  try {
    return series_from_json(parse_json_file(path));
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    if (msg.rfind(path, 0) == 0) throw;
    throw ParseError(path + ": " + msg);
  }
}

PointSet load_points(const std::string& path) { return points_from_csv(read_file(path), path); }

ordered_json psd_json(const KernelMatrix& k, const PsdReport& r) {
  ordered_json j;
  j["domain"] = k.meta.domain;
  j["series_id"] = hex64(k.meta.series_id);
  j["points_hash"] = hex64(k.meta.points_hash);
  j["size"] = k.size();
  j["min_eigenvalue"] = r.min_eigenvalue;
  j["max_eigenvalue"] = r.max_eigenvalue;
  j["rank_estimate"] = r.rank_estimate;
  j["is_psd"] = r.is_psd;
  j["is_pd"] = r.is_pd;
  j["psd_tol"] = r.psd_tol;
  j["pd_tol"] = r.pd_tol;
  return j;
}

ordered_json model_json(const Interpolant& g) {
  ordered_json points = ordered_json::array();
  for (const auto& p : g.centers()) points.push_back(p.coords());
  ordered_json j;
  j["series"] = ordered_json::parse(series_to_json(g.series()).dump());
  j["centers"] = ordered_json{{"domain", g.domain().spec()}, {"points", std::move(points)}};
  j["centers_hash"] = hex64(points_hash(g.domain(), g.centers()));
  j["weights"] = g.weights();
  const auto& d = g.diagnostics();
  j["diagnostics"] = ordered_json{{"condition_estimate", d.condition_estimate},
                                  {"residual_norm", d.residual_norm},
                                  {"method", d.method},
                                  {"ridge", d.ridge}};
  return j;
}

Interpolant model_from_json(const nlohmann::json& j, const std::string& source) {
  auto fail = [&](const std::string& msg) { throw ParseError(source + ": " + msg); };
  if (!j.is_object()) fail("expected a JSON object");
  for (const char* key : {"series", "centers", "centers_hash", "weights"}) {
    if (!j.contains(key)) fail(std::string("missing field \"") + key + "\"");
  }
  CoefficientSeries series = [&] {
    try {
      return series_from_json(j["series"]);
    } catch (const ParseError& e) {
      fail(e.what());
    }
    throw std::logic_error("unreachable");
  }();
  const auto& centers = j["centers"];
  if (!centers.is_object() || !centers.contains("domain") || !centers.contains("points") ||
      !centers["domain"].is_string() || !centers["points"].is_array()) {
    fail("field \"centers\" needs a string \"domain\" and an array \"points\"");
  }
  const DomainId domain = parse_domain(centers["domain"].get<std::string>());
  std::vector<DomainPoint> pts;
  for (std::size_t i = 0; i < centers["points"].size(); ++i) {
    const auto& row = centers["points"][i];
    if (!row.is_array()) fail("centers.points[" + std::to_string(i) + "] is not an array");
    std::vector<double> c;
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (!row[k].is_number()) {
        fail("centers.points[" + std::to_string(i) + "][" + std::to_string(k) + "] is not a number");
      }
      c.push_back(row[k].get<double>());
    }
    try {
      pts.emplace_back(domain, std::move(c));
    } catch (const std::domain_error& e) {
      fail("centers.points[" + std::to_string(i) + "]: " + e.what());
    }
  }
  if (!j["centers_hash"].is_string()) fail("field \"centers_hash\" must be a string");
  const std::string expected = hex64(points_hash(domain, pts));
  if (j["centers_hash"].get<std::string>() != expected) {
    fail("centers_hash " + j["centers_hash"].get<std::string>() + " does not match the centers (" + expected + ")");
  }
  if (!j["weights"].is_array()) fail("field \"weights\" must be an array");
  std::vector<double> w;
  for (std::size_t i = 0; i < j["weights"].size(); ++i) {
    if (!j["weights"][i].is_number()) fail("weights[" + std::to_string(i) + "] is not a number");
    w.push_back(j["weights"][i].get<double>());
  }
  FitDiagnostics diag;
  if (j.contains("diagnostics") && j["diagnostics"].is_object()) {
    const auto& d = j["diagnostics"];
    diag.condition_estimate = d.value("condition_estimate", 0.0);
    diag.residual_norm = d.value("residual_norm", 0.0);
    diag.method = d.value("method", std::string());
    diag.ridge = d.value("ridge", 0.0);
  }
  return Interpolant(std::move(series), std::move(pts), std::move(w), std::move(diag));
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Positive definite kernels and interpolation on regular domains", "pdk"};
  app.require_subcommand(1);

  // expand
  auto* expand = app.add_subcommand("expand", "Gegenbauer coefficients of a builtin function");
  double lambda = 0.0;
  int degree = 0;
  std::string fn, out_path;
  std::optional<std::size_t> nodes;
  expand->add_option("--lambda", lambda, "Gegenbauer parameter, > -1/2")->required();
  expand->add_option("--degree", degree, "Largest degree")->required()->check(CLI::NonNegativeNumber);
  expand->add_option("--fn", fn, "abs, step-smooth or poly:c0,c1,... (monomial coefficients)")->required();
  expand->add_option("--nodes", nodes, "Quadrature nodes (default max(2*degree+1, 64))");
  expand->add_option("--out", out_path, "Output JSON")->required();

  // sample
  auto* sample_cmd = app.add_subcommand("sample", "Seeded random points on a domain");
  std::string domain_spec;
  std::size_t count = 0;
  std::uint64_t seed = 0;
  sample_cmd->add_option("--domain", domain_spec, "Domain spec, e.g. ball:d=2")->required();
  sample_cmd->add_option("--n", count, "Number of points")->required();
  sample_cmd->add_option("--seed", seed, "Random seed")->required();
  sample_cmd->add_option("--out", out_path, "Output CSV")->required();

  // distmat
  auto* distmat = app.add_subcommand("distmat", "Pairwise domain distances");
  std::string points_path;
  distmat->add_option("--points", points_path, "Point CSV")->required()->check(CLI::ExistingFile);
  distmat->add_option("--out", out_path, "Output CSV")->required();

  // kernel
  auto* kernel = app.add_subcommand("kernel", "Kernel matrix and positive definiteness report");
  std::string series_path, report_path;
  kernel->add_option("--series", series_path, "Series JSON")->required()->check(CLI::ExistingFile);
  kernel->add_option("--points", points_path, "Point CSV")->required()->check(CLI::ExistingFile);
  kernel->add_option("--out", out_path, "Output matrix CSV")->required();
  kernel->add_option("--report", report_path, "Output report JSON")->required();

  // interpolate
  auto* interpolate = app.add_subcommand("interpolate", "Fit a kernel interpolant");
  std::string values_path;
  double ridge = 0.0;
  interpolate->add_option("--series", series_path, "Series JSON")->required()->check(CLI::ExistingFile);
  interpolate->add_option("--points", points_path, "Center CSV")->required()->check(CLI::ExistingFile);
  interpolate->add_option("--values", values_path, "Data CSV, one value per row")
      ->required()
      ->check(CLI::ExistingFile);
  interpolate->add_option("--out", out_path, "Output model JSON")->required();
  interpolate->add_option("--ridge", ridge, "Diagonal ridge term (default 0)")->check(CLI::NonNegativeNumber);

  // evaluate
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Evaluate a fitted model");
  std::string model_path;
  evaluate_cmd->add_option("--model", model_path, "Model JSON")->required()->check(CLI::ExistingFile);
  evaluate_cmd->add_option("--points", points_path, "Point CSV")->required()->check(CLI::ExistingFile);
  evaluate_cmd->add_option("--out", out_path, "Output values CSV")->required();

  // verify
  auto* verify = app.add_subcommand("verify", "Run a verification suite, print one JSON line");
  std::string suite;
  std::size_t trials = 10000, samples = 0;
  int dim = 2, n_deg = -1, m_deg = -1;
  std::optional<int> v_degree;
  std::optional<std::size_t> v_points;
  verify->add_option("--suite", suite, "Suite name")
      ->required()
      ->check(CLI::IsMember({"distance", "quadrant-identity", "psd", "rank", "antipodal", "reproducing", "addition"}));
  verify->add_option("--seed", seed, "Random seed")->required();
  verify->add_option("--domain", domain_spec, "Domain spec (distance, psd, rank, addition)");
  verify->add_option("--trials", trials, "Trials (distance: 10000, psd: 20)");
  verify->add_option("--d", dim, "Sphere dimension (quadrant-identity, antipodal; default 2)");
  verify->add_option("--degree", v_degree,
                     "Degree: f = C_n (quadrant-identity, default 2), random series top degree (psd, default 20), "
                     "M (rank), n (addition, default 3), largest n, m (reproducing, default 4)");
  verify->add_option("--n", n_deg, "Reproducing: single degree n");
  verify->add_option("--m", m_deg, "Reproducing: single degree m");
  verify->add_option("--samples", samples,
                     "Samples (quadrant-identity and reproducing: 1000000, addition: 1000)");
  verify->add_option("--points", v_points, "Number of points (psd: 60, rank: bound+10, antipodal: 30)");
  verify->add_option("--series", series_path, "Series JSON (psd, antipodal)")->check(CLI::ExistingFile);
  verify->add_option("--out", out_path, "Also write the JSON line to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*expand) {
      const Lambda lam(lambda);
      const QuadratureRule rule = gauss_rule(lam, nodes ? *nodes : default_node_count(degree));
      const Projection proj = project_coefficients(builtin_function(fn), lam, degree, rule);
      ordered_json j;
      const Parity parity = proj.even() ? Parity::even : Parity::any;
      if (proj.nonnegative()) {
        j = ordered_json::parse(series_to_json(proj.to_series(parity)).dump());
      } else {
        j["lambda"] = lam.value();
        j["coeffs"] = proj.coeffs;
        j["parity"] = std::string(to_string(parity));
        err << "warning: coefficients at " << proj.negative_degrees.size()
            << " degrees are negative; the function is not positive definite\n";
      }
      j["nonnegative"] = proj.nonnegative();
      j["negative_degrees"] = proj.negative_degrees;
      j["nodes"] = rule.size();
      write_file_atomic(out_path, j.dump(2) + "\n");
    } else if (*sample_cmd) {
      const DomainId domain = parse_domain(domain_spec);
      const auto pts = pdk::sample(domain, count, seed);
      write_file_atomic(out_path, points_to_csv(domain, pts));
    } else if (*distmat) {
      const PointSet ps = load_points(points_path);
      const auto n = static_cast<Eigen::Index>(ps.points.size());
      Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index k = i + 1; k < n; ++k) {
          d(i, k) = d(k, i) = distance(ps.points[static_cast<std::size_t>(i)], ps.points[static_cast<std::size_t>(k)]);
        }
      }
      write_file_atomic(out_path, matrix_to_csv(d));
    } else if (*kernel) {
      const CoefficientSeries series = load_series(series_path);
      const PointSet ps = load_points(points_path);
      const KernelMatrix k = kernel_matrix(series, ps.points);
      const PsdReport rep = psd_check(k);
      write_file_atomic(out_path, matrix_to_csv(k.entries));
      write_file_atomic(report_path, psd_json(k, rep).dump(2) + "\n");
    } else if (*interpolate) {
      const CoefficientSeries series = load_series(series_path);
      const PointSet ps = load_points(points_path);
      const auto values = values_from_csv(read_file(values_path), values_path);
      const Interpolant g = fit(series, ps.points, values, FitOptions{ridge});
      write_file_atomic(out_path, model_json(g).dump(2) + "\n");
    } else if (*evaluate_cmd) {
      const Interpolant g = model_from_json(parse_json_file(model_path), model_path);
      const PointSet ps = load_points(points_path);
      if (!ps.domain.same_up_to_sheet(g.domain())) {
        throw std::invalid_argument(points_path + ": points on " + ps.domain.spec() + " but the model lives on " +
                                    g.domain().spec());
      }
      write_file_atomic(out_path, values_to_csv(pdk::evaluate(g, ps.points)));
    } else if (*verify) {
      auto need_domain = [&] {
        if (domain_spec.empty()) throw std::invalid_argument("verify --suite " + suite + " needs --domain");
        return parse_domain(domain_spec);
      };
      SuiteReport r;
      if (suite == "distance") {
        r = verify_distance_preservation(need_domain(), trials, seed);
      } else if (suite == "quadrant-identity") {
        r = verify_quadrant_integral_identity(dim, v_degree.value_or(2), samples ? samples : 1000000, seed);
      } else if (suite == "psd") {
        const DomainId domain = need_domain();
        const CoefficientSeries series = series_path.empty()
                                             ? random_series(domain, v_degree.value_or(20), derive_seed(seed, 1000))
                                             : load_series(series_path);
        const std::size_t psd_trials = verify->count("--trials") ? trials : 20;
        r = verify_psd_sufficiency(domain, series, psd_trials, v_points.value_or(60), seed);
      } else if (suite == "rank") {
        if (!v_degree) throw std::invalid_argument("verify --suite rank needs --degree");
        r = verify_rank_collapse(need_domain(), *v_degree, seed, v_points);
      } else if (suite == "antipodal") {
        std::optional<CoefficientSeries> series;
        if (series_path.empty()) {
          std::vector<double> a(21, 0.0);
          for (std::size_t i = 0; i < a.size(); i += 2) a[i] = 1.0;
          series.emplace(Lambda::for_sphere(dim), std::move(a), Parity::even);
        } else {
          series.emplace(load_series(series_path));
        }
        r = verify_antipodal_failure(dim, *series, seed, v_points.value_or(30));
      } else if (suite == "reproducing") {
        const std::size_t s = samples ? samples : 1000000;
        if ((n_deg >= 0) != (m_deg >= 0)) throw std::invalid_argument("verify --suite reproducing: give both --n and --m");
        r = n_deg >= 0 ? verify_reproducing(n_deg, m_deg, s, seed) : verify_reproducing_all(v_degree.value_or(4), s, seed);
      } else if (suite == "addition") {
        r = compare_addition_variants(need_domain(), v_degree.value_or(3), samples ? samples : 1000, seed);
      }
      const std::string line = r.json_line() + "\n";
      out << line;
      if (!out_path.empty()) write_file_atomic(out_path, line);
      return r.passed() ? kOk : kNumerical;
    }
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kOk;
}

int run(int argc, const char* const* argv) { return run(argc, argv, std::cout, std::cerr); }

}  // namespace pdk::cli
