#include "pdk/interpolation.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

#include "pdk/errors.hpp"
#include "pdk/io.hpp"
#include "pdk/kernels.hpp"

namespace pdk {

namespace {

constexpr double kResidualTol = 1e-10;
constexpr int kRefinementSteps = 2;
constexpr double kSuspectRcond = 1e-8;

}  // namespace

Interpolant::Interpolant(CoefficientSeries series, std::vector<DomainPoint> centers,
                         std::vector<double> weights, FitDiagnostics diagnostics)
    : series_(std::move(series)),
      centers_(std::move(centers)),
      weights_(std::move(weights)),
      diagnostics_(std::move(diagnostics)) {
  if (centers_.empty()) throw std::invalid_argument("interpolant needs at least one center");
  if (centers_.size() != weights_.size()) {
    throw std::invalid_argument("interpolant has " + std::to_string(centers_.size()) + " centers but " +
                                std::to_string(weights_.size()) + " weights");
  }
}

double Interpolant::operator()(const DomainPoint& p) const { return evaluate(*this, p); }

Interpolant fit(const CoefficientSeries& series, std::span<const DomainPoint> points,
                std::span<const double> values, const FitOptions& options) {
  if (points.empty()) throw std::invalid_argument("fit needs at least one point");
  if (points.size() != values.size()) {
    throw std::invalid_argument("fit: " + std::to_string(points.size()) + " points but " +
                                std::to_string(values.size()) + " values");
  }
  if (!(options.ridge >= 0.0)) throw std::invalid_argument("fit: ridge must be >= 0");
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if (distance(points[i], points[j]) <= kDistinctTol) {
        throw std::invalid_argument("fit: points " + std::to_string(i) + " and " + std::to_string(j) +
                                    " coincide");
      }
    }
  }

  Eigen::MatrixXd k = kernel_matrix(series, points).entries;
  if (options.ridge > 0.0) k.diagonal().array() += options.ridge;
  const Eigen::Map<const Eigen::VectorXd> b(values.data(), static_cast<Eigen::Index>(values.size()));

  auto reject = [&](double lo, double hi) {
    throw NotPositiveDefinite("fit: kernel matrix is not numerically positive definite (min eigenvalue " +
                                  format_double(lo) + ", max eigenvalue " + format_double(hi) + ")",
                              lo);
  };
  Eigen::LLT<Eigen::MatrixXd> llt(k);
  // A factorization can succeed on a singular matrix through rounding, so
  // ill-conditioned cases are confirmed against the PD tolerance.
  if (llt.info() != Eigen::Success || llt.rcond() < kSuspectRcond) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (llt.info() != Eigen::Success || lo <= default_pd_tol(k)) reject(lo, hi);
  }

  Eigen::VectorXd w = llt.solve(b);
  const double b_norm = b.norm();
  auto relative_residual = [&](const Eigen::VectorXd& r) { return b_norm > 0.0 ? r.norm() / b_norm : r.norm(); };
  Eigen::VectorXd r = b - k * w;
  for (int step = 0; step < kRefinementSteps && relative_residual(r) > kResidualTol; ++step) {
    w += llt.solve(r);
    r = b - k * w;
  }
  FitDiagnostics diag;
  diag.residual_norm = relative_residual(r);
  diag.condition_estimate = 1.0 / llt.rcond();
  diag.method = "cholesky";
  diag.ridge = options.ridge;
  if (diag.residual_norm > kResidualTol) {
    throw NumericalError("fit: relative residual " + format_double(diag.residual_norm) +
                         " exceeds 1e-10 (condition estimate " + format_double(diag.condition_estimate) + ")");
  }

  return Interpolant(series, std::vector<DomainPoint>(points.begin(), points.end()),
                     std::vector<double>(w.data(), w.data() + w.size()), std::move(diag));
}

double evaluate(const Interpolant& g, const DomainPoint& p) {
  const auto& centers = g.centers();
  const auto& weights = g.weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    sum += weights[i] * series_eval(g.series(), cos_distance(p, centers[i]));
  }
  return sum;
}

std::vector<double> evaluate(const Interpolant& g, std::span<const DomainPoint> points) {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(evaluate(g, p));
  return out;
}

}  // namespace pdk
