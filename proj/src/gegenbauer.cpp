#include "pdk/gegenbauer.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include "pdk/errors.hpp"

namespace pdk {

double clamp_unit(double t) {
  if (!(std::abs(t) <= 1.0 + kClampWindow)) {
    std::ostringstream os;
    os.precision(17);
    os << "argument " << t << " outside [-1, 1]";
    throw std::domain_error(os.str());
  }
  return std::clamp(t, -1.0, 1.0);
}

Lambda::Lambda(double value) : value_(value) {
  if (!(value > -0.5) || !std::isfinite(value)) {
    throw std::invalid_argument("lambda must be a finite number > -1/2");
  }
}

Lambda Lambda::for_sphere(int d) {
  if (d < 1) throw std::invalid_argument("sphere dimension must be >= 1");
  return Lambda(0.5 * (d - 1));
}

std::string_view to_string(Parity p) noexcept { return p == Parity::even ? "even" : "any"; }

Parity parse_parity(std::string_view s) {
  if (s == "any") return Parity::any;
  if (s == "even") return Parity::even;
  throw std::invalid_argument("parity must be \"any\" or \"even\", got \"" + std::string(s) + "\"");
}

CoefficientSeries::CoefficientSeries(Lambda lambda, std::vector<double> coeffs, Parity parity)
    : lambda_(lambda), coeffs_(std::move(coeffs)), parity_(parity) {
  if (coeffs_.empty()) throw std::invalid_argument("coefficient series is empty");
  bool any_positive = false;
  for (std::size_t n = 0; n < coeffs_.size(); ++n) {
    const double a = coeffs_[n];
    if (!std::isfinite(a) || a < 0.0) {
      throw std::invalid_argument("coefficient a_" + std::to_string(n) +
                                  " is negative or not finite");
    }
    if (parity_ == Parity::even && n % 2 == 1 && a != 0.0) {
      throw std::invalid_argument("even series has nonzero odd coefficient a_" +
                                  std::to_string(n));
    }
    any_positive = any_positive || a > 0.0;
  }
  if (!any_positive) throw std::invalid_argument("coefficient series has no positive entry");
}

std::vector<int> CoefficientSeries::support() const {
  std::vector<int> out;
  for (std::size_t n = 0; n < coeffs_.size(); ++n) {
    if (coeffs_[n] > 0.0) out.push_back(static_cast<int>(n));
  }
  return out;
}

bool CoefficientSeries::even_support() const {
  for (std::size_t n = 1; n < coeffs_.size(); n += 2) {
    if (coeffs_[n] > 0.0) return false;
  }
  return true;
}

bool CoefficientSeries::single_parity() const {
  const auto s = support();
  const int top = s.back();
  return std::all_of(s.begin(), s.end(), [top](int n) { return (top - n) % 2 == 0; });
}

double CoefficientSeries::operator()(double t) const { return series_eval(*this, t); }

double weight_normalization(Lambda lambda) {
  const double l = lambda.value();
  return std::exp(std::lgamma(l + 1.0) - std::lgamma(0.5) - std::lgamma(l + 0.5));
}

double gegenbauer(Lambda lambda, int n, double t) {
  if (n < 0) throw std::invalid_argument("degree must be >= 0");
  t = clamp_unit(t);
  if (n == 0) return 1.0;
  const double l = lambda.value();
  double prev = 1.0;
  double cur = 2.0 * l * t;
  for (int k = 1; k < n; ++k) {
    const double next = (2.0 * (k + l) * t * cur - (k + 2.0 * l - 1.0) * prev) / (k + 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

double gegenbauer_at_one(Lambda lambda, int n) {
  if (n < 0) throw std::invalid_argument("degree must be >= 0");
  const double two_l = 2.0 * lambda.value();
  double value = 1.0;
  for (int k = 0; k < n; ++k) value *= (two_l + k) / (k + 1);
  return value;
}

namespace {

void require_positive(Lambda lambda) {
  if (!lambda.positive()) throw std::invalid_argument("lambda must be > 0 here");
}

// Off-diagonal entries of the Jacobi matrix for the normalized weight:
// beta_k = k (k + 2 lambda - 1) / (4 (k + lambda) (k + lambda - 1)).
double recurrence_beta(double l, int k) {
  if (k == 1) return 1.0 / (2.0 * (1.0 + l));
  return k * (k + 2.0 * l - 1.0) / (4.0 * (k + l) * (k + l - 1.0));
}

}  // namespace

double zonal(Lambda lambda, int n, double t) {
  require_positive(lambda);
  const double l = lambda.value();
  return (n + l) / l * gegenbauer(lambda, n, t);
}

double gegenbauer_norm(Lambda lambda, int n) {
  require_positive(lambda);
  const double l = lambda.value();
  return l / (n + l) * gegenbauer_at_one(lambda, n);
}

std::size_t default_node_count(int max_degree) {
  return std::max<std::size_t>(2 * static_cast<std::size_t>(std::max(max_degree, 0)) + 1, 64);
}

QuadratureRule gauss_rule(Lambda lambda, std::size_t num_nodes) {
  require_positive(lambda);
  if (num_nodes == 0) throw std::invalid_argument("gauss_rule needs at least one node");
  const double l = lambda.value();
  const auto n = static_cast<Eigen::Index>(num_nodes);

  std::vector<double> sqrt_beta(num_nodes);
  for (std::size_t k = 1; k < num_nodes; ++k) {
    sqrt_beta[k] = std::sqrt(recurrence_beta(l, static_cast<int>(k)));
  }

  // Golub-Welsch for starting values.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(std::max<Eigen::Index>(n - 1, 0));
  for (Eigen::Index k = 0; k + 1 < n; ++k) sub[k] = sqrt_beta[static_cast<std::size_t>(k + 1)];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("gauss_rule: tridiagonal eigensolver failed");
  }

  // Orthonormal q_0..q_{m-1} at x, plus q_m and q_m'.
  auto evaluate = [&](double x, double& qm, double& dqm, double& sum_sq) {
    double q_prev = 0.0, q = 1.0, dq_prev = 0.0, dq = 0.0;
    sum_sq = 1.0;
    for (std::size_t k = 0; k + 1 <= num_nodes; ++k) {
      const double b_next = k + 1 < num_nodes ? sqrt_beta[k + 1]
                                              : std::sqrt(recurrence_beta(l, static_cast<int>(k + 1)));
      const double b_cur = k == 0 ? 0.0 : sqrt_beta[k];
      const double q_next = (x * q - b_cur * q_prev) / b_next;
      const double dq_next = (q + x * dq - b_cur * dq_prev) / b_next;
      q_prev = q;
      q = q_next;
      dq_prev = dq;
      dq = dq_next;
      if (k + 1 < num_nodes) sum_sq += q * q;
    }
    qm = q;
    dqm = dq;
  };

  QuadratureRule rule{lambda, std::vector<double>(num_nodes), std::vector<double>(num_nodes)};
  const auto& guess = solver.eigenvalues();
  for (std::size_t i = 0; i < num_nodes; ++i) {
    double x = guess[static_cast<Eigen::Index>(i)];
    double qm = 0.0, dqm = 0.0, sum_sq = 1.0;
    bool converged = false;
    for (int iter = 0; iter < 100; ++iter) {
      evaluate(x, qm, dqm, sum_sq);
      const double step = qm / dqm;
      x -= step;
      if (std::abs(step) <= 2.0 * std::numeric_limits<double>::epsilon()) {
        converged = true;
        break;
      }
    }
    if (!converged && std::abs(qm / dqm) > 1e-13) {
      throw NumericalError("gauss_rule: Newton iteration did not converge for node " +
                           std::to_string(i));
    }
    evaluate(x, qm, dqm, sum_sq);
    rule.nodes[i] = x;
    rule.weights[i] = 1.0 / sum_sq;
  }

  // The weight is even, so the rule is symmetric about 0.
  for (std::size_t i = 0, j = num_nodes - 1; i < j; ++i, --j) {
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    rule.weights[i] = rule.weights[j] = w;
  }
  if (num_nodes % 2 == 1) rule.nodes[num_nodes / 2] = 0.0;
  return rule;
}

bool Projection::even() const {
  for (std::size_t n = 1; n < coeffs.size(); n += 2) {
    if (std::abs(coeffs[n]) > tolerance) return false;
  }
  return true;
}

CoefficientSeries Projection::to_series(Parity parity) const {
  std::vector<double> cleaned(coeffs.size());
  for (std::size_t n = 0; n < coeffs.size(); ++n) {
    double a = coeffs[n];
    if (a < -tolerance) {
      throw std::domain_error("coefficient a_" + std::to_string(n) +
                              " is negative: function is not positive definite");
    }
    if (std::abs(a) <= tolerance) a = 0.0;
    if (parity == Parity::even && n % 2 == 1) {
      if (a != 0.0) {
        throw std::domain_error("odd coefficient a_" + std::to_string(n) +
                                " is nonzero: function is not even");
      }
    }
    cleaned[n] = a;
  }
  return CoefficientSeries(lambda, std::move(cleaned), parity);
}

Projection project_coefficients(const std::function<double(double)>& f, Lambda lambda,
                                int max_degree, const QuadratureRule& rule) {
  require_positive(lambda);
  if (max_degree < 0) throw std::invalid_argument("max_degree must be >= 0");
  if (!(rule.lambda == lambda)) throw std::invalid_argument("quadrature rule lambda mismatch");
  if (rule.exact_degree() < 2 * max_degree) {
    throw std::invalid_argument("quadrature rule with " + std::to_string(rule.size()) +
                                " nodes is not exact to degree " + std::to_string(2 * max_degree));
  }
  const double l = lambda.value();
  const auto m = static_cast<std::size_t>(max_degree);
  std::vector<long double> acc(m + 1, 0.0L);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double t = rule.nodes[i];
    const double ft = f(t);
    if (std::isnan(ft)) {
      std::ostringstream os;
      os.precision(17);
      os << "function returned NaN at t = " << t;
      throw std::domain_error(os.str());
    }
    const long double wf = static_cast<long double>(rule.weights[i]) * ft;
    long double prev = 1.0L, cur = 2.0L * l * t;
    acc[0] += wf;
    if (m >= 1) acc[1] += wf * cur;
    for (std::size_t k = 1; k < m; ++k) {
      const long double next =
          (2.0L * (k + l) * t * cur - (k + 2.0L * l - 1.0L) * prev) / static_cast<long double>(k + 1);
      prev = cur;
      cur = next;
      acc[k + 1] += wf * cur;
    }
  }

  Projection out{lambda, std::vector<double>(m + 1), {}, 0.0};
  double scale = 0.0;
  for (std::size_t n = 0; n <= m; ++n) {
    out.coeffs[n] = static_cast<double>(acc[n]) / gegenbauer_norm(lambda, static_cast<int>(n));
    scale = std::max(scale, std::abs(out.coeffs[n]));
  }
  out.tolerance = 1e-12 * scale;
  for (std::size_t n = 0; n <= m; ++n) {
    if (out.coeffs[n] < -out.tolerance) out.negative_degrees.push_back(static_cast<int>(n));
  }
  return out;
}

Projection project_coefficients(const std::function<double(double)>& f, Lambda lambda,
                                int max_degree) {
  return project_coefficients(f, lambda, max_degree,
                              gauss_rule(lambda, default_node_count(max_degree)));
}

double series_eval(const CoefficientSeries& series, double t) {
  t = clamp_unit(t);
  const auto& a = series.coeffs();
  const double l = series.lambda().value();
  // C_{k+1} = alpha_k C_k + beta_k C_{k-1}
  auto alpha = [&](int k) { return 2.0 * (k + l) * t / (k + 1); };
  auto beta = [&](int k) { return -(k + 2.0 * l - 1.0) / (k + 1); };
  double b1 = 0.0, b2 = 0.0;
  for (int k = static_cast<int>(a.size()) - 1; k >= 0; --k) {
    const double b0 = a[static_cast<std::size_t>(k)] + alpha(k) * b1 + beta(k + 1) * b2;
    b2 = b1;
    b1 = b0;
  }
  return b1;
}

}  // namespace pdk
