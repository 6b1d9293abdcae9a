#pragma once

/// Gegenbauer (ultraspherical) polynomials, their zonal kernels, Gauss rules
/// for the weight (1 - t^2)^(lambda - 1/2), and Fourier-Gegenbauer expansions.

#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

namespace pdk {

/// Inputs to functions on [-1, 1] are clamped when they overshoot by at most
/// this much; anything further out is a domain error.
inline constexpr double kClampWindow = 1e-12;

/// Clamps t into [-1, 1] if it lies within kClampWindow outside, throws
/// std::domain_error otherwise.
double clamp_unit(double t);

/// Gegenbauer parameter, lambda > -1/2.
class Lambda {
 public:
  explicit Lambda(double value);

  /// lambda = (d - 1) / 2 for the sphere S^d, d >= 1.
  static Lambda for_sphere(int d);

  double value() const noexcept { return value_; }
  /// True for lambda > 0, which zonal kernels and norms require.
  bool positive() const noexcept { return value_ > 0.0; }

  friend bool operator==(Lambda a, Lambda b) noexcept { return a.value_ == b.value_; }

 private:
  double value_;
};

enum class Parity { any, even };

std::string_view to_string(Parity p) noexcept;
Parity parse_parity(std::string_view s);

/// Truncated nonnegative Gegenbauer series f(t) = sum_n a_n C_n^lambda(t).
///
/// Invariants: every a_n >= 0, at least one a_n > 0, and a_n = 0 for odd n
/// when the parity is Parity::even. The coefficient vector is indexed by
/// degree. Immutable after construction.
class CoefficientSeries {
 public:
  CoefficientSeries(Lambda lambda, std::vector<double> coeffs, Parity parity = Parity::any);

  Lambda lambda() const noexcept { return lambda_; }
  const std::vector<double>& coeffs() const noexcept { return coeffs_; }
  Parity parity() const noexcept { return parity_; }
  int max_degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }

  /// Degrees n with a_n > 0.
  std::vector<int> support() const;
  /// True when all positive coefficients sit at even degrees.
  bool even_support() const;
  /// True when all positive coefficients share the parity of the top degree.
  bool single_parity() const;

  double operator()(double t) const;

 private:
  Lambda lambda_;
  std::vector<double> coeffs_;
  Parity parity_;
};

/// Gauss-Jacobi rule for c_lambda (1 - t^2)^(lambda - 1/2) dt on [-1, 1],
/// normalized so the weights sum to one.
struct QuadratureRule {
  Lambda lambda;
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
  /// Polynomials up to this degree integrate exactly.
  int exact_degree() const noexcept { return 2 * static_cast<int>(nodes.size()) - 1; }

  template <class F>
  double integrate(F&& f) const {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      acc += static_cast<long double>(weights[i]) * f(nodes[i]);
    }
    return static_cast<double>(acc);
  }
};

/// Normalizing constant of w_lambda: Gamma(lambda+1) / (Gamma(1/2) Gamma(lambda+1/2)).
double weight_normalization(Lambda lambda);

/// C_n^lambda(t) by the upward three-term recurrence.
double gegenbauer(Lambda lambda, int n, double t);

/// C_n^lambda(1) = (2 lambda)_n / n!.
double gegenbauer_at_one(Lambda lambda, int n);

/// Z_n^lambda(t) = (n + lambda) / lambda * C_n^lambda(t). Requires lambda > 0.
double zonal(Lambda lambda, int n, double t);

/// h_n^lambda = lambda / (n + lambda) * C_n^lambda(1), the squared norm of
/// C_n^lambda under the normalized weight.
double gegenbauer_norm(Lambda lambda, int n);

/// Default node count for projecting up to max_degree: max(2 M + 1, 64).
std::size_t default_node_count(int max_degree);

QuadratureRule gauss_rule(Lambda lambda, std::size_t num_nodes);

/// Raw Fourier-Gegenbauer coefficients of a function. Negative coefficients
/// are kept here and flagged; they mean the function is not positive definite.
struct Projection {
  Lambda lambda;
  std::vector<double> coeffs;
  std::vector<int> negative_degrees;
  double tolerance = 0.0;

  bool nonnegative() const noexcept { return negative_degrees.empty(); }
  /// Odd coefficients all within tolerance of zero.
  bool even() const;
  /// Clamps coefficients within tolerance of zero and builds the series.
  /// Throws std::domain_error if a coefficient is genuinely negative.
  CoefficientSeries to_series(Parity parity = Parity::any) const;
};

/// a_n = h_n^{-1} c_lambda int f(t) C_n^lambda(t) w_lambda(t) dt, n = 0..max_degree.
/// The rule must integrate degree 2 * max_degree exactly.
Projection project_coefficients(const std::function<double(double)>& f, Lambda lambda,
                                int max_degree, const QuadratureRule& rule);

/// Same, with gauss_rule(lambda, default_node_count(max_degree)).
Projection project_coefficients(const std::function<double(double)>& f, Lambda lambda,
                                int max_degree);

/// sum_n a_n C_n^lambda(t) by Clenshaw's backward recurrence.
double series_eval(const CoefficientSeries& series, double t);

}  // namespace pdk
