#pragma once

#include <span>
#include <string>
#include <vector>

#include "pdk/domains.hpp"
#include "pdk/gegenbauer.hpp"

namespace pdk {

struct FitOptions {
  /// Optional ridge term added to the diagonal. Zero means plain interpolation.
  double ridge = 0.0;
};

struct FitDiagnostics {
  /// 1-norm condition estimate from the Cholesky factor, or the extreme
  /// eigenvalue ratio when the eigen path was taken.
  double condition_estimate = 0.0;
  /// ||K w - b|| / ||b|| (0 for b = 0).
  double residual_norm = 0.0;
  std::string method;
  double ridge = 0.0;
};

/// g(x) = sum_i w_i f(cos d(x, x_i)).
class Interpolant {
 public:
  Interpolant(CoefficientSeries series, std::vector<DomainPoint> centers, std::vector<double> weights,
              FitDiagnostics diagnostics);

  const CoefficientSeries& series() const noexcept { return series_; }
  const std::vector<DomainPoint>& centers() const noexcept { return centers_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const FitDiagnostics& diagnostics() const noexcept { return diagnostics_; }
  const DomainId& domain() const noexcept { return centers_.front().domain(); }

  double operator()(const DomainPoint& p) const;

 private:
  CoefficientSeries series_;
  std::vector<DomainPoint> centers_;
  std::vector<double> weights_;
  FitDiagnostics diagnostics_;
};

/// Solves f[Xi_N] w = b by Cholesky. Throws std::invalid_argument for
/// duplicate points or size mismatches and NotPositiveDefinite when the
/// kernel matrix cannot be factored or its smallest eigenvalue is at most
/// 1e-10 N max|a_ij|.
Interpolant fit(const CoefficientSeries& series, std::span<const DomainPoint> points,
                std::span<const double> values, const FitOptions& options = {});

double evaluate(const Interpolant& g, const DomainPoint& p);
std::vector<double> evaluate(const Interpolant& g, std::span<const DomainPoint> points);

}  // namespace pdk
