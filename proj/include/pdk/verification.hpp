#pragma once

// Seeded randomized suites that exercise the positive definiteness theory at
// desk scale. Every suite is deterministic for a given seed.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pdk/domains.hpp"
#include "pdk/gegenbauer.hpp"

namespace pdk {

struct SuiteReport {
  std::string suite;
  std::size_t trials = 0;
  std::size_t failures = 0;
  /// Largest violation measure seen, recorded on pass as well.
  double worst = 0.0;
  std::uint64_t seed = 0;
  /// Suite specific numbers (estimates, ranks). Not part of the JSON line.
  std::vector<std::pair<std::string, double>> details;

  bool passed() const noexcept { return failures == 0; }
  /// {"suite", "trials", "failures", "worst", "seed"}
  nlohmann::json to_json() const;
  std::string json_line() const;
};

/// Independent 64-bit stream seeds derived from one user seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// A random nonnegative series on the domain's lambda with top degree at most
/// max_degree: each coefficient is zero with probability 1/2, else uniform on
/// (0, 1]. Odd degrees stay zero where the domain needs even support.
CoefficientSeries random_series(const DomainId& domain, int max_degree, std::uint64_t seed);

/// Positive coefficients at degrees M, M-2, ..., zero elsewhere.
CoefficientSeries random_single_parity_series(const DomainId& domain, int top_degree, std::uint64_t seed);

/// |<embed p, embed q> - cos d(p, q)| <= 1e-12 over random pairs.
/// worst: largest gap.
SuiteReport verify_distance_preservation(const DomainId& domain, std::size_t trials, std::uint64_t seed);

/// Monte Carlo check that E_{S^d} f(xi_{d+1}) equals the mean of f(<xi, eta>)
/// over pairs from the upper hemisphere, f = C_n^{(d-1)/2}. Fails when the
/// two means differ by more than 4 combined standard errors, or for n >= 2
/// when either mean is more than 4 standard errors away from 0.
/// worst: largest z-score among those checks.
SuiteReport verify_quadrant_integral_identity(int d, int n_even, std::size_t samples, std::uint64_t seed);

/// Every sampled kernel matrix passes is_psd at the default tolerance.
/// worst: largest -min_eigenvalue / (N max|a_ij|), 0 when all are >= 0.
SuiteReport verify_psd_sufficiency(const DomainId& domain, const CoefficientSeries& series,
                                   std::size_t trials, std::size_t n_points, std::uint64_t seed);

/// Random single-parity series of top degree M on N = rank_bound + 10 points
/// (or n_points): requires rank_estimate <= rank_bound and is_pd false.
/// worst: rank_estimate.
SuiteReport verify_rank_collapse(const DomainId& domain, int max_degree, std::uint64_t seed,
                                 std::optional<std::size_t> n_points = std::nullopt);

/// An even series on S^d with an antipodal pair among n_points points is not
/// PD, and on n_points hemisphere points it is. Also checks the 2x2 antipodal
/// block is singular to rounding. worst: |det| of that block over its
/// diagonal product (limit 1e-12).
SuiteReport verify_antipodal_failure(int d, const CoefficientSeries& series_even, std::uint64_t seed,
                                     std::size_t n_points = 30);

/// On Ball(2): integral of P_n(x, y) P_m(z, y) W_0(y) dy against
/// delta_nm P_n(x, z), tolerance 2e-6, for a few random (x, z). The integral
/// is pulled back to the upper hemisphere and evaluated with a Gauss-Legendre
/// by trapezoid product rule of at least `samples` nodes, exact for these
/// polynomial integrands. worst: largest absolute error.
SuiteReport verify_reproducing(int n, int m, std::size_t samples, std::uint64_t seed);

/// All pairs n, m <= max_degree in one sweep over the quadrature grid.
SuiteReport verify_reproducing_all(int max_degree, std::size_t samples, std::uint64_t seed);

/// Hyperbolic surface or solid hyperboloid: largest |K_consistent - K_rho_free|
/// over random pairs (same and opposite sheets). Fails only when rho = 0 and
/// the variants differ by more than 1e-12, or when the consistent all-plus
/// term differs from Z_n(cos d) by more than 1e-12.
SuiteReport compare_addition_variants(const DomainId& domain, int n, std::size_t samples, std::uint64_t seed);

}  // namespace pdk
