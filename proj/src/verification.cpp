#include "pdk/verification.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "pdk/kernels.hpp"

namespace pdk {

namespace {

constexpr double kDistanceTol = 1e-12;
constexpr double kZGate = 4.0;
constexpr double kReproTol = 2e-6;
constexpr double kAdditionTol = 1e-12;

// Welford accumulator for a Monte Carlo mean.
struct Moments {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double v) {
    ++n;
    const double delta = v - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (v - mean);
  }
  double standard_error() const {
    if (n < 2) return 0.0;
    return std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
  }
};

double z_score(double diff, double se) {
  if (se > 0.0) return std::abs(diff) / se;
  return std::abs(diff) <= 1e-12 ? 0.0 : std::numeric_limits<double>::infinity();
}

bool is_hyperbolic(const DomainId& d) {
  return d.kind() == DomainKind::hyperbolic_surface || d.kind() == DomainKind::solid_hyperboloid;
}

DomainId with_sheet(const DomainId& d, Sheet sheet) {
  if (d.kind() == DomainKind::hyperbolic_surface) return DomainId::hyperbolic_surface(d.dim(), d.rho(), sheet);
  return DomainId::solid_hyperboloid(d.dim(), d.rho(), sheet);
}

}  // namespace

nlohmann::json SuiteReport::to_json() const {
  nlohmann::ordered_json j;
  j["suite"] = suite;
  j["trials"] = trials;
  j["failures"] = failures;
  j["worst"] = worst;
  j["seed"] = seed;
  return nlohmann::json::parse(j.dump());
}

std::string SuiteReport::json_line() const {
  nlohmann::ordered_json j;
  j["suite"] = suite;
  j["trials"] = trials;
  j["failures"] = failures;
  j["worst"] = worst;
  j["seed"] = seed;
  return j.dump();
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  // splitmix64 finalizer over seed and stream index
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

CoefficientSeries random_series(const DomainId& domain, int max_degree, std::uint64_t seed) {
  if (max_degree < 0) throw std::invalid_argument("random_series: max_degree must be >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const bool even = domain.requires_even();
  std::vector<double> a(static_cast<std::size_t>(max_degree) + 1, 0.0);
  for (int n = 0; n <= max_degree; ++n) {
    const bool keep = unit(rng) < 0.5;
    const double v = 1.0 - unit(rng);
    if (keep && !(even && n % 2 == 1)) a[static_cast<std::size_t>(n)] = v;
  }
  if (std::none_of(a.begin(), a.end(), [](double v) { return v > 0.0; })) a[0] = 1.0;
  return CoefficientSeries(domain.lambda(), std::move(a), even ? Parity::even : Parity::any);
}

CoefficientSeries random_single_parity_series(const DomainId& domain, int top_degree, std::uint64_t seed) {
  if (top_degree < 0) throw std::invalid_argument("top degree must be >= 0");
  if (domain.requires_even() && top_degree % 2 == 1) {
    throw std::invalid_argument(domain.spec() + " needs an even top degree");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(0.5, 1.5);
  std::vector<double> a(static_cast<std::size_t>(top_degree) + 1, 0.0);
  for (int n = top_degree; n >= 0; n -= 2) a[static_cast<std::size_t>(n)] = coef(rng);
  return CoefficientSeries(domain.lambda(), std::move(a), top_degree % 2 == 0 ? Parity::even : Parity::any);
}

SuiteReport verify_distance_preservation(const DomainId& domain, std::size_t trials, std::uint64_t seed) {
  SuiteReport r{"distance", trials, 0, 0.0, seed, {}};
  QuadrantSampler sampler(domain, seed);
  for (std::size_t i = 0; i < trials; ++i) {
    const DomainPoint p = sampler.next();
    const DomainPoint q = sampler.next();
    const UnitVector ep = embed(p), eq = embed(q);
    const double gap = std::abs(dot(ep.components(), eq.components()) - cos_distance(p, q));
    r.worst = std::max(r.worst, gap);
    if (!(gap <= kDistanceTol)) ++r.failures;
  }
  return r;
}

SuiteReport verify_quadrant_integral_identity(int d, int n_even, std::size_t samples, std::uint64_t seed) {
  if (n_even < 0 || n_even % 2 != 0) throw std::invalid_argument("quadrant identity needs an even degree");
  if (samples < 2) throw std::invalid_argument("quadrant identity needs at least 2 samples");
  const DomainId sphere = DomainId::sphere(d);
  const DomainId hemi = DomainId::quadrant(d, d + 1);
  const Lambda lambda = sphere.lambda();

  QuadrantSampler full(sphere, derive_seed(seed, 0));
  QuadrantSampler upper(hemi, derive_seed(seed, 1));
  Moments lhs, rhs;
  for (std::size_t i = 0; i < samples; ++i) {
    lhs.add(gegenbauer(lambda, n_even, full.next_vector().components().back()));
    const UnitVector a = upper.next_vector();
    const UnitVector b = upper.next_vector();
    rhs.add(gegenbauer(lambda, n_even, clamp_unit(dot(a.components(), b.components()))));
  }

  SuiteReport r{"quadrant-identity", samples, 0, 0.0, seed, {}};
  const double se_l = lhs.standard_error(), se_r = rhs.standard_error();
  std::vector<double> z{z_score(lhs.mean - rhs.mean, std::hypot(se_l, se_r))};
  if (n_even >= 2) {
    z.push_back(z_score(lhs.mean, se_l));
    z.push_back(z_score(rhs.mean, se_r));
  }
  for (double v : z) {
    r.worst = std::max(r.worst, v);
    if (!(v <= kZGate)) ++r.failures;
  }
  r.details = {{"lhs", lhs.mean}, {"lhs_se", se_l}, {"rhs", rhs.mean}, {"rhs_se", se_r}};
  return r;
}

SuiteReport verify_psd_sufficiency(const DomainId& domain, const CoefficientSeries& series,
                                   std::size_t trials, std::size_t n_points, std::uint64_t seed) {
  SuiteReport r{"psd", trials, 0, 0.0, seed, {}};
  double lowest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < trials; ++i) {
    const auto points = sample(domain, n_points, derive_seed(seed, i));
    const KernelMatrix k = kernel_matrix(series, points);
    const PsdReport rep = psd_check(k);
    const double scale = static_cast<double>(k.size()) * k.entries.cwiseAbs().maxCoeff();
    r.worst = std::max(r.worst, std::max(0.0, -rep.min_eigenvalue) / scale);
    lowest = std::min(lowest, rep.min_eigenvalue);
    if (!rep.is_psd) ++r.failures;
  }
  r.details = {{"min_eigenvalue", lowest}};
  return r;
}

SuiteReport verify_rank_collapse(const DomainId& domain, int max_degree, std::uint64_t seed,
                                 std::optional<std::size_t> n_points) {
  const std::uint64_t bound = rank_bound(domain.sphere_dim(), max_degree);
  const std::size_t n = n_points ? *n_points : static_cast<std::size_t>(bound) + 10;
  if (n > 5000) throw std::invalid_argument("rank collapse: " + std::to_string(n) + " points is too many");
  const CoefficientSeries series = random_single_parity_series(domain, max_degree, derive_seed(seed, 0));
  const auto points = sample(domain, n, derive_seed(seed, 1));
  const PsdReport rep = psd_check(kernel_matrix(series, points));

  SuiteReport r{"rank", 2, 0, static_cast<double>(rep.rank_estimate), seed, {}};
  if (rep.rank_estimate > bound) ++r.failures;
  if (n > bound && rep.is_pd) ++r.failures;
  r.details = {{"rank_estimate", static_cast<double>(rep.rank_estimate)},
               {"rank_bound", static_cast<double>(bound)},
               {"n_points", static_cast<double>(n)},
               {"is_pd", rep.is_pd ? 1.0 : 0.0}};
  return r;
}

constexpr double kAntipodalDetTol = 1e-12;

SuiteReport verify_antipodal_failure(int d, const CoefficientSeries& series_even, std::uint64_t seed,
                                     std::size_t n_points) {
  if (!series_even.even_support()) throw std::invalid_argument("antipodal suite needs an even series");
  if (n_points < 3) throw std::invalid_argument("antipodal suite needs at least 3 points");
  const DomainId sphere = DomainId::sphere(d);
  const DomainId hemi = DomainId::quadrant(d, d + 1);

  const auto [xi, minus_xi] = antipodal_pair(sphere, derive_seed(seed, 0));
  std::vector<DomainPoint> with_pair{DomainPoint(sphere, xi.components()),
                                     DomainPoint(sphere, minus_xi.components())};
  for (auto& p : sample(sphere, n_points - 2, derive_seed(seed, 1))) with_pair.push_back(std::move(p));
  const KernelMatrix k_sphere = kernel_matrix(series_even, with_pair);
  const PsdReport sphere_rep = psd_check(k_sphere);

  const auto& e = k_sphere.entries;
  // Relative to the diagonal product: the two rows agree up to rounding.
  const double det = std::abs(e(0, 0) * e(1, 1) - e(0, 1) * e(1, 0)) / (e(0, 0) * e(1, 1));

  const PsdReport hemi_rep = psd_check(kernel_matrix(series_even, sample(hemi, n_points, derive_seed(seed, 2))));

  SuiteReport r{"antipodal", 3, 0, det, seed, {}};
  if (sphere_rep.is_pd) ++r.failures;
  if (!hemi_rep.is_pd) ++r.failures;
  if (!(det <= kAntipodalDetTol)) ++r.failures;
  r.details = {{"sphere_min_eigenvalue", sphere_rep.min_eigenvalue},
               {"hemisphere_min_eigenvalue", hemi_rep.min_eigenvalue},
               {"hemisphere_pd_tol", hemi_rep.pd_tol}};
  return r;
}

namespace {

SuiteReport reproducing_sweep(const std::vector<std::pair<int, int>>& pairs, std::size_t samples,
                              std::uint64_t seed) {
  constexpr std::size_t kTestPairs = 2;
  const DomainId ball = DomainId::ball(2);
  int top = 0;
  for (auto [n, m] : pairs) {
    if (n < 0 || m < 0) throw std::invalid_argument("degrees must be >= 0");
    top = std::max({top, n, m});
  }
  const auto side = std::max<std::size_t>(
      static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(samples)))), static_cast<std::size_t>(top) + 2);
  // Gauss-Legendre in the height xi_3 over [0, 1], equispaced azimuth.
  const QuadratureRule gl = gauss_rule(Lambda(0.5), side);
  const auto anchors = sample(ball, 2 * kTestPairs, derive_seed(seed, 0));

  const auto degrees = static_cast<std::size_t>(top) + 1;
  const std::size_t cells = kTestPairs * pairs.size();
  std::vector<long double> acc(cells, 0.0L);
  std::vector<double> px(kTestPairs * degrees), pz(kTestPairs * degrees);
  const double dphi = 2.0 * std::numbers::pi / static_cast<double>(side);

  for (std::size_t i = 0; i < side; ++i) {
    const double h = 0.5 * (gl.nodes[i] + 1.0);
    const double radius = std::sqrt(std::max(0.0, 1.0 - h * h));
    long double ring_w = static_cast<long double>(gl.weights[i]) / static_cast<long double>(side);
    for (std::size_t j = 0; j < side; ++j) {
      const double phi = dphi * static_cast<double>(j);
      const DomainPoint y(ball, {radius * std::cos(phi), radius * std::sin(phi)});
      for (std::size_t a = 0; a < kTestPairs; ++a) {
        for (std::size_t k = 0; k < degrees; ++k) {
          px[a * degrees + k] = reproducing_kernel(ball, static_cast<int>(k), anchors[2 * a], y);
          pz[a * degrees + k] = reproducing_kernel(ball, static_cast<int>(k), anchors[2 * a + 1], y);
        }
      }
      for (std::size_t a = 0; a < kTestPairs; ++a) {
        for (std::size_t c = 0; c < pairs.size(); ++c) {
          const auto [n, m] = pairs[c];
          acc[a * pairs.size() + c] += ring_w * px[a * degrees + static_cast<std::size_t>(n)] *
                                       pz[a * degrees + static_cast<std::size_t>(m)];
        }
      }
    }
  }

  SuiteReport r{"reproducing", cells, 0, 0.0, seed, {}};
  for (std::size_t a = 0; a < kTestPairs; ++a) {
    for (std::size_t c = 0; c < pairs.size(); ++c) {
      const auto [n, m] = pairs[c];
      const double expected = n == m ? reproducing_kernel(ball, n, anchors[2 * a], anchors[2 * a + 1]) : 0.0;
      const double err = std::abs(static_cast<double>(acc[a * pairs.size() + c]) - expected);
      r.worst = std::max(r.worst, err);
      if (!(err <= kReproTol)) ++r.failures;
    }
  }
  r.details = {{"nodes", static_cast<double>(side * side)}};
  return r;
}

}  // namespace

SuiteReport verify_reproducing(int n, int m, std::size_t samples, std::uint64_t seed) {
  return reproducing_sweep({{n, m}}, samples, seed);
}

SuiteReport verify_reproducing_all(int max_degree, std::size_t samples, std::uint64_t seed) {
  std::vector<std::pair<int, int>> pairs;
  for (int n = 0; n <= max_degree; ++n) {
    for (int m = 0; m <= max_degree; ++m) pairs.emplace_back(n, m);
  }
  return reproducing_sweep(pairs, samples, seed);
}

SuiteReport compare_addition_variants(const DomainId& domain, int n, std::size_t samples, std::uint64_t seed) {
  if (!is_hyperbolic(domain)) {
    throw std::invalid_argument("addition variants compare hyperbolic domains, got " + domain.spec());
  }
  const DomainId other = with_sheet(domain, domain.sheet() == Sheet::upper ? Sheet::lower : Sheet::upper);
  QuadrantSampler same(domain, derive_seed(seed, 0));
  QuadrantSampler opposite(other, derive_seed(seed, 1));

  SuiteReport r{"addition", samples, 0, 0.0, seed, {}};
  double identity_gap = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const DomainPoint p = same.next();
    const DomainPoint q = same.next();
    const DomainPoint q2 = opposite.next();
    bool bad = false;
    for (const DomainPoint* s : {&q, &q2}) {
      const double gap = std::abs(reproducing_kernel(domain, n, p, *s, AdditionVariant::distance_consistent) -
                                  reproducing_kernel(domain, n, p, *s, AdditionVariant::rho_free));
      r.worst = std::max(r.worst, gap);
      if (domain.rho() == 0.0 && !(gap <= kAdditionTol)) bad = true;
    }
    const double plus = addition_terms(domain, n, p, q).front();
    const double gap = std::abs(plus - same_sheet_plus_kernel(domain, n, p, q));
    identity_gap = std::max(identity_gap, gap);
    if (!(gap <= kAdditionTol)) bad = true;
    if (bad) ++r.failures;
  }
  r.details = {{"identity_gap", identity_gap}};
  return r;
}

}  // namespace pdk
