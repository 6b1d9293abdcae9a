#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pdk/errors.hpp"
#include "pdk/interpolation.hpp"
#include "pdk/kernels.hpp"
#include "support.hpp"

using namespace pdk;

namespace {

CoefficientSeries flat_series(const DomainId& dom, int top) {
  std::vector<double> a(static_cast<std::size_t>(top) + 1, 0.0);
  const bool even = dom.requires_even();
  for (int n = 0; n <= top; ++n) {
    if (!even || n % 2 == 0) a[static_cast<std::size_t>(n)] = 1.0;
  }
  return CoefficientSeries(dom.lambda(), a, even ? Parity::even : Parity::any);
}

double test_function(const DomainPoint& p) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.coords().size(); ++i) s += std::sin(1.3 * static_cast<double>(i + 1) * p.coords()[i]);
  return s + 0.5;
}

std::vector<DomainId> domains() {
  return {DomainId::sphere(2),
          DomainId::quadrant(2, 3),
          DomainId::ball(2),
          DomainId::ball(3),
          DomainId::hyperbolic_surface(2, 0.5),
          DomainId::solid_hyperboloid(2, 0.5, Sheet::lower),
          DomainId::cone_surface(),
          DomainId::simplex(3)};
}

}  // namespace

TEST_CASE("fits reproduce the data at the centers") {
  for (const auto& dom : domains()) {
    CAPTURE(dom.spec());
    const auto pts = sample(dom, 50, 17);
    std::vector<double> values;
    for (const auto& p : pts) values.push_back(test_function(p));
    const Interpolant g = fit(flat_series(dom, 24), pts, values);
    CHECK(g.diagnostics().method == "cholesky");
    CHECK(g.diagnostics().residual_norm <= 1e-10);
    CHECK(g.diagnostics().condition_estimate >= 1.0);
    const auto back = evaluate(g, pts);
    double scale = 0.0, err = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      scale = std::max(scale, std::abs(values[i]));
      err = std::max(err, std::abs(back[i] - values[i]));
      CHECK(g(pts[i]) == back[i]);
    }
    CHECK(err <= 1e-9 * scale);
  }
}

TEST_CASE("evaluate is invariant under permuting the centers") {
  testing::SplitMix rng(3);
  const auto dom = DomainId::ball(2);
  const auto pts = sample(dom, 40, 8);
  std::vector<double> values;
  for (const auto& p : pts) values.push_back(test_function(p));
  const auto series = flat_series(dom, 24);
  const Interpolant g = fit(series, pts, values);

  std::vector<std::size_t> perm(pts.size());
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = perm.size() - 1; i > 0; --i) std::swap(perm[i], perm[static_cast<std::size_t>(rng.below(static_cast<int>(i + 1)))]);
  std::vector<DomainPoint> pts2;
  std::vector<double> values2;
  for (auto i : perm) {
    pts2.push_back(pts[i]);
    values2.push_back(values[i]);
  }
  const Interpolant h = fit(series, pts2, values2);
  const auto probes = sample(dom, 100, 99);
  for (const auto& p : probes) CHECK(std::abs(g(p) - h(p)) <= 1e-12 * std::max(1.0, std::abs(g(p))));
}

TEST_CASE("known weights are recovered") {
  const auto dom = DomainId::simplex(2);
  const auto pts = sample(dom, 20, 4);
  const auto series = flat_series(dom, 10);
  const auto k = kernel_matrix(series, pts).entries;
  testing::SplitMix rng(1);
  Eigen::VectorXd w(20);
  for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = rng.uniform(-1.0, 1.0);
  const Eigen::VectorXd b = k * w;
  const Interpolant g = fit(series, pts, std::vector<double>(b.data(), b.data() + b.size()));
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    CHECK(std::abs(g.weights()[static_cast<std::size_t>(i)] - w(i)) <= 1e-6);
  }
}

TEST_CASE("fit rejects bad input") {
  const auto dom = DomainId::ball(2);
  auto pts = sample(dom, 5, 1);
  const auto s = flat_series(dom, 6);
  CHECK_THROWS_AS(fit(s, pts, std::vector<double>(4, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(fit(s, std::vector<DomainPoint>{}, std::vector<double>{}), std::invalid_argument);
  CHECK_THROWS_AS(fit(s, pts, std::vector<double>(5, 1.0), FitOptions{-1.0}), std::invalid_argument);
  pts.push_back(pts[2]);
  CHECK_THROWS_AS(fit(s, pts, std::vector<double>(6, 1.0)), std::invalid_argument);
}

TEST_CASE("singular systems raise numerical errors; a ridge regularizes them") {
  // Identical kernel rows from an antipodal pair with an even series.
  const auto sphere = DomainId::sphere(2);
  const auto [xi, minus_xi] = antipodal_pair(sphere, 3);
  std::vector<DomainPoint> pts{DomainPoint(sphere, xi.components()), DomainPoint(sphere, minus_xi.components())};
  for (auto& p : sample(sphere, 10, 4)) pts.push_back(p);
  std::vector<double> a(11, 0.0);
  for (std::size_t n = 0; n < a.size(); n += 2) a[n] = 1.0;
  const CoefficientSeries even(sphere.lambda(), a, Parity::even);
  const std::vector<double> values(pts.size(), 1.0);
  CHECK_THROWS_AS(fit(even, pts, values), NumericalError);
  try {
    fit(even, pts, values);
  } catch (const NotPositiveDefinite& e) {
    CHECK(e.min_eigenvalue() <= 1e-10);
  } catch (const NumericalError&) {
  }

  const Interpolant g = fit(even, pts, values, FitOptions{1e-3});
  CHECK(g.diagnostics().ridge == 1e-3);

  // Rank collapse: degree 2 single-parity kernel on 20 ball points.
  const auto ball = DomainId::ball(2);
  const CoefficientSeries low(ball.lambda(), {1.0, 0.0, 1.0}, Parity::even);
  CHECK_THROWS_AS(fit(low, sample(ball, 20, 1), std::vector<double>(20, 1.0)), NumericalError);
}

TEST_CASE("interpolant construction and evaluation checks") {
  const auto dom = DomainId::ball(2);
  const auto pts = sample(dom, 3, 1);
  const auto s = flat_series(dom, 4);
  CHECK_THROWS_AS(Interpolant(s, pts, {1.0}, {}), std::invalid_argument);
  CHECK_THROWS_AS(Interpolant(s, {}, {}, {}), std::invalid_argument);
  const Interpolant g(s, pts, {1.0, 0.0, 0.0}, {});
  CHECK(g(pts[0]) == doctest::Approx(series_eval(s, 1.0)));
  CHECK(g.domain() == dom);
  CHECK_THROWS_AS(g(sample(DomainId::ball(3), 1, 1)[0]), std::invalid_argument);
}
