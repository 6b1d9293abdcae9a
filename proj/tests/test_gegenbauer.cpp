#include "doctest.h"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "pdk/errors.hpp"
#include "pdk/gegenbauer.hpp"
#include "support.hpp"

using namespace pdk;

namespace {

double rel_err(double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

}  // namespace

TEST_CASE("gegenbauer matches high precision reference values") {
  // Reference values from a 40-digit hypergeometric evaluation.
  struct Row {
    double lambda;
    int n;
    double t;
    double want;
  };
  const Row rows[] = {
      {0.5, 5, 0.3, 0.34538625000000000187},
      {1.0, 7, -0.45, -0.6253569000000000963},
      {1.5, 10, 0.9, -9.1794168972386720132},
      {2.5, 20, 0.123, -26.879444407829166342},
      {0.25, 3, -1.0, -0.3125},
      {1.0, 30, 0.7, -0.64087195013021074497},
  };
  for (const auto& r : rows) {
    CAPTURE(r.n);
    CHECK(rel_err(gegenbauer(Lambda(r.lambda), r.n, r.t), r.want) < 1e-13);
  }
}

TEST_CASE("low degrees and lambda = 1/2 Legendre") {
  const Lambda half(0.5);
  CHECK(gegenbauer(half, 0, 0.3) == 1.0);
  CHECK(gegenbauer(Lambda(2.0), 1, 0.3) == doctest::Approx(1.2));
  // P_2(0.5) = (3/4 - 1) / 2
  CHECK(gegenbauer(half, 2, 0.5) == doctest::Approx(-0.125).epsilon(1e-15));
}

TEST_CASE("weight normalization constant") {
  CHECK(weight_normalization(Lambda(0.5)) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(weight_normalization(Lambda(1.0)) == doctest::Approx(0.63661977236758134308).epsilon(1e-15));
  CHECK(weight_normalization(Lambda(1.5)) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(weight_normalization(Lambda(2.0)) == doctest::Approx(0.8488263631567751241).epsilon(1e-15));
}

TEST_CASE("endpoint identity C_n(1) = (2 lambda)_n / n!") {
  for (double lam : {0.25, 0.5, 1.0, 1.5, 3.0}) {
    double poch = 1.0;  // (2 lambda)_n / n! built incrementally
    for (int n = 0; n <= 30; ++n) {
      if (n > 0) poch *= (2.0 * lam + n - 1) / n;
      CAPTURE(lam);
      CAPTURE(n);
      CHECK(rel_err(gegenbauer(Lambda(lam), n, 1.0), poch) < 1e-12);
      CHECK(rel_err(gegenbauer_at_one(Lambda(lam), n), poch) < 1e-12);
    }
  }
}

TEST_CASE("gauss rule matches reference nodes and weights") {
  SUBCASE("lambda = 1, 3 nodes") {
    const auto r = gauss_rule(Lambda(1.0), 3);
    REQUIRE(r.size() == 3);
    CHECK(r.nodes[0] == doctest::Approx(-0.7071067811865476).epsilon(1e-15));
    CHECK(r.nodes[1] == doctest::Approx(0.0));
    CHECK(r.weights[0] == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(r.weights[1] == doctest::Approx(0.5).epsilon(1e-14));
  }
  SUBCASE("lambda = 3/2, 4 nodes") {
    const auto r = gauss_rule(Lambda(1.5), 4);
    CHECK(r.nodes[2] == doctest::Approx(0.28523151648064504).epsilon(1e-14));
    CHECK(r.nodes[3] == doctest::Approx(0.7650553239294646).epsilon(1e-14));
    CHECK(r.weights[0] == doctest::Approx(0.11771243444677042).epsilon(1e-14));
    CHECK(r.weights[1] == doctest::Approx(0.38228756555322957).epsilon(1e-14));
  }
  SUBCASE("lambda = 1/2 is Gauss-Legendre") {
    const auto r = gauss_rule(Lambda(0.5), 5);
    CHECK(r.nodes[0] == doctest::Approx(-0.906179845938664).epsilon(1e-14));
    CHECK(r.weights[0] == doctest::Approx(0.11846344252809449).epsilon(1e-14));
    CHECK(r.weights[2] == doctest::Approx(0.2844444444444445).epsilon(1e-14));
  }
}

TEST_CASE("gauss rule is symmetric, sorted and sums to one") {
  for (double lam : {0.5, 1.0, 1.5, 4.0}) {
    for (std::size_t n : {1u, 2u, 7u, 64u, 200u}) {
      const auto r = gauss_rule(Lambda(lam), n);
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        s += r.weights[i];
        CHECK(r.weights[i] > 0.0);
        CHECK(r.nodes[i] == -r.nodes[n - 1 - i]);
        if (i) CHECK(r.nodes[i] > r.nodes[i - 1]);
      }
      CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("quadrature exactness: t^4 at lambda = 1/2 integrates to 1/5") {
  const auto r = gauss_rule(Lambda(0.5), 5);
  CHECK(r.exact_degree() == 9);
  // c_{1/2} int t^4 dt = 1/2 * 2/5
  CHECK(r.integrate([](double t) { return t * t * t * t; }) == doctest::Approx(0.2).epsilon(1e-15));
  const auto r1 = gauss_rule(Lambda(1.0), 3);
  CHECK(std::abs(r1.integrate([](double t) { return gegenbauer(Lambda(1.0), 1, t) * gegenbauer(Lambda(1.0), 2, t); })) <
        1e-15);
}

TEST_CASE("orthogonality and norms for n, m <= 20") {
  for (double lam : {0.5, 1.0, 1.5}) {
    const Lambda l(lam);
    const auto rule = gauss_rule(l, 32);
    for (int n = 0; n <= 20; ++n) {
      for (int m = 0; m <= 20; ++m) {
        const double v = rule.integrate([&](double t) { return gegenbauer(l, n, t) * gegenbauer(l, m, t); });
        const double scale = std::sqrt(gegenbauer_norm(l, n) * gegenbauer_norm(l, m));
        const double want = n == m ? gegenbauer_norm(l, n) : 0.0;
        CAPTURE(lam);
        CAPTURE(n);
        CAPTURE(m);
        CHECK(std::abs(v - want) <= 1e-12 * scale);
      }
    }
  }
}

TEST_CASE("Clenshaw evaluation agrees with the direct sum") {
  testing::SplitMix rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const Lambda l(rng.uniform(0.1, 3.0));
    const int deg = rng.below(25);
    std::vector<double> a(static_cast<std::size_t>(deg) + 1);
    for (double& v : a) v = rng.uniform() < 0.3 ? 0.0 : rng.uniform();
    a[0] = 1.0;
    const CoefficientSeries s(l, a);
    const double t = rng.uniform(-1.0, 1.0);
    double direct = 0.0, scale = 0.0;
    for (int n = 0; n <= deg; ++n) {
      direct += a[static_cast<std::size_t>(n)] * gegenbauer(l, n, t);
      scale += a[static_cast<std::size_t>(n)] * gegenbauer_at_one(l, n);
    }
    CHECK(std::abs(series_eval(s, t) - direct) <= 1e-13 * scale);
    CHECK(s(t) == series_eval(s, t));
  }
}

TEST_CASE("projection round trip recovers random series") {
  testing::SplitMix rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const double lam = trial % 3 == 0 ? 0.5 : (trial % 3 == 1 ? 1.0 : 1.5);
    const Lambda l(lam);
    const int deg = 1 + rng.below(20);
    std::vector<double> a(static_cast<std::size_t>(deg) + 1);
    for (double& v : a) v = rng.uniform();
    const CoefficientSeries s(l, a);
    const Projection p = project_coefficients([&](double t) { return series_eval(s, t); }, l, deg);
    REQUIRE(p.coeffs.size() == a.size());
    for (std::size_t n = 0; n < a.size(); ++n) {
      CAPTURE(n);
      CHECK(std::abs(p.coeffs[n] - a[n]) <= 1e-12);
    }
    CHECK(p.nonnegative());
  }
}

TEST_CASE("projection of a smooth step matches reference coefficients") {
  // Legendre coefficients of 0.5 (1 + tanh 8t) from 40-digit quadrature.
  const double want[] = {0.5, 0.74036173687117678746, 0.0, -0.40528324010912167087, 0.0, 0.28522154632005418811};
  const Projection p = project_coefficients([](double t) { return 0.5 * (1.0 + std::tanh(8.0 * t)); },
                                            Lambda(0.5), 5, gauss_rule(Lambda(0.5), 200));
  for (int n = 0; n <= 5; ++n) {
    CAPTURE(n);
    CHECK(std::abs(p.coeffs[static_cast<std::size_t>(n)] - want[n]) < 1e-13);
  }
  CHECK(p.negative_degrees == std::vector<int>{3});
}

TEST_CASE("|t| has negative coefficients and cannot become a series") {
  // lambda = 1/2: 1/2, 0, 5/8, 0, -3/16, 0, 13/128
  const Projection p = project_coefficients([](double t) { return std::abs(t); }, Lambda(0.5), 6,
                                            gauss_rule(Lambda(0.5), 400));
  CHECK(p.coeffs[0] == doctest::Approx(0.5).epsilon(1e-5));
  CHECK(p.coeffs[2] == doctest::Approx(0.625).epsilon(1e-4));
  CHECK(p.coeffs[4] == doctest::Approx(-0.1875).epsilon(1e-4));
  CHECK(p.coeffs[6] == doctest::Approx(0.1015625).epsilon(1e-3));
  CHECK(p.negative_degrees == std::vector<int>{4});
  CHECK(p.even());
  CHECK_THROWS_AS(p.to_series(Parity::even), std::domain_error);

  // lambda = 1 reference: a_4 = -0.0606...
  const Projection q = project_coefficients([](double t) { return std::abs(t); }, Lambda(1.0), 4,
                                            gauss_rule(Lambda(1.0), 400));
  CHECK(q.coeffs[0] == doctest::Approx(0.42441318157838756205).epsilon(1e-5));
  CHECK(q.coeffs[2] == doctest::Approx(0.25464790894703253723).epsilon(1e-4));
  CHECK(q.coeffs[4] == doctest::Approx(-0.06063045451119822315).epsilon(1e-3));
}

TEST_CASE("projection of an even nonnegative function yields an even series") {
  const Projection p =
      project_coefficients([](double t) { return 1.0 + t * t; }, Lambda(1.0), 6);
  CHECK(p.nonnegative());
  CHECK(p.even());
  const CoefficientSeries s = p.to_series(Parity::even);
  CHECK(s.parity() == Parity::even);
  CHECK(s.even_support());
  CHECK(series_eval(s, 0.3) == doctest::Approx(1.09).epsilon(1e-14));
  for (std::size_t n = 1; n < s.coeffs().size(); n += 2) CHECK(s.coeffs()[n] == 0.0);
}

TEST_CASE("coefficient series validation") {
  const Lambda l(1.0);
  CHECK_THROWS_AS(CoefficientSeries(l, {}), std::invalid_argument);
  CHECK_THROWS_AS(CoefficientSeries(l, {1.0, -0.1}), std::invalid_argument);
  CHECK_THROWS_AS(CoefficientSeries(l, {0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(CoefficientSeries(l, {1.0, std::nan("")}), std::invalid_argument);
  CHECK_THROWS_AS(CoefficientSeries(l, {1.0, 0.5}, Parity::even), std::invalid_argument);
  const CoefficientSeries s(l, {0.0, 0.0, 2.0, 0.0, 1.0}, Parity::even);
  CHECK(s.support() == std::vector<int>{2, 4});
  CHECK(s.single_parity());
  CHECK(s.max_degree() == 4);
  CHECK_FALSE(CoefficientSeries(l, {1.0, 1.0}).single_parity());
}

TEST_CASE("argument and parameter checks") {
  CHECK_THROWS_AS(Lambda(-0.5), std::invalid_argument);
  CHECK_NOTHROW(Lambda(-0.25));
  CHECK_THROWS_AS(zonal(Lambda(0.0), 2, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(gegenbauer_norm(Lambda(0.0), 2), std::invalid_argument);
  CHECK(clamp_unit(1.0 + 1e-13) == 1.0);
  CHECK(clamp_unit(-1.0 - 1e-13) == -1.0);
  CHECK_THROWS_AS(clamp_unit(1.0 + 1e-9), std::domain_error);
  CHECK_THROWS_AS(gegenbauer(Lambda(1.0), 3, 1.5), std::domain_error);
  CHECK_THROWS_AS(gegenbauer(Lambda(1.0), -1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(gauss_rule(Lambda(1.0), 0), std::invalid_argument);
  CHECK(default_node_count(10) == 64);
  CHECK(default_node_count(100) == 201);
  // A 3-node rule is exact to degree 5 only.
  CHECK_THROWS_AS(project_coefficients([](double t) { return t; }, Lambda(1.0), 4, gauss_rule(Lambda(1.0), 3)),
                  std::invalid_argument);
  CHECK_THROWS_AS(project_coefficients([](double) { return std::nan(""); }, Lambda(1.0), 2),
                  std::domain_error);
  CHECK(parse_parity("even") == Parity::even);
  CHECK_THROWS_AS(parse_parity("odd"), std::invalid_argument);
}

TEST_CASE("zonal kernel and norm") {
  const Lambda l(0.5);
  // Z_n^{1/2}(1) = 2n + 1
  for (int n = 0; n < 10; ++n) CHECK(zonal(l, n, 1.0) == doctest::Approx(2.0 * n + 1.0).epsilon(1e-14));
  CHECK(gegenbauer_norm(l, 3) == doctest::Approx(1.0 / 7.0).epsilon(1e-15));
  // h_n^1 = 1 for Chebyshev U
  CHECK(gegenbauer_norm(Lambda(1.0), 9) == doctest::Approx(1.0).epsilon(1e-14));
}
