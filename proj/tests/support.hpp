#pragma once

// Small seeded generator for property tests. Independent of the library's
// own sampling so a bug there cannot hide itself.

#include <cmath>
#include <cstdint>
#include <vector>

namespace testing {

class SplitMix {
 public:
  explicit SplitMix(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }

  // Uniform point of the unit ball in R^d by rejection.
  std::vector<double> in_ball(int d, double radius = 1.0) {
    std::vector<double> v(static_cast<std::size_t>(d));
    while (true) {
      double s = 0.0;
      for (double& x : v) {
        x = uniform(-1.0, 1.0);
        s += x * x;
      }
      if (s <= 1.0) {
        for (double& x : v) x *= radius;
        return v;
      }
    }
  }

  // Point of the unit sphere in R^n (rejection on the cube, then normalize).
  std::vector<double> on_sphere(int n) {
    while (true) {
      std::vector<double> v = in_ball(n);
      double s = 0.0;
      for (double x : v) s += x * x;
      if (s > 1e-4) {
        const double inv = 1.0 / std::sqrt(s);
        for (double& x : v) x *= inv;
        return v;
      }
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace testing
