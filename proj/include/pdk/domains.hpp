#pragma once

// Regular domains, their distances, and the distance-preserving maps into
// quadrants of the unit sphere.

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pdk/gegenbauer.hpp"

namespace pdk {

enum class DomainKind {
  sphere,              // S^d in R^{d+1}
  quadrant,            // S^d_{k,+}: xi_k, ..., xi_{d+1} >= 0
  ball,                // B^d
  hyperbolic_surface,  // ||x|| = sqrt(t^2 - rho^2), x in R^d, one sheet
  solid_hyperboloid,   // ||x|| <= sqrt(t^2 - rho^2), x in R^{d-1}, one sheet
  cone_surface,        // V_0^3: ||x|| = t, x in R^2, t in [0, 1]
  simplex,             // T^d
};

enum class Sheet { upper, lower };

/// Identifies a domain together with its parameters.
class DomainId {
 public:
  static DomainId sphere(int d);
  static DomainId quadrant(int d, int k);
  static DomainId ball(int d);
  static DomainId hyperbolic_surface(int d, double rho, Sheet sheet = Sheet::upper);
  static DomainId solid_hyperboloid(int d, double rho, Sheet sheet = Sheet::upper);
  static DomainId cone_surface();
  static DomainId simplex(int d);

  DomainKind kind() const noexcept { return kind_; }
  int dim() const noexcept { return dim_; }
  /// First constrained coordinate (1-based) for quadrants.
  int quadrant_index() const noexcept { return k_; }
  double rho() const noexcept { return rho_; }
  Sheet sheet() const noexcept { return sheet_; }

  /// Dimension d of the sphere S^d the domain embeds into.
  int sphere_dim() const noexcept;
  /// Number of coordinates of a point.
  int coord_count() const noexcept;
  /// lambda = (d - 1) / 2 of the ambient sphere.
  Lambda lambda() const { return Lambda::for_sphere(sphere_dim()); }
  /// Image of embed() is S^d_{k,+} with this k (d + 2 for the full sphere).
  int image_quadrant() const noexcept;
  /// Only even series are positive definite here (cone, simplex).
  bool requires_even() const noexcept;
  bool has_sheets() const noexcept;

  /// Same domain, ignoring the sheet of hyperbolic domains.
  bool same_up_to_sheet(const DomainId& other) const noexcept;

  /// Canonical spec string, e.g. "hyp-surface:d=2,rho=0.5,sign=+".
  std::string spec() const;

  friend bool operator==(const DomainId&, const DomainId&) = default;

 private:
  DomainId(DomainKind kind, int dim, int k, double rho, Sheet sheet)
      : kind_(kind), dim_(dim), k_(k), rho_(rho), sheet_(sheet) {}

  DomainKind kind_;
  int dim_;
  int k_;
  double rho_;
  Sheet sheet_;
};

/// Parses "ball:d=2", "hyp-surface:d=2,rho=0.5,sign=+", "hyperboloid:d=2,rho=0.5,sign=-",
/// "cone3", "simplex:d=3", "sphere:d=2", "quadrant:d=2,k=1".
DomainId parse_domain(std::string_view spec);

/// Tolerance for surface constraints and quadrant membership.
inline constexpr double kMembershipTol = 1e-10;

/// A validated point on a domain.
///
/// Coordinates: sphere/quadrant xi in R^{d+1}; ball x in R^d; hyperbolic
/// surface (x, t) with x in R^d; solid hyperboloid (x, t) with x in R^{d-1};
/// cone (x1, x2, t); simplex x in R^d.
class DomainPoint {
 public:
  /// Throws std::domain_error when the coordinates are not on the domain.
  DomainPoint(DomainId domain, std::vector<double> coords);

  const DomainId& domain() const noexcept { return domain_; }
  const std::vector<double>& coords() const noexcept { return coords_; }
  std::span<const double> x() const noexcept;
  /// Last coordinate for hyperbolic domains and the cone.
  double t() const noexcept { return coords_.back(); }

 private:
  DomainId domain_;
  std::vector<double> coords_;
};

/// Point of S^d, Euclidean norm 1 within 1e-12.
class UnitVector {
 public:
  explicit UnitVector(std::vector<double> components);

  const std::vector<double>& components() const noexcept { return c_; }
  std::size_t size() const noexcept { return c_.size(); }
  double operator[](std::size_t i) const noexcept { return c_[i]; }
  UnitVector operator-() const;

  /// xi_k, ..., xi_{d+1} >= -tol (k is 1-based).
  bool in_quadrant(int k, double tol = kMembershipTol) const noexcept;

 private:
  std::vector<double> c_;
};

double dot(std::span<const double> a, std::span<const double> b) noexcept;

/// sign(0) := +1.
inline double sign_of(double v) noexcept { return v < 0.0 ? -1.0 : 1.0; }

/// Argument of arccos in the domain distance, clamped to [-1, 1].
double cos_distance(const DomainPoint& p, const DomainPoint& q);
/// Geodesic-type distance in [0, pi].
double distance(const DomainPoint& p, const DomainPoint& q);

/// Distance-preserving map into the sphere quadrant S^d_{image_quadrant(),+}.
UnitVector embed(const DomainPoint& p);
/// Inverse of embed for points of the image quadrant.
DomainPoint unembed(const UnitVector& v, const DomainId& target);

/// Draws uniform points on a domain's image quadrant and pulls them back.
/// Deterministic for a given seed; no distinctness guarantee.
class QuadrantSampler {
 public:
  QuadrantSampler(DomainId domain, std::uint64_t seed);

  UnitVector next_vector();
  DomainPoint next() { return unembed(next_vector(), domain_); }
  const DomainId& domain() const noexcept { return domain_; }

 private:
  DomainId domain_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Minimum pairwise geodesic distance enforced by sample().
inline constexpr double kDistinctTol = 1e-9;

/// n pairwise distinct points, uniform on the image quadrant, deterministic
/// per seed. Throws NumericalError if the rejection budget runs out.
std::vector<DomainPoint> sample(const DomainId& domain, std::size_t n, std::uint64_t seed);

/// (xi, -xi) for a pseudorandom xi on the full sphere.
std::pair<UnitVector, UnitVector> antipodal_pair(const DomainId& sphere, std::uint64_t seed);

/// Smallest pairwise distance in a point set (infinity for fewer than 2 points).
double min_pairwise_distance(std::span<const DomainPoint> points);

}  // namespace pdk
