#include "pdk/domains.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

#include "pdk/errors.hpp"

namespace pdk {

namespace {

double radical(double v) noexcept { return std::sqrt(std::max(0.0, v)); }

double norm_sq(std::span<const double> a) noexcept { return dot(a, a); }

std::string format_param(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void require_dim(int d, int min_d, const char* what) {
  if (d < min_d) {
    throw std::invalid_argument(std::string(what) + " requires d >= " + std::to_string(min_d));
  }
}

void require_rho(double rho) {
  if (!(rho >= 0.0) || !std::isfinite(rho)) {
    throw std::invalid_argument("rho must be a finite number >= 0");
  }
}

[[noreturn]] void not_on_domain(const DomainId& domain, const std::string& why) {
  throw std::domain_error("point is not on " + domain.spec() + ": " + why);
}

void check_finite(const std::vector<double>& c) {
  for (double v : c) {
    if (!std::isfinite(v)) throw std::domain_error("point has a non-finite coordinate");
  }
}

// Deviations below this (relative) are rounding noise and left alone, which
// keeps snapping idempotent.
constexpr double kSnapSlack = 8.0 * std::numeric_limits<double>::epsilon();

bool beyond(double value, double bound) { return value > bound + kSnapSlack * std::max(1.0, bound); }

// Scales x so that ||x|| = target, if x is nonzero and off by more than rounding.
void rescale(std::span<double> x, double target) {
  const double n = std::sqrt(norm_sq(x));
  if (n > 0.0 && std::abs(n - target) > kSnapSlack * std::max(1.0, target)) {
    const double f = target / n;
    for (double& v : x) v *= f;
  }
}

// Validates t against the range rho <= |t| <= sqrt(1 + rho^2) and the sheet,
// clamping |t| into the range.
double check_sheet_t(const DomainId& domain, double t) {
  const double rho = domain.rho();
  const double top = std::sqrt(1.0 + rho * rho);
  const double sheet_sign = domain.sheet() == Sheet::upper ? 1.0 : -1.0;
  if (sign_of(t) != sheet_sign) not_on_domain(domain, "t has the wrong sign for this sheet");
  const double a = std::abs(t);
  if (a < rho - kMembershipTol || a > top + kMembershipTol) {
    not_on_domain(domain, "|t| outside [rho, sqrt(1 + rho^2)]");
  }
  return sheet_sign * std::clamp(a, rho, top);
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// DomainId -------------------------------------------------------------------

DomainId DomainId::sphere(int d) {
  require_dim(d, 2, "sphere");
  return DomainId(DomainKind::sphere, d, d + 2, 0.0, Sheet::upper);
}

DomainId DomainId::quadrant(int d, int k) {
  require_dim(d, 2, "quadrant");
  if (k < 1 || k > d + 1) throw std::invalid_argument("quadrant requires 1 <= k <= d + 1");
  return DomainId(DomainKind::quadrant, d, k, 0.0, Sheet::upper);
}

DomainId DomainId::ball(int d) {
  require_dim(d, 2, "ball");
  return DomainId(DomainKind::ball, d, d + 1, 0.0, Sheet::upper);
}

DomainId DomainId::hyperbolic_surface(int d, double rho, Sheet sheet) {
  require_dim(d, 2, "hyperbolic surface");
  require_rho(rho);
  return DomainId(DomainKind::hyperbolic_surface, d, d + 1, rho, sheet);
}

DomainId DomainId::solid_hyperboloid(int d, double rho, Sheet sheet) {
  require_dim(d, 1, "solid hyperboloid");
  require_rho(rho);
  return DomainId(DomainKind::solid_hyperboloid, d, d, rho, sheet);
}

DomainId DomainId::cone_surface() { return DomainId(DomainKind::cone_surface, 2, 2, 0.0, Sheet::upper); }

DomainId DomainId::simplex(int d) {
  require_dim(d, 1, "simplex");
  return DomainId(DomainKind::simplex, d, 1, 0.0, Sheet::upper);
}

int DomainId::sphere_dim() const noexcept { return dim_; }

int DomainId::coord_count() const noexcept {
  switch (kind_) {
    case DomainKind::sphere:
    case DomainKind::quadrant:
    case DomainKind::hyperbolic_surface:
      return dim_ + 1;
    case DomainKind::ball:
    case DomainKind::simplex:
    case DomainKind::solid_hyperboloid:
      return dim_;
    case DomainKind::cone_surface:
      return 3;
  }
  return 0;
}

int DomainId::image_quadrant() const noexcept { return k_; }

bool DomainId::requires_even() const noexcept {
  return kind_ == DomainKind::cone_surface || kind_ == DomainKind::simplex;
}

bool DomainId::has_sheets() const noexcept {
  return kind_ == DomainKind::hyperbolic_surface || kind_ == DomainKind::solid_hyperboloid;
}

bool DomainId::same_up_to_sheet(const DomainId& other) const noexcept {
  return kind_ == other.kind_ && dim_ == other.dim_ && k_ == other.k_ && rho_ == other.rho_;
}

std::string DomainId::spec() const {
  const std::string d = "d=" + std::to_string(dim_);
  auto sheeted = [&](const char* name) {
    return std::string(name) + ":" + d + ",rho=" + format_param(rho_) +
           ",sign=" + (sheet_ == Sheet::upper ? "+" : "-");
  };
  switch (kind_) {
    case DomainKind::sphere:
      return "sphere:" + d;
    case DomainKind::quadrant:
      return "quadrant:" + d + ",k=" + std::to_string(k_);
    case DomainKind::ball:
      return "ball:" + d;
    case DomainKind::hyperbolic_surface:
      return sheeted("hyp-surface");
    case DomainKind::solid_hyperboloid:
      return sheeted("hyperboloid");
    case DomainKind::cone_surface:
      return "cone3";
    case DomainKind::simplex:
      return "simplex:" + d;
  }
  return {};
}

DomainId parse_domain(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string kind(spec.substr(0, colon));
  std::map<std::string, std::string> params;
  if (colon != std::string_view::npos) {
    std::string_view rest = spec.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string_view item = rest.substr(0, comma);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos || eq == 0) {
        throw std::invalid_argument("malformed domain parameter '" + std::string(item) + "'");
      }
      params[std::string(item.substr(0, eq))] = std::string(item.substr(eq + 1));
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
  }

  auto take = [&](const std::string& key) -> std::string {
    auto it = params.find(key);
    if (it == params.end()) {
      throw std::invalid_argument("domain '" + std::string(spec) + "' is missing '" + key + "'");
    }
    std::string v = it->second;
    params.erase(it);
    return v;
  };
  auto take_int = [&](const std::string& key) {
    const std::string v = take(key);
    int out = 0;
    auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
      throw std::invalid_argument("domain parameter " + key + "='" + v + "' is not an integer");
    }
    return out;
  };
  auto take_rho = [&]() {
    if (!params.count("rho")) return 0.0;
    const std::string v = take("rho");
    double out = 0.0;
    auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
      throw std::invalid_argument("domain parameter rho='" + v + "' is not a number");
    }
    return out;
  };
  auto take_sheet = [&]() {
    if (!params.count("sign")) return Sheet::upper;
    const std::string v = take("sign");
    if (v == "+") return Sheet::upper;
    if (v == "-") return Sheet::lower;
    throw std::invalid_argument("domain parameter sign must be + or -, got '" + v + "'");
  };

  DomainId id = [&]() {
    if (kind == "sphere") return DomainId::sphere(take_int("d"));
    if (kind == "quadrant") {
      const int d = take_int("d");
      return DomainId::quadrant(d, take_int("k"));
    }
    if (kind == "ball") return DomainId::ball(take_int("d"));
    if (kind == "hyp-surface" || kind == "hyperboloid") {
      const int d = take_int("d");
      const double rho = take_rho();
      const Sheet sheet = take_sheet();
      return kind == "hyp-surface" ? DomainId::hyperbolic_surface(d, rho, sheet)
                                   : DomainId::solid_hyperboloid(d, rho, sheet);
    }
    if (kind == "cone3") return DomainId::cone_surface();
    if (kind == "simplex") return DomainId::simplex(take_int("d"));
    throw std::invalid_argument("unknown domain kind '" + kind + "'");
  }();
  if (!params.empty()) {
    throw std::invalid_argument("domain '" + std::string(spec) + "' has unknown parameter '" +
                                params.begin()->first + "'");
  }
  return id;
}

// DomainPoint ----------------------------------------------------------------

DomainPoint::DomainPoint(DomainId domain, std::vector<double> coords)
    : domain_(domain), coords_(std::move(coords)) {
  const auto expected = static_cast<std::size_t>(domain_.coord_count());
  if (coords_.size() != expected) {
    throw std::domain_error("point on " + domain_.spec() + " needs " + std::to_string(expected) +
                            " coordinates, got " + std::to_string(coords_.size()));
  }
  check_finite(coords_);
  const double tol = kMembershipTol;
  std::span<double> xs(coords_.data(), coords_.size());

  // Points within tolerance are projected onto the domain so the embedding
  // lands on the unit sphere to rounding.
  switch (domain_.kind()) {
    case DomainKind::sphere:
    case DomainKind::quadrant: {
      const double n = std::sqrt(norm_sq(xs));
      if (std::abs(n - 1.0) > tol) not_on_domain(domain_, "norm is not 1");
      const int k = domain_.image_quadrant();
      for (std::size_t i = static_cast<std::size_t>(k - 1); i < coords_.size(); ++i) {
        if (coords_[i] < -tol) not_on_domain(domain_, "quadrant sign constraint violated");
        coords_[i] = std::max(coords_[i], 0.0);
      }
      rescale(xs, 1.0);
      break;
    }
    case DomainKind::ball: {
      const double n = std::sqrt(norm_sq(xs));
      if (n > 1.0 + tol) not_on_domain(domain_, "||x|| > 1");
      if (beyond(n, 1.0)) rescale(xs, 1.0);
      break;
    }
    case DomainKind::hyperbolic_surface: {
      const double t = check_sheet_t(domain_, coords_.back());
      coords_.back() = t;
      const double rho = domain_.rho();
      auto x = xs.first(xs.size() - 1);
      const double target = radical(t * t - rho * rho);
      if (std::abs(std::sqrt(norm_sq(x)) - target) > tol) {
        not_on_domain(domain_, "||x|| != sqrt(t^2 - rho^2)");
      }
      rescale(x, target);
      break;
    }
    case DomainKind::solid_hyperboloid: {
      const double t = check_sheet_t(domain_, coords_.back());
      coords_.back() = t;
      const double rho = domain_.rho();
      auto x = xs.first(xs.size() - 1);
      const double bound = radical(t * t - rho * rho);
      const double n = std::sqrt(norm_sq(x));
      if (n > bound + tol) not_on_domain(domain_, "||x|| > sqrt(t^2 - rho^2)");
      if (beyond(n, bound)) rescale(x, bound);
      break;
    }
    case DomainKind::cone_surface: {
      double& t = coords_[2];
      if (t < -tol || t > 1.0 + tol) not_on_domain(domain_, "t outside [0, 1]");
      t = std::clamp(t, 0.0, 1.0);
      auto x = xs.first(2);
      if (std::abs(std::sqrt(norm_sq(x)) - t) > tol) not_on_domain(domain_, "||x|| != t");
      rescale(x, t);
      break;
    }
    case DomainKind::simplex: {
      for (double& v : coords_) {
        if (v < -tol) not_on_domain(domain_, "negative coordinate");
        v = std::max(v, 0.0);
      }
      double s = 0.0;
      for (double v : coords_) s += v;
      if (s > 1.0 + tol) not_on_domain(domain_, "|x| > 1");
      if (beyond(s, 1.0)) {
        for (double& v : coords_) v /= s;
      }
      break;
    }
  }
}

std::span<const double> DomainPoint::x() const noexcept {
  std::span<const double> all(coords_.data(), coords_.size());
  return domain_.has_sheets() || domain_.kind() == DomainKind::cone_surface ? all.first(all.size() - 1)
                                                                            : all;
}

// UnitVector -----------------------------------------------------------------

UnitVector::UnitVector(std::vector<double> components) : c_(std::move(components)) {
  check_finite(c_);
  const double n = std::sqrt(norm_sq(c_));
  if (std::abs(n - 1.0) > 1e-12) {
    throw std::domain_error("vector does not have unit norm (norm - 1 = " + format_param(n - 1.0) + ")");
  }
}

UnitVector UnitVector::operator-() const {
  std::vector<double> neg(c_.size());
  std::transform(c_.begin(), c_.end(), neg.begin(), [](double v) { return -v; });
  return UnitVector(std::move(neg));
}

bool UnitVector::in_quadrant(int k, double tol) const noexcept {
  for (std::size_t i = static_cast<std::size_t>(std::max(k - 1, 0)); i < c_.size(); ++i) {
    if (c_[i] < -tol) return false;
  }
  return true;
}

// Distances and maps ---------------------------------------------------------

double cos_distance(const DomainPoint& p, const DomainPoint& q) {
  const DomainId& dom = p.domain();
  if (!dom.same_up_to_sheet(q.domain())) {
    throw std::invalid_argument("points are on different domains: " + dom.spec() + " and " +
                                q.domain().spec());
  }
  if (dom.sheet() != q.domain().sheet()) {
    throw std::invalid_argument("points are on different sheets of " + dom.spec());
  }
  if (p.coords() == q.coords()) return 1.0;

  const double rho2 = dom.rho() * dom.rho();
  double c = 0.0;
  switch (dom.kind()) {
    case DomainKind::sphere:
    case DomainKind::quadrant:
      c = dot(p.coords(), q.coords());
      break;
    case DomainKind::ball:
      c = dot(p.x(), q.x()) + radical(1.0 - norm_sq(p.x())) * radical(1.0 - norm_sq(q.x()));
      break;
    case DomainKind::hyperbolic_surface: {
      const double t = p.t(), s = q.t();
      c = dot(p.x(), q.x()) + radical(1.0 + rho2 - t * t) * radical(1.0 + rho2 - s * s);
      break;
    }
    case DomainKind::solid_hyperboloid: {
      const double t = p.t(), s = q.t();
      c = dot(p.x(), q.x()) +
          radical(t * t - rho2 - norm_sq(p.x())) * radical(s * s - rho2 - norm_sq(q.x())) +
          radical(1.0 + rho2 - t * t) * radical(1.0 + rho2 - s * s);
      break;
    }
    case DomainKind::cone_surface: {
      const double t = p.t(), s = q.t();
      c = radical(0.5 * (t * s + dot(p.x(), q.x()))) + radical(1.0 - t) * radical(1.0 - s);
      break;
    }
    case DomainKind::simplex: {
      double sx = 0.0, sy = 0.0;
      for (std::size_t i = 0; i < p.coords().size(); ++i) {
        c += radical(p.coords()[i]) * radical(q.coords()[i]);
        sx += p.coords()[i];
        sy += q.coords()[i];
      }
      c += radical(1.0 - sx) * radical(1.0 - sy);
      break;
    }
  }
  return std::clamp(c, -1.0, 1.0);
}

double distance(const DomainPoint& p, const DomainPoint& q) { return std::acos(cos_distance(p, q)); }

UnitVector embed(const DomainPoint& p) {
  const DomainId& dom = p.domain();
  const double rho2 = dom.rho() * dom.rho();
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(dom.sphere_dim() + 1));
  switch (dom.kind()) {
    case DomainKind::sphere:
    case DomainKind::quadrant:
      v = p.coords();
      break;
    case DomainKind::ball:
      v.assign(p.x().begin(), p.x().end());
      v.push_back(radical(1.0 - norm_sq(p.x())));
      break;
    case DomainKind::hyperbolic_surface: {
      const double t = p.t();
      v.assign(p.x().begin(), p.x().end());
      v.push_back(radical(1.0 + rho2 - t * t));
      break;
    }
    case DomainKind::solid_hyperboloid: {
      const double t = p.t();
      v.assign(p.x().begin(), p.x().end());
      v.push_back(radical(t * t - rho2 - norm_sq(p.x())));
      v.push_back(radical(1.0 + rho2 - t * t));
      break;
    }
    case DomainKind::cone_surface: {
      const double x1 = p.coords()[0], x2 = p.coords()[1], t = p.t();
      v = {radical(0.5 * (t - x1)) * sign_of(x2), radical(0.5 * (t + x1)), radical(1.0 - t)};
      break;
    }
    case DomainKind::simplex: {
      double s = 0.0;
      for (double xi : p.coords()) {
        v.push_back(radical(xi));
        s += xi;
      }
      v.push_back(radical(1.0 - s));
      break;
    }
  }
  return UnitVector(std::move(v));
}

DomainPoint unembed(const UnitVector& v, const DomainId& target) {
  const auto n = static_cast<std::size_t>(target.sphere_dim() + 1);
  if (v.size() != n) {
    throw std::domain_error("vector has " + std::to_string(v.size()) + " components, " +
                            target.spec() + " embeds into R^" + std::to_string(n));
  }
  if (!v.in_quadrant(target.image_quadrant())) {
    throw std::domain_error("vector is outside the image quadrant of " + target.spec());
  }
  const auto& c = v.components();
  const double rho2 = target.rho() * target.rho();
  const double sheet_sign = target.sheet() == Sheet::upper ? 1.0 : -1.0;
  const auto d = static_cast<std::size_t>(target.dim());
  switch (target.kind()) {
    case DomainKind::sphere:
    case DomainKind::quadrant:
      return DomainPoint(target, c);
    case DomainKind::ball:
      return DomainPoint(target, std::vector<double>(c.begin(), c.begin() + static_cast<long>(d)));
    case DomainKind::hyperbolic_surface: {
      std::vector<double> coords(c.begin(), c.begin() + static_cast<long>(d));
      coords.push_back(sheet_sign * std::sqrt(1.0 + rho2 - c[d] * c[d]));
      return DomainPoint(target, std::move(coords));
    }
    case DomainKind::solid_hyperboloid: {
      std::vector<double> coords(c.begin(), c.begin() + static_cast<long>(d - 1));
      coords.push_back(sheet_sign * std::sqrt(1.0 + rho2 - c[d] * c[d]));
      return DomainPoint(target, std::move(coords));
    }
    case DomainKind::cone_surface:
      return DomainPoint(target, {c[1] * c[1] - c[0] * c[0], 2.0 * c[0] * c[1], 1.0 - c[2] * c[2]});
    case DomainKind::simplex: {
      std::vector<double> coords(d);
      for (std::size_t i = 0; i < d; ++i) coords[i] = c[i] * c[i];
      return DomainPoint(target, std::move(coords));
    }
  }
  throw std::logic_error("unreachable");
}

// Sampling -------------------------------------------------------------------

QuadrantSampler::QuadrantSampler(DomainId domain, std::uint64_t seed)
    : domain_(domain), engine_(seed) {}

UnitVector QuadrantSampler::next_vector() {
  const auto n = static_cast<std::size_t>(domain_.sphere_dim() + 1);
  std::vector<double> v(n);
  double s = 0.0;
  do {
    for (double& x : v) x = normal_(engine_);
    s = norm_sq(v);
  } while (s < 1e-300);
  const double inv = 1.0 / std::sqrt(s);
  const auto first = static_cast<std::size_t>(domain_.image_quadrant() - 1);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] *= inv;
    if (i >= first) v[i] = std::abs(v[i]);
  }
  return UnitVector(std::move(v));
}

std::vector<DomainPoint> sample(const DomainId& domain, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("sample size must be >= 1");
  QuadrantSampler sampler(domain, seed);
  std::vector<DomainPoint> out;
  out.reserve(n);
  const std::size_t budget = 100 * n + 1000;
  for (std::size_t draws = 0; out.size() < n; ++draws) {
    if (draws >= budget) {
      throw NumericalError("sample: rejection budget exhausted after " + std::to_string(draws) +
                           " draws with " + std::to_string(out.size()) + " distinct points");
    }
    DomainPoint p = sampler.next();
    const bool distinct = std::all_of(out.begin(), out.end(), [&](const DomainPoint& q) {
      return distance(p, q) > kDistinctTol;
    });
    if (distinct) out.push_back(std::move(p));
  }
  return out;
}

std::pair<UnitVector, UnitVector> antipodal_pair(const DomainId& sphere, std::uint64_t seed) {
  if (sphere.kind() != DomainKind::sphere) {
    throw std::invalid_argument("antipodal pairs exist only on the full sphere, not on " + sphere.spec());
  }
  QuadrantSampler sampler(sphere, seed);
  UnitVector xi = sampler.next_vector();
  UnitVector neg = -xi;
  return {std::move(xi), std::move(neg)};
}

double min_pairwise_distance(std::span<const DomainPoint> points) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      best = std::min(best, distance(points[i], points[j]));
    }
  }
  return best;
}

}  // namespace pdk
