#include "pdk/kernels.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pdk/errors.hpp"
#include "pdk/io.hpp"

namespace pdk {

namespace {

double radical(double v) noexcept { return std::sqrt(std::max(0.0, v)); }

double zonal_clamped(Lambda lambda, int n, double t) { return zonal(lambda, n, std::clamp(t, -1.0, 1.0)); }

void check_point(const DomainId& domain, const DomainPoint& p) {
  if (!domain.same_up_to_sheet(p.domain())) {
    throw std::invalid_argument("point on " + p.domain().spec() + " passed for " + domain.spec());
  }
}

}  // namespace

KernelMatrix kernel_matrix(const CoefficientSeries& series, std::span<const DomainPoint> points) {
  if (points.empty()) throw std::invalid_argument("kernel_matrix needs at least one point");
  const DomainId& domain = points.front().domain();
  for (const auto& p : points) {
    if (!(p.domain() == domain)) {
      throw std::invalid_argument("kernel_matrix: mixed domains or sheets (" + domain.spec() + " and " +
                                  p.domain().spec() + ")");
    }
  }
  if (domain.sphere_dim() < 2) {
    throw std::invalid_argument("kernel_matrix: " + domain.spec() + " embeds into S^1, need d >= 2");
  }
  if (!(series.lambda() == domain.lambda())) {
    throw std::invalid_argument("kernel_matrix: series lambda " + format_double(series.lambda().value()) +
                                " does not match " + format_double(domain.lambda().value()) + " for " +
                                domain.spec());
  }
  if (domain.requires_even() && !series.even_support()) {
    throw std::invalid_argument("kernel_matrix: " + domain.spec() + " requires an even series");
  }

  const auto n = static_cast<Eigen::Index>(points.size());
  KernelMatrix k;
  k.entries.resize(n, n);
  const double diag = series_eval(series, 1.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    k.entries(i, i) = diag;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = series_eval(series, cos_distance(points[static_cast<std::size_t>(i)],
                                                        points[static_cast<std::size_t>(j)]));
      k.entries(i, j) = v;
      k.entries(j, i) = v;
    }
  }
  k.meta = KernelMeta{domain.spec(), series_id(series), points_hash(domain, points)};
  return k;
}

double default_psd_tol(const Eigen::MatrixXd& m) {
  return 1e-8 * static_cast<double>(m.rows()) * m.cwiseAbs().maxCoeff();
}

double default_pd_tol(const Eigen::MatrixXd& m) {
  return 1e-10 * static_cast<double>(m.rows()) * m.cwiseAbs().maxCoeff();
}

PsdReport psd_check(const Eigen::MatrixXd& m, double psd_tol, double pd_tol, double rank_rel_tol) {
  if (m.rows() != m.cols() || m.rows() == 0) throw std::invalid_argument("psd_check: need a square matrix");
  const double scale = m.cwiseAbs().maxCoeff();
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(scale, 1.0)) {
    throw std::invalid_argument("psd_check: matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("psd_check: eigensolver failed");
  const auto& ev = solver.eigenvalues();

  PsdReport r;
  r.min_eigenvalue = ev.minCoeff();
  r.max_eigenvalue = ev.maxCoeff();
  r.psd_tol = psd_tol;
  r.pd_tol = pd_tol;
  if (r.max_eigenvalue > 0.0) {
    const double cut = rank_rel_tol * r.max_eigenvalue;
    r.rank_estimate = static_cast<std::size_t>((ev.array() > cut).count());
  }
  r.is_psd = r.min_eigenvalue >= -psd_tol;
  r.is_pd = r.is_psd && r.min_eigenvalue > pd_tol;
  return r;
}

PsdReport psd_check(const KernelMatrix& m, double psd_tol, double pd_tol) {
  return psd_check(m.entries, psd_tol, pd_tol);
}

PsdReport psd_check(const KernelMatrix& m) {
  return psd_check(m.entries, default_psd_tol(m.entries), default_pd_tol(m.entries));
}

Eigen::MatrixXd hadamard(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("hadamard: shape mismatch");
  return a.cwiseProduct(b);
}

namespace {

// Calls emit(arg, zonal_degree) for each addition-formula term, all-plus first.
// Returns the number of terms.
template <class Emit>
std::size_t for_each_addition_term(const DomainId& domain, int n, const DomainPoint& p, const DomainPoint& q,
                                   AdditionVariant variant, Emit&& emit) {
  if (n < 0) throw std::invalid_argument("degree must be >= 0");
  check_point(domain, p);
  check_point(domain, q);
  const double rho2 = domain.rho() * domain.rho();

  switch (domain.kind()) {
    case DomainKind::sphere:
      emit(dot(p.coords(), q.coords()), n);
      return 1;
    case DomainKind::quadrant:
      throw std::invalid_argument("no addition formula for quadrant domains");
    case DomainKind::ball: {
      const double xy = dot(p.x(), q.x());
      const double r = radical(1.0 - dot(p.x(), p.x())) * radical(1.0 - dot(q.x(), q.x()));
      emit(xy + r, n);
      emit(xy - r, n);
      return 2;
    }
    case DomainKind::hyperbolic_surface: {
      const double t = p.t(), s = q.t();
      const double xy = dot(p.x(), q.x()) * sign_of(t * s);
      const double shift = variant == AdditionVariant::distance_consistent ? 1.0 + rho2 : 1.0;
      const double r = radical(shift - t * t) * radical(shift - s * s);
      emit(xy + r, n);
      emit(xy - r, n);
      return 2;
    }
    case DomainKind::solid_hyperboloid: {
      const double t = p.t(), s = q.t();
      const double xy = dot(p.x(), q.x());
      const double inner = radical(t * t - rho2 - dot(p.x(), p.x())) * radical(s * s - rho2 - dot(q.x(), q.x()));
      const double outer = radical(1.0 + rho2 - t * t) * radical(1.0 + rho2 - s * s);
      const double sg = sign_of(t * s);
      for (double e1 : {1.0, -1.0}) {
        for (double e2 : {1.0, -1.0}) emit((xy + e1 * inner) * sg + e2 * outer, n);
      }
      return 4;
    }
    case DomainKind::cone_surface: {
      const double t = p.t(), s = q.t();
      const double xy = dot(p.x(), q.x());
      const double c = radical(1.0 - t) * radical(1.0 - s);
      for (double e1 : {1.0, -1.0}) {
        const double a = radical(0.5 * (t * s + e1 * xy));
        for (double e2 : {1.0, -1.0}) emit(a + e2 * c, 2 * n);
      }
      return 4;
    }
    case DomainKind::simplex: {
      const auto& x = p.coords();
      const auto& y = q.coords();
      const std::size_t d = x.size();
      std::vector<double> prod(d);
      double sx = 0.0, sy = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        prod[i] = radical(x[i]) * radical(y[i]);
        sx += x[i];
        sy += y[i];
      }
      const double tail = radical(1.0 - sx) * radical(1.0 - sy);
      const std::size_t combos = std::size_t{1} << d;
      for (std::size_t mask = 0; mask < combos; ++mask) {
        double arg = tail;
        for (std::size_t i = 0; i < d; ++i) arg += (mask >> i & 1u) ? -prod[i] : prod[i];
        emit(arg, 2 * n);
      }
      return combos;
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace

std::vector<double> addition_terms(const DomainId& domain, int n, const DomainPoint& p, const DomainPoint& q,
                                   AdditionVariant variant) {
  const Lambda lambda = domain.lambda();
  std::vector<double> out;
  for_each_addition_term(domain, n, p, q, variant,
                         [&](double arg, int degree) { out.push_back(zonal_clamped(lambda, degree, arg)); });
  return out;
}

double reproducing_kernel(const DomainId& domain, int n, const DomainPoint& p, const DomainPoint& q,
                          AdditionVariant variant) {
  const Lambda lambda = domain.lambda();
  double sum = 0.0;
  const std::size_t count = for_each_addition_term(
      domain, n, p, q, variant, [&](double arg, int degree) { sum += zonal_clamped(lambda, degree, arg); });
  return sum / static_cast<double>(count);
}

double same_sheet_plus_kernel(const DomainId& domain, int n, const DomainPoint& p, const DomainPoint& q) {
  if (n < 0) throw std::invalid_argument("degree must be >= 0");
  check_point(domain, p);
  check_point(domain, q);
  const int degree = domain.requires_even() ? 2 * n : n;
  return zonal(domain.lambda(), degree, cos_distance(p, q));
}

std::uint64_t rank_bound(int sphere_dim, int max_degree) {
  if (max_degree < 0) throw std::invalid_argument("rank_bound: max_degree must be >= 0");
  if (sphere_dim < 1) throw std::invalid_argument("rank_bound: sphere dimension must be >= 1");
  const auto base = static_cast<std::uint64_t>(sphere_dim + 1);
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t total = 0;
  for (int m = 0; 2 * m <= max_degree; ++m) {
    std::uint64_t term = 1;
    for (int e = 0; e < max_degree - 2 * m; ++e) {
      if (term > kMax / base) throw std::overflow_error("rank_bound overflows 64 bits");
      term *= base;
    }
    if (total > kMax - term) throw std::overflow_error("rank_bound overflows 64 bits");
    total += term;
  }
  return total;
}

}  // namespace pdk
