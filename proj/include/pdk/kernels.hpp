#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pdk/domains.hpp"
#include "pdk/gegenbauer.hpp"

namespace pdk {

struct KernelMeta {
  std::string domain;
  std::uint64_t series_id = 0;
  std::uint64_t points_hash = 0;
};

/// f[Xi_N] = [f(cos d(x_i, x_j))], exactly symmetric.
struct KernelMatrix {
  Eigen::MatrixXd entries;
  KernelMeta meta;

  Eigen::Index size() const noexcept { return entries.rows(); }
};

struct PsdReport {
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  std::size_t rank_estimate = 0;
  bool is_psd = false;
  bool is_pd = false;
  double psd_tol = 0.0;
  double pd_tol = 0.0;
};

/// Relative eigenvalue cutoff for rank_estimate.
inline constexpr double kRankRelTol = 1e-9;

/// Builds f[Xi_N] for points on one domain and sheet. The series lambda must
/// be (d - 1) / 2 of the ambient sphere and, on the cone and simplex, the
/// series must have even support.
KernelMatrix kernel_matrix(const CoefficientSeries& series, std::span<const DomainPoint> points);

/// psd_tol = 1e-8 N max|a_ij|, pd_tol = 1e-10 N max|a_ij|.
double default_psd_tol(const Eigen::MatrixXd& m);
double default_pd_tol(const Eigen::MatrixXd& m);

PsdReport psd_check(const Eigen::MatrixXd& m, double psd_tol, double pd_tol,
                    double rank_rel_tol = kRankRelTol);
PsdReport psd_check(const KernelMatrix& m, double psd_tol, double pd_tol);
PsdReport psd_check(const KernelMatrix& m);

/// Entrywise product.
Eigen::MatrixXd hadamard(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// Which radical the hyperbolic-surface addition formula uses:
/// sqrt(1 + rho^2 - t^2) (consistent with the distance) or the
/// rho-free sqrt(1 - t^2).
enum class AdditionVariant { distance_consistent, rho_free };

/// The individual zonal terms averaged by the addition formula, all-plus
/// term first. The rho_free variant only differs on the hyperbolic surface.
std::vector<double> addition_terms(const DomainId& domain, int n, const DomainPoint& p, const DomainPoint& q,
                                   AdditionVariant variant = AdditionVariant::distance_consistent);

/// Reproducing kernel of the orthogonal polynomials of degree n (for the
/// Chebyshev-type weight) via the addition formula: an average of zonal
/// kernels over sign reflections. On the cone and simplex the zonal degree
/// is 2n. Hyperbolic points may lie on either sheet. Throws for quadrants.
double reproducing_kernel(const DomainId& domain, int n, const DomainPoint& p, const DomainPoint& q,
                          AdditionVariant variant = AdditionVariant::distance_consistent);

/// Z_n(cos d(p, q)) (Z_{2n} on cone and simplex): the all-plus term of the
/// addition formula. Points must share a sheet.
double same_sheet_plus_kernel(const DomainId& domain, int n, const DomainPoint& p, const DomainPoint& q);

/// sum_{m=0}^{floor(M/2)} (d+1)^(M-2m): rank ceiling for single-parity
/// polynomial kernels of degree M on S^d.
std::uint64_t rank_bound(int sphere_dim, int max_degree);

}  // namespace pdk
