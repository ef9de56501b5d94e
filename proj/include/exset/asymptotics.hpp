#pragma once

// Theoretical quantities predicted by the excursion-volume limit theorems
// for Gaussian fields, evaluated by adaptive quadrature.
//
// Throughout, g_{u,v}(rho) = cov(1{X(o) >= u}, 1{X(t) >= v}) for a Gaussian
// pair with correlation rho = rho(t). It is evaluated from the one-dimensional
// representation
//
//   g_{u,v}(rho) = 1/(2 pi) int_0^rho (1 - s^2)^(-1/2)
//                  exp(-(x^2 - 2 s x y + y^2) / (2 (1 - s^2))) ds,
//
// x = (u - a)/tau, y = (v - a)/tau, after the substitution s = sin(theta).

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <vector>

#include "exset/models.hpp"

namespace exset {

struct VarianceReport {
  double value = 0.0;
  /// Radius beyond which rho < 1e-10 and the integrand is bounded analytically.
  double truncation_radius = 0.0;
  double quadrature_error_estimate = 0.0;
  double requested_tolerance = 0.0;
  /// Present for lattice sums.
  std::optional<double> lattice_spacing;
};

struct CovMatrix {
  std::vector<double> levels;
  Eigen::MatrixXd entries;
  double error_estimate = 0.0;

  double min_eigenvalue() const;
  double max_eigenvalue() const;
  /// Smallest eigenvalue >= -rel_tol * largest.
  bool is_psd(double rel_tol = 1e-10) const;
};

inline constexpr double kDefaultTolerance = 1e-8;
inline constexpr double kCorrelationCutoff = 1e-10;

/// cov(1{X(o) >= u}, 1{X(t) >= v}) for corr(X(o), X(t)) = rho. Throws if |rho| > 1.
double indicator_cov_gauss(double u, double v, double rho, const GaussianFieldSpec& spec);

/// sigma^2(u) = int_{R^d} g_{u,u}(rho(t)) dt by radial reduction. The
/// nugget family has sigma^2 = 0 in the continuum. Throws QuadratureFailure
/// when the error estimate exceeds tol.
VarianceReport sigma2(const GaussianFieldSpec& spec, double u, double tol = kDefaultTolerance);

/// Continuum cross term int_{R^d} g_{u,v}(rho(t)) dt.
VarianceReport cross_cov(const GaussianFieldSpec& spec, double u, double v,
                         double tol = kDefaultTolerance);

/// h^d * sum over k in Z^d with |hk| <= trunc of g_{u,u}(rho(hk)); trunc <= 0
/// selects the radius where rho drops below 1e-10.
VarianceReport sigma2_lattice(const GaussianFieldSpec& spec, double u, double h,
                              double trunc = 0.0);

VarianceReport lattice_cross_cov(const GaussianFieldSpec& spec, double u, double v, double h,
                                 double trunc = 0.0);

/// Sigma(u) with entries cross_cov(u_l, u_m). Levels must be strictly increasing.
CovMatrix sigma_matrix(const GaussianFieldSpec& spec, std::span<const double> levels,
                       double tol = kDefaultTolerance);

/// Lattice analogue of sigma_matrix.
CovMatrix lattice_sigma_matrix(const GaussianFieldSpec& spec, std::span<const double> levels,
                               double h);

/// C_Y(u, v) of the limiting level-indexed Gaussian process.
double fclt_cov(const GaussianFieldSpec& spec, double u, double v, double tol = kDefaultTolerance);

/// sigma_n^2 = int_{[-n, n]^d} g_{u,u}(rho(t)) prod_k (n - |t_k|) dt, the
/// variance of the excursion volume in [0, n]^d.
VarianceReport windowed_variance(const GaussianFieldSpec& spec, double u, double n,
                                 double tol = kDefaultTolerance);

/// Exact variance of the site-count volume h^d #{X >= u} on a finite lattice
/// window: h^{2d} sum_k prod_i (n_i - |k_i|) g_{u,u}(rho(hk)).
VarianceReport lattice_windowed_variance(const GaussianFieldSpec& spec, double u,
                                         const GridWindow& window);

/// Expected boundary measure H^{d-1}(dA_u cap W) of a stationary smooth
/// Gaussian field; for d = 1 this is the expected number of level crossings.
double mean_surface_area(const GaussianFieldSpec& spec, double u, double window_volume);

/// The same expectation in the intrinsic-volume convention V_{d-1} = H^{d-1} / 2.
double mean_surface_area_display(const GaussianFieldSpec& spec, double u, double window_volume);

}  // namespace exset
