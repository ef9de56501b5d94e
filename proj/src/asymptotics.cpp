#include "exset/asymptotics.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "exset/error.hpp"
#include "exset/quadrature.hpp"

namespace exset {

namespace {

constexpr double kInnerAbsTol = 1e-14;
constexpr double kInnerRelTol = 1e-13;

/// g for standardized levels x, y.
double indicator_cov_std(double x, double y, double rho) {
  if (rho == 0.0) return 0.0;
  const double theta_max = std::asin(rho);
  const double diff2 = (x - y) * (x - y);
  const double sum2 = (x + y) * (x + y);
  const double xy = x * y;
  // exponent (x^2 - 2xy sin + y^2) / (2 cos^2), split so that the limit at
  // |theta| = pi/2 stays finite when x = y (or x = -y).
  auto integrand = [&](double theta) {
    const double s = std::sin(theta);
    const double c2 = (1.0 - s) * (1.0 + s);
    double e;
    if (theta >= 0.0) {
      e = xy / (1.0 + s);
      if (diff2 > 0.0) e += c2 > 0.0 ? diff2 / (2.0 * c2) : std::numeric_limits<double>::infinity();
    } else {
      e = -xy / (1.0 - s);
      if (sum2 > 0.0) e += c2 > 0.0 ? sum2 / (2.0 * c2) : std::numeric_limits<double>::infinity();
    }
    return std::exp(-e);
  };
  const auto r = integrate(integrand, 0.0, theta_max, kInnerAbsTol, kInnerRelTol);
  return r.value / (2.0 * std::numbers::pi);
}

double sphere_area(int d) { return d * unit_ball_volume(d); }

void require_integrable(const CovarianceModel& model) {
  if (model.family() == CovarianceFamily::cauchy && model.beta() <= model.dim()) {
    throw Error("cauchy correlation with beta <= d is not integrable; the asymptotic variance is infinite");
  }
}

/// Bound on int_{|t| > R} |g(rho(t))| dt using |g| <= arcsin(rho)/(2 pi) <= rho/4.
double tail_bound(const CovarianceModel& model, double radius) {
  const int d = model.dim();
  const double s = model.scale();
  double radial = 0.0;
  switch (model.family()) {
    case CovarianceFamily::exponential:
      radial = std::pow(s, d) * boost::math::tgamma(static_cast<double>(d), radius / s);
      break;
    case CovarianceFamily::squared_exponential:
      radial = 0.5 * std::pow(2.0 * s * s, 0.5 * d) *
               boost::math::tgamma(0.5 * d, radius * radius / (2.0 * s * s));
      break;
    case CovarianceFamily::cauchy: {
      const double b = model.beta();
      radial = std::pow(s, b) * std::pow(radius, d - b) / (b - d);
      break;
    }
    case CovarianceFamily::nugget: return 0.0;
  }
  return sphere_area(d) * 0.25 * radial;
}

/// d kappa_d int_0^R r^{d-1} f(rho(r)) dr on geometric panels; the first
/// panel uses r = w^2 to absorb the sqrt(r) behaviour of f near rho = 1.
template <class F>
QuadResult radial_integral(const CovarianceModel& model, double radius, F&& f, double tol) {
  const int d = model.dim();
  const double area = sphere_area(d);
  auto radial = [&](double r) { return std::pow(r, d - 1) * f(model.corr_radial(r)); };

  std::vector<double> edges{0.0, std::min(model.scale(), radius)};
  while (edges.back() < radius) edges.push_back(std::min(2.0 * edges.back(), radius));
  const double panel_tol = tol / (2.0 * area * static_cast<double>(edges.size()));

  QuadResult total{0.0, 0.0, 0, true};
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    QuadResult part;
    if (i == 0) {
      part = integrate([&](double w) { return 2.0 * w * radial(w * w); }, 0.0,
                       std::sqrt(edges[1]), panel_tol, 1e-12);
    } else {
      part = integrate(radial, edges[i], edges[i + 1], panel_tol, 1e-12);
    }
    total.value += part.value;
    total.error += part.error;
    total.intervals += part.intervals;
  }
  total.value *= area;
  total.error *= area;
  return total;
}

void check_tolerance(const VarianceReport& rep, const char* what) {
  if (rep.quadrature_error_estimate > rep.requested_tolerance) {
    std::ostringstream os;
    os << what << ": error estimate " << rep.quadrature_error_estimate << " exceeds tolerance "
       << rep.requested_tolerance << " (best estimate " << rep.value << ")";
    throw QuadratureFailure(os.str(), rep.value, rep.quadrature_error_estimate);
  }
}

void require_levels(std::span<const double> levels) {
  if (levels.empty()) throw Error("level vector is empty");
  for (std::size_t i = 1; i < levels.size(); ++i)
    if (!(levels[i] > levels[i - 1])) throw Error("levels must be distinct and increasing");
}

/// Weighted lattice sum h^d sum_k w(k) g(rho(hk)) over |hk| <= trunc, with
/// g evaluated once per distinct squared integer norm.
template <class Weight>
double lattice_sum(const GaussianFieldSpec& spec, double x, double y, double h, double trunc,
                   std::span<const std::size_t> bound, Weight&& weight) {
  const int d = spec.dim();
  const auto& model = spec.cov;
  const double kmax_real = std::floor(trunc / h + 1e-12);
  if (kmax_real > 1e8) throw Error("lattice too fine for the truncation radius");
  const auto kmax = static_cast<std::int64_t>(kmax_real);
  std::int64_t kb[3] = {kmax, kmax, kmax};
  for (int i = 0; i < d; ++i)
    if (!bound.empty()) kb[i] = std::min<std::int64_t>(kmax, static_cast<std::int64_t>(bound[i]) - 1);
  std::int64_t points = 1;
  for (int i = 0; i < d; ++i) points *= kb[i] + 1;
  if (points > 200'000'000) throw Error("lattice sum too large");

  const auto m_max = static_cast<std::size_t>(kmax * kmax);
  std::vector<double> cache(d == 1 ? 0 : m_max + 1, std::numeric_limits<double>::quiet_NaN());
  auto g_of = [&](std::int64_t m) {
    auto eval = [&] {
      return indicator_cov_std(x, y, model.corr_radial(h * std::sqrt(static_cast<double>(m))));
    };
    if (d == 1) return eval();
    double& c = cache[static_cast<std::size_t>(m)];
    if (std::isnan(c)) c = eval();
    return c;
  };

  // Sum over the nonnegative orthant with multiplicity 2^(#nonzero axes).
  const auto k2max = kmax * kmax;
  double total = 0.0;
  std::int64_t k[3] = {0, 0, 0};
  while (true) {
    std::int64_t m = 0;
    int nonzero = 0;
    for (int i = 0; i < d; ++i) {
      m += k[i] * k[i];
      nonzero += k[i] != 0;
    }
    if (m <= k2max) {
      const double w = weight(k);
      if (w != 0.0) total += static_cast<double>(1 << nonzero) * w * g_of(m);
    }
    int i = d - 1;
    while (i >= 0 && ++k[i] > kb[i]) k[i--] = 0;
    if (i < 0) break;
  }
  return total;
}

double default_trunc(const CovarianceModel& model, double trunc) {
  return trunc > 0.0 ? trunc : model.cutoff_radius(kCorrelationCutoff);
}

}  // namespace

double CovMatrix::min_eigenvalue() const {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(entries, Eigen::EigenvaluesOnly)
      .eigenvalues()
      .minCoeff();
}

double CovMatrix::max_eigenvalue() const {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(entries, Eigen::EigenvaluesOnly)
      .eigenvalues()
      .maxCoeff();
}

bool CovMatrix::is_psd(double rel_tol) const {
  const auto ev =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(entries, Eigen::EigenvaluesOnly).eigenvalues();
  return ev.minCoeff() >= -rel_tol * std::max(ev.maxCoeff(), 0.0);
}

double indicator_cov_gauss(double u, double v, double rho, const GaussianFieldSpec& spec) {
  if (!(std::abs(rho) <= 1.0)) throw Error("correlation must lie in [-1, 1]");
  const double tau = spec.stddev();
  return indicator_cov_std((u - spec.mean) / tau, (v - spec.mean) / tau, rho);
}

VarianceReport cross_cov(const GaussianFieldSpec& spec, double u, double v, double tol) {
  VarianceReport rep;
  rep.requested_tolerance = tol;
  const auto& model = spec.cov;
  if (model.family() == CovarianceFamily::nugget) return rep;
  require_integrable(model);
  const double tau = spec.stddev();
  const double x = (u - spec.mean) / tau, y = (v - spec.mean) / tau;
  // Past the rho < 1e-10 radius, extend until the tail bound fits the budget.
  double radius = model.cutoff_radius(kCorrelationCutoff);
  for (int i = 0; i < 200 && tail_bound(model, radius) > 0.25 * tol; ++i) radius *= 1.2;
  const double tail = tail_bound(model, radius);
  const auto q = radial_integral(
      model, radius, [&](double rho) { return indicator_cov_std(x, y, rho); },
      std::max(tol - tail, 0.5 * tol));
  rep.value = q.value;
  rep.truncation_radius = radius;
  rep.quadrature_error_estimate = q.error + tail;
  check_tolerance(rep, "asymptotic covariance");
  return rep;
}

VarianceReport sigma2(const GaussianFieldSpec& spec, double u, double tol) {
  return cross_cov(spec, u, u, tol);
}

VarianceReport lattice_cross_cov(const GaussianFieldSpec& spec, double u, double v, double h,
                                 double trunc) {
  if (!(h > 0.0)) throw Error("lattice spacing must be positive");
  const auto& model = spec.cov;
  const double tau = spec.stddev();
  const double x = (u - spec.mean) / tau, y = (v - spec.mean) / tau;
  const double radius = default_trunc(model, trunc);
  VarianceReport rep;
  rep.lattice_spacing = h;
  rep.truncation_radius = radius;
  const double sum = lattice_sum(spec, x, y, h, radius, {}, [](const std::int64_t*) { return 1.0; });
  rep.value = std::pow(h, spec.dim()) * sum;
  rep.quadrature_error_estimate = model.family() == CovarianceFamily::nugget
                                      ? 0.0
                                      : tail_bound(model, std::max(radius - h, 0.0)) + 1e-12;
  rep.requested_tolerance = rep.quadrature_error_estimate;
  return rep;
}

VarianceReport sigma2_lattice(const GaussianFieldSpec& spec, double u, double h, double trunc) {
  return lattice_cross_cov(spec, u, u, h, trunc);
}

CovMatrix sigma_matrix(const GaussianFieldSpec& spec, std::span<const double> levels, double tol) {
  require_levels(levels);
  const auto r = static_cast<Eigen::Index>(levels.size());
  CovMatrix out{{levels.begin(), levels.end()}, Eigen::MatrixXd(r, r), 0.0};
  for (Eigen::Index l = 0; l < r; ++l) {
    for (Eigen::Index m = l; m < r; ++m) {
      const auto rep = cross_cov(spec, levels[l], levels[m], tol);
      out.entries(l, m) = out.entries(m, l) = rep.value;
      out.error_estimate = std::max(out.error_estimate, rep.quadrature_error_estimate);
    }
  }
  return out;
}

CovMatrix lattice_sigma_matrix(const GaussianFieldSpec& spec, std::span<const double> levels,
                               double h) {
  require_levels(levels);
  const auto r = static_cast<Eigen::Index>(levels.size());
  CovMatrix out{{levels.begin(), levels.end()}, Eigen::MatrixXd(r, r), 0.0};
  for (Eigen::Index l = 0; l < r; ++l) {
    for (Eigen::Index m = l; m < r; ++m) {
      const auto rep = lattice_cross_cov(spec, levels[l], levels[m], h);
      out.entries(l, m) = out.entries(m, l) = rep.value;
      out.error_estimate = std::max(out.error_estimate, rep.quadrature_error_estimate);
    }
  }
  return out;
}

double fclt_cov(const GaussianFieldSpec& spec, double u, double v, double tol) {
  return cross_cov(spec, u, v, tol).value;
}

VarianceReport windowed_variance(const GaussianFieldSpec& spec, double u, double n, double tol) {
  if (!(n > 0.0)) throw Error("window side must be positive");
  VarianceReport rep;
  rep.requested_tolerance = tol;
  const auto& model = spec.cov;
  if (model.family() == CovarianceFamily::nugget) return rep;
  const int d = spec.dim();
  const double tau = spec.stddev();
  const double x = (u - spec.mean) / tau;
  const double reach = std::min(n, model.cutoff_radius(kCorrelationCutoff));
  rep.truncation_radius = reach;

  // 2^d int_{[0, reach]^d} g(|t|) prod (n - t_k) dt with t_k = w_k^2 on each axis.
  const double wmax = std::sqrt(reach);
  const double scale = std::pow(2.0, d);
  const double budget = tol / scale;
  // g takes the squared radius sum_k t_k^2.
  auto g = [&](double r2) { return indicator_cov_std(x, x, model.corr_radial(std::sqrt(r2))); };
  auto axis = [&](double w) { return 2.0 * w * (n - w * w); };

  QuadResult q;
  if (d == 1) {
    q = integrate([&](double w) { return axis(w) * g(std::pow(w, 4)); }, 0.0, wmax, budget, 1e-13);
  } else if (d == 2) {
    double inner_err = 0.0;
    const double inner_tol = budget / (4.0 * std::pow(n, 2));
    q = integrate(
        [&](double w1) {
          const double t1 = std::pow(w1, 4);
          const auto in = integrate([&](double w2) { return axis(w2) * g(t1 + std::pow(w2, 4)); }, 0.0,
                                    wmax, inner_tol, 1e-12);
          inner_err = std::max(inner_err, in.error);
          return axis(w1) * in.value;
        },
        0.0, wmax, 0.5 * budget, 1e-12);
    q.error += inner_err * n * n;
  } else {
    double inner_err = 0.0;
    const double inner_tol = budget / (8.0 * std::pow(n, 4));
    q = integrate(
        [&](double w1) {
          const double t1 = std::pow(w1, 4);
          const auto mid = integrate(
              [&](double w2) {
                const double t12 = t1 + std::pow(w2, 4);
                const auto in = integrate([&](double w3) { return axis(w3) * g(t12 + std::pow(w3, 4)); },
                                          0.0, wmax, inner_tol, 1e-10);
                inner_err = std::max(inner_err, in.error);
                return axis(w2) * in.value;
              },
              0.0, wmax, inner_tol * n * n, 1e-10);
          inner_err = std::max(inner_err, mid.error / (n * n));
          return axis(w1) * mid.value;
        },
        0.0, wmax, 0.5 * budget, 1e-10);
    q.error += inner_err * std::pow(n, 4);
  }
  rep.value = scale * q.value;
  const double tail = reach < n ? tail_bound(model, reach) * std::pow(n, d) : 0.0;
  rep.quadrature_error_estimate = scale * q.error + tail;
  check_tolerance(rep, "windowed variance");
  return rep;
}

VarianceReport lattice_windowed_variance(const GaussianFieldSpec& spec, double u,
                                         const GridWindow& window) {
  if (window.dim() != spec.dim()) throw DimensionMismatch("window and field dimensions differ");
  const auto& model = spec.cov;
  const double tau = spec.stddev();
  const double x = (u - spec.mean) / tau;
  const double h = window.spacing;
  const double radius = model.cutoff_radius(kCorrelationCutoff);
  const auto& n = window.dims;
  const double sum = lattice_sum(spec, x, x, h, radius, n, [&](const std::int64_t* k) {
    double w = 1.0;
    for (std::size_t i = 0; i < n.size(); ++i) w *= static_cast<double>(n[i]) - static_cast<double>(k[i]);
    return w;
  });
  VarianceReport rep;
  rep.value = std::pow(h, 2 * spec.dim()) * sum;
  rep.lattice_spacing = h;
  rep.truncation_radius = radius;
  rep.quadrature_error_estimate =
      model.family() == CovarianceFamily::nugget
          ? 0.0
          : std::pow(h, spec.dim()) * window.volume() * tail_bound(model, std::max(radius - h, 0.0));
  rep.requested_tolerance = rep.quadrature_error_estimate;
  return rep;
}

double mean_surface_area(const GaussianFieldSpec& spec, double u, double window_volume) {
  const double lambda2 = second_spectral_moment(spec.cov);
  const int d = spec.dim();
  const double tau2 = spec.cov.variance();
  const double z2 = (u - spec.mean) * (u - spec.mean) / tau2;
  // grad(X / tau) ~ N(0, lambda2 / tau^2 I_d), so E|grad| = sqrt(2 lambda2 / tau^2) G((d+1)/2) / G(d/2).
  const double mean_grad =
      std::sqrt(2.0 * lambda2 / tau2) * std::tgamma(0.5 * (d + 1)) / std::tgamma(0.5 * d);
  return window_volume * std::exp(-0.5 * z2) * mean_grad / std::sqrt(2.0 * std::numbers::pi);
}

double mean_surface_area_display(const GaussianFieldSpec& spec, double u, double window_volume) {
  return 0.5 * mean_surface_area(spec, u, window_volume);
}

}  // namespace exset
