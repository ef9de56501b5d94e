#pragma once

// Stationary field specifications and the analytic quantities derived from
// them. All types are immutable values once constructed.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace exset {

enum class CovarianceFamily { exponential, squared_exponential, cauchy, nugget };

std::string_view to_string(CovarianceFamily family);
CovarianceFamily parse_covariance_family(std::string_view name);

/// Isotropic, nonnegative stationary covariance C(t) = variance * rho(|t|).
///
///   exponential          rho(r) = exp(-r / scale)
///   squared_exponential  rho(r) = exp(-r^2 / (2 scale^2))
///   cauchy               rho(r) = (1 + r^2 / scale^2)^(-beta / 2)
///   nugget               rho(0) = 1, rho(r) = 0 for r > 0   (lattice-only)
class CovarianceModel {
 public:
  CovarianceModel() = default;
  CovarianceModel(CovarianceFamily family, double scale, double variance, int dim,
                  double beta = 0.0);

  CovarianceFamily family() const noexcept { return family_; }
  double scale() const noexcept { return scale_; }
  double variance() const noexcept { return variance_; }
  double beta() const noexcept { return beta_; }
  int dim() const noexcept { return dim_; }

  /// Correlation as a function of the Euclidean lag length.
  double corr_radial(double r) const;

  /// Polynomial decay exponent alpha of |C(t)| = O(|t|^-alpha); +inf for
  /// families decaying faster than any polynomial.
  double decay_exponent() const;

  /// Smallest radius beyond which rho stays below `eps`.
  double cutoff_radius(double eps = 1e-10) const;

  bool is_smooth() const noexcept {
    return family_ == CovarianceFamily::squared_exponential ||
           family_ == CovarianceFamily::cauchy;
  }

 private:
  CovarianceFamily family_ = CovarianceFamily::exponential;
  double scale_ = 1.0;
  double variance_ = 1.0;
  int dim_ = 1;
  double beta_ = 0.0;
};

double corr_at(const CovarianceModel& model, std::span<const double> t);
double cov_at(const CovarianceModel& model, std::span<const double> t);

/// lambda_2 = -d^2 C(o) / dt_1^2. Throws NoSpectralMoment for the
/// exponential and nugget families.
double second_spectral_moment(const CovarianceModel& model);

/// Returns a message when the decay exponent does not exceed 3d, the
/// threshold the fixed-level CLT for quasi-associated fields asks for.
std::optional<std::string> decay_hypothesis_warning(const CovarianceModel& model);

struct GaussianFieldSpec {
  double mean = 0.0;
  CovarianceModel cov;

  double stddev() const;
  int dim() const noexcept { return cov.dim(); }
};

/// Psi(u) = P(X(o) > u).
double tail_prob(const GaussianFieldSpec& spec, double u);

/// Level u with tail_prob(spec, u) == p.
double tail_quantile(const GaussianFieldSpec& spec, double p);

enum class MarkLaw { deterministic, exponential };
enum class KernelShape { gaussian_bump, ball_indicator };

std::string_view to_string(MarkLaw law);
std::string_view to_string(KernelShape shape);
MarkLaw parse_mark_law(std::string_view name);
KernelShape parse_kernel_shape(std::string_view name);

/// Poisson shot noise X(t) = sum_i xi_i * phi(t - x_i). Kernels have unit
/// peak value: gaussian_bump phi(t) = exp(-|t|^2 / (2 width^2)), ball_indicator
/// phi(t) = 1{|t| <= width}.
struct ShotNoiseSpec {
  int dim = 2;
  double intensity = 1.0;
  MarkLaw marks = MarkLaw::deterministic;
  double mark_mean = 1.0;
  KernelShape kernel = KernelShape::gaussian_bump;
  double width = 1.0;
  double trunc_eps = 1e-10;

  void validate() const;

  double mark_second_moment() const;
  double kernel_value(double r) const;
  double kernel_integral() const;
  double kernel_sq_integral() const;
  /// Radius r_t with kernel_value(r) < trunc_eps for r > r_t.
  double truncation_radius() const;
  /// Integral of phi outside the ball of radius truncation_radius().
  double truncation_tail_mass() const;
  /// Bound on the bias of the truncated kernel sum: lambda * E xi * tail mass.
  double truncation_error_bound() const;

  /// Campbell: E X = lambda E xi int phi,  Var X = lambda E xi^2 int phi^2.
  double field_mean() const;
  double field_variance() const;
};

/// Regular lattice window: sites t = h * (i_1, ..., i_d), 0 <= i_k < dims[k].
/// Values are stored row-major with axis 0 slowest.
struct GridWindow {
  std::vector<std::size_t> dims;
  double spacing = 1.0;

  GridWindow() = default;
  GridWindow(std::vector<std::size_t> dims, double spacing);

  int dim() const noexcept { return static_cast<int>(dims.size()); }
  std::size_t site_count() const;
  /// h^d * number of sites; the reference volume of the site-count estimator.
  double volume() const;
  /// Volume of the box spanned by the sites, prod (n_k - 1) h.
  double hull_volume() const;
  /// Van Hove bound r * sum_k 2 / (n_k h) for dilation radius r.
  double vh_ratio(double r) const;

  bool operator==(const GridWindow&) const = default;
};

/// Volume of the unit ball in dimension d.
double unit_ball_volume(int d);

/// True when every dims entry grows strictly along the sequence.
bool is_vh_increasing(std::span<const GridWindow> windows);

std::string describe(const CovarianceModel& model);
std::string describe(const GaussianFieldSpec& spec);
std::string describe(const ShotNoiseSpec& spec);

}  // namespace exset
