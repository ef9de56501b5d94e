#include "exset/models.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "exset/error.hpp"

namespace exset {

std::string_view to_string(CovarianceFamily family) {
  switch (family) {
    case CovarianceFamily::exponential: return "exponential";
    case CovarianceFamily::squared_exponential: return "squared_exponential";
    case CovarianceFamily::cauchy: return "cauchy";
    case CovarianceFamily::nugget: return "nugget";
  }
  return "?";
}

CovarianceFamily parse_covariance_family(std::string_view name) {
  if (name == "exponential") return CovarianceFamily::exponential;
  if (name == "squared_exponential") return CovarianceFamily::squared_exponential;
  if (name == "cauchy") return CovarianceFamily::cauchy;
  if (name == "nugget") return CovarianceFamily::nugget;
  throw ConfigError("unknown covariance family '" + std::string(name) + "'");
}

CovarianceModel::CovarianceModel(CovarianceFamily family, double scale, double variance,
                                 int dim, double beta)
    : family_(family), scale_(scale), variance_(variance), dim_(dim), beta_(beta) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ConfigError("covariance scale must be positive");
  if (!(variance > 0.0) || !std::isfinite(variance))
    throw ConfigError("covariance variance must be positive");
  if (dim < 1) throw ConfigError("dimension must be >= 1");
  if (family == CovarianceFamily::cauchy && !(beta > 0.0))
    throw ConfigError("cauchy exponent beta must be positive");
}

double CovarianceModel::corr_radial(double r) const {
  r = std::abs(r);
  switch (family_) {
    case CovarianceFamily::exponential: return std::exp(-r / scale_);
    case CovarianceFamily::squared_exponential: {
      const double q = r / scale_;
      return std::exp(-0.5 * q * q);
    }
    case CovarianceFamily::cauchy: {
      const double q = r / scale_;
      return std::pow(1.0 + q * q, -0.5 * beta_);
    }
    case CovarianceFamily::nugget: return r == 0.0 ? 1.0 : 0.0;
  }
  return 0.0;
}

double CovarianceModel::decay_exponent() const {
  if (family_ == CovarianceFamily::cauchy) return beta_;
  return std::numeric_limits<double>::infinity();
}

double CovarianceModel::cutoff_radius(double eps) const {
  const double log_inv = std::log(1.0 / eps);
  switch (family_) {
    case CovarianceFamily::exponential: return scale_ * log_inv;
    case CovarianceFamily::squared_exponential: return scale_ * std::sqrt(2.0 * log_inv);
    case CovarianceFamily::cauchy:
      return scale_ * std::sqrt(std::expm1(2.0 * log_inv / beta_));
    case CovarianceFamily::nugget: return 0.0;
  }
  return 0.0;
}

double corr_at(const CovarianceModel& model, std::span<const double> t) {
  if (static_cast<int>(t.size()) != model.dim()) {
    throw DimensionMismatch("lag has " + std::to_string(t.size()) + " components, model is " +
                            std::to_string(model.dim()) + "-dimensional");
  }
  double r2 = 0.0;
  for (double ti : t) {
    if (!std::isfinite(ti)) throw Error("lag must be finite");
    r2 += ti * ti;
  }
  return model.corr_radial(std::sqrt(r2));
}

double cov_at(const CovarianceModel& model, std::span<const double> t) {
  return model.variance() * corr_at(model, t);
}

double second_spectral_moment(const CovarianceModel& model) {
  const double s2 = model.scale() * model.scale();
  switch (model.family()) {
    case CovarianceFamily::squared_exponential: return model.variance() / s2;
    case CovarianceFamily::cauchy: return model.variance() * model.beta() / s2;
    default: throw NoSpectralMoment();
  }
}

std::optional<std::string> decay_hypothesis_warning(const CovarianceModel& model) {
  const double alpha = model.decay_exponent();
  const double bound = 3.0 * model.dim();
  if (alpha > bound) return std::nullopt;
  std::ostringstream os;
  os << "covariance decay exponent " << alpha << " does not exceed 3d = " << bound
     << "; fixed-level CLT hypotheses are not met";
  return os.str();
}

double GaussianFieldSpec::stddev() const { return std::sqrt(cov.variance()); }

double tail_prob(const GaussianFieldSpec& spec, double u) {
  const double z = (u - spec.mean) / spec.stddev();
  return 0.5 * std::erfc(z / std::numbers::sqrt2);
}

double tail_quantile(const GaussianFieldSpec& spec, double p) {
  if (!(p > 0.0 && p < 1.0)) throw Error("tail probability must lie in (0, 1)");
  const boost::math::normal_distribution<double> dist(spec.mean, spec.stddev());
  return boost::math::quantile(boost::math::complement(dist, p));
}

std::string_view to_string(MarkLaw law) {
  return law == MarkLaw::deterministic ? "deterministic" : "exponential";
}

std::string_view to_string(KernelShape shape) {
  return shape == KernelShape::gaussian_bump ? "gaussian_bump" : "ball_indicator";
}

MarkLaw parse_mark_law(std::string_view name) {
  if (name == "deterministic") return MarkLaw::deterministic;
  if (name == "exponential") return MarkLaw::exponential;
  throw ConfigError("unknown mark law '" + std::string(name) + "'");
}

KernelShape parse_kernel_shape(std::string_view name) {
  if (name == "gaussian_bump") return KernelShape::gaussian_bump;
  if (name == "ball_indicator") return KernelShape::ball_indicator;
  throw ConfigError("unknown kernel '" + std::string(name) + "'");
}

void ShotNoiseSpec::validate() const {
  if (dim < 1 || dim > 3) throw ConfigError("shot noise dimension must be 1, 2 or 3");
  if (!(intensity >= 0.0) || !std::isfinite(intensity))
    throw ConfigError("intensity must be nonnegative");
  if (!(mark_mean > 0.0)) throw ConfigError("mark mean must be positive");
  if (!(width > 0.0)) throw ConfigError("kernel width must be positive");
  if (!(trunc_eps > 0.0 && trunc_eps < 1.0)) throw ConfigError("kernel truncation must be in (0, 1)");
}

double ShotNoiseSpec::mark_second_moment() const {
  return marks == MarkLaw::deterministic ? mark_mean * mark_mean : 2.0 * mark_mean * mark_mean;
}

double ShotNoiseSpec::kernel_value(double r) const {
  if (kernel == KernelShape::ball_indicator) return r <= width ? 1.0 : 0.0;
  const double q = r / width;
  return std::exp(-0.5 * q * q);
}

double ShotNoiseSpec::kernel_integral() const {
  if (kernel == KernelShape::ball_indicator) return unit_ball_volume(dim) * std::pow(width, dim);
  return std::pow(2.0 * std::numbers::pi * width * width, 0.5 * dim);
}

double ShotNoiseSpec::kernel_sq_integral() const {
  if (kernel == KernelShape::ball_indicator) return kernel_integral();
  return std::pow(std::numbers::pi * width * width, 0.5 * dim);
}

double ShotNoiseSpec::truncation_radius() const {
  if (kernel == KernelShape::ball_indicator) return width;
  return width * std::sqrt(2.0 * std::log(1.0 / trunc_eps));
}

double ShotNoiseSpec::truncation_tail_mass() const {
  if (kernel == KernelShape::ball_indicator) return 0.0;
  const double r = truncation_radius() / width;
  // |t|^2 / width^2 is chi-square with d degrees of freedom under the bump.
  return kernel_integral() * boost::math::gamma_q(0.5 * dim, 0.5 * r * r);
}

double ShotNoiseSpec::truncation_error_bound() const {
  return intensity * mark_mean * truncation_tail_mass();
}

double ShotNoiseSpec::field_mean() const { return intensity * mark_mean * kernel_integral(); }

double ShotNoiseSpec::field_variance() const {
  return intensity * mark_second_moment() * kernel_sq_integral();
}

GridWindow::GridWindow(std::vector<std::size_t> d, double h) : dims(std::move(d)), spacing(h) {
  if (dims.empty() || dims.size() > 3) throw ConfigError("grid dimension must be 1, 2 or 3");
  for (auto n : dims)
    if (n == 0) throw ConfigError("grid dims must be positive");
  if (!(spacing > 0.0) || !std::isfinite(spacing)) throw ConfigError("grid spacing must be positive");
}

std::size_t GridWindow::site_count() const {
  std::size_t count = 1;
  for (auto n : dims) count *= n;
  return count;
}

double GridWindow::volume() const {
  return std::pow(spacing, dim()) * static_cast<double>(site_count());
}

double GridWindow::hull_volume() const {
  double v = 1.0;
  for (auto n : dims) v *= static_cast<double>(n - 1) * spacing;
  return v;
}

double GridWindow::vh_ratio(double r) const {
  double s = 0.0;
  for (auto n : dims) s += 2.0 / (static_cast<double>(n) * spacing);
  return r * s;
}

double unit_ball_volume(int d) {
  return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

bool is_vh_increasing(std::span<const GridWindow> windows) {
  for (std::size_t i = 1; i < windows.size(); ++i) {
    const auto& prev = windows[i - 1].dims;
    const auto& cur = windows[i].dims;
    if (prev.size() != cur.size()) return false;
    for (std::size_t k = 0; k < cur.size(); ++k)
      if (cur[k] <= prev[k]) return false;
  }
  return true;
}

std::string describe(const CovarianceModel& model) {
  std::ostringstream os;
  os.precision(17);
  os << "family=" << to_string(model.family()) << ";scale=" << model.scale()
     << ";variance=" << model.variance() << ";dim=" << model.dim();
  if (model.family() == CovarianceFamily::cauchy) os << ";beta=" << model.beta();
  return os.str();
}

std::string describe(const GaussianFieldSpec& spec) {
  std::ostringstream os;
  os.precision(17);
  os << "gaussian;mean=" << spec.mean << ";" << describe(spec.cov);
  return os.str();
}

std::string describe(const ShotNoiseSpec& spec) {
  std::ostringstream os;
  os.precision(17);
  os << "shot_noise;dim=" << spec.dim << ";lambda=" << spec.intensity
     << ";marks=" << to_string(spec.marks) << ";mark_mean=" << spec.mark_mean
     << ";kernel=" << to_string(spec.kernel) << ";width=" << spec.width
     << ";trunc=" << spec.trunc_eps;
  return os.str();
}

}  // namespace exset
