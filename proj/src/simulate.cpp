#include "exset/simulate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "exset/error.hpp"
#include "fft.hpp"

namespace exset {

namespace {

constexpr std::size_t kMaxDim = 3;
using Index = std::array<std::size_t, kMaxDim>;

/// Calls f(index, flat) for every site of a row-major array of shape dims.
template <class F>
void for_each_site(const std::vector<std::size_t>& dims, F&& f) {
  const std::size_t d = dims.size();
  Index idx{};
  std::size_t total = 1;
  for (auto n : dims) total *= n;
  for (std::size_t flat = 0; flat < total; ++flat) {
    f(idx, flat);
    for (std::size_t k = d; k-- > 0;) {
      if (++idx[k] < dims[k]) break;
      idx[k] = 0;
    }
  }
}

std::string window_digest_text(const GridWindow& w) {
  std::ostringstream os;
  os.precision(17);
  os << ";h=" << w.spacing << ";dims=";
  for (auto n : w.dims) os << n << ",";
  return os.str();
}

void require_dim(int spec_dim, const GridWindow& window) {
  if (spec_dim != window.dim()) {
    throw DimensionMismatch("field is " + std::to_string(spec_dim) + "-dimensional, window is " +
                            std::to_string(window.dim()) + "-dimensional");
  }
}

}  // namespace

FieldRealization::FieldRealization(GridWindow window, std::vector<double> values,
                                   Provenance provenance)
    : window_(std::move(window)), values_(std::move(values)), provenance_(std::move(provenance)) {
  if (values_.size() != window_.site_count()) {
    throw DimensionMismatch("field has " + std::to_string(values_.size()) + " values, window has " +
                            std::to_string(window_.site_count()) + " sites");
  }
  for (double v : values_)
    if (!std::isfinite(v)) throw Error("field values must be finite");
}

std::string digest_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

struct GaussianSimulator::Impl {
  std::vector<std::size_t> padded;
  std::vector<double> amplitude;  // sqrt(lambda_k / M)
  std::unique_ptr<detail::FftPlan> plan;
};

GaussianSimulator::GaussianSimulator(GaussianFieldSpec spec, GridWindow window, double clip_tol,
                                     int max_pad)
    : spec_(std::move(spec)), window_(std::move(window)), impl_(std::make_unique<Impl>()) {
  require_dim(spec_.dim(), window_);
  digest_ = digest_hex(describe(spec_) + window_digest_text(window_));
  const double h = window_.spacing;
  const double var = spec_.cov.variance();

  std::vector<std::size_t> padded;
  for (auto n : window_.dims) padded.push_back(2 * n);

  for (int attempt = 0;; ++attempt) {
    auto plan = std::make_unique<detail::FftPlan>(padded);
    const std::size_t total = plan->size();
    auto buf = detail::allocate_complex(total);
    for_each_site(padded, [&](const Index& idx, std::size_t flat) {
      double r2 = 0.0;
      for (std::size_t k = 0; k < padded.size(); ++k) {
        const double lag = static_cast<double>(std::min(idx[k], padded[k] - idx[k])) * h;
        r2 += lag * lag;
      }
      buf[flat] = var * spec_.cov.corr_radial(std::sqrt(r2));
    });
    plan->execute(buf.get());

    double lo = buf[0].real(), hi = buf[0].real(), neg = 0.0, pos = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
      const double ev = buf[i].real();
      lo = std::min(lo, ev);
      hi = std::max(hi, ev);
      (ev < 0.0 ? neg : pos) += std::abs(ev);
    }
    const double rel_neg = pos > 0.0 ? neg / pos : 1.0;
    if (lo >= -clip_tol * hi) {
      info_.padded_dims = padded;
      info_.doublings = attempt;
      info_.clipped_mass = rel_neg;
      info_.min_eigenvalue = lo;
      info_.max_eigenvalue = hi;
      impl_->amplitude.resize(total);
      const double inv_total = 1.0 / static_cast<double>(total);
      for (std::size_t i = 0; i < total; ++i)
        impl_->amplitude[i] = std::sqrt(std::max(buf[i].real(), 0.0) * inv_total);
      impl_->padded = padded;
      impl_->plan = std::move(plan);
      return;
    }
    if (attempt >= max_pad) {
      std::ostringstream os;
      os << "embedding failure: smallest eigenvalue " << lo << " vs largest " << hi
         << " after " << attempt << " doublings; negative mass " << rel_neg;
      throw EmbeddingFailure(os.str(), rel_neg);
    }
    for (auto& m : padded) m *= 2;
  }
}

GaussianSimulator::~GaussianSimulator() = default;
GaussianSimulator::GaussianSimulator(GaussianSimulator&&) noexcept = default;
GaussianSimulator& GaussianSimulator::operator=(GaussianSimulator&&) noexcept = default;

FieldRealization GaussianSimulator::sample(SeedSpec seed) const {
  const std::size_t total = impl_->plan->size();
  auto buf = detail::allocate_complex(total);
  RandomStream rng(seed);
  for (std::size_t i = 0; i < total; ++i) {
    const double re = rng.normal();
    const double im = rng.normal();
    buf[i] = {impl_->amplitude[i] * re, impl_->amplitude[i] * im};
  }
  impl_->plan->execute(buf.get());

  // Window sites sit at the low corner of the torus.
  std::vector<double> values(window_.site_count());
  const auto& padded = impl_->padded;
  for_each_site(window_.dims, [&](const Index& idx, std::size_t flat) {
    std::size_t p = 0;
    for (std::size_t k = 0; k < padded.size(); ++k) p = p * padded[k] + idx[k];
    values[flat] = spec_.mean + buf[p].real();
  });
  return FieldRealization(window_, std::move(values),
                          {digest_, seed, "circulant-embedding/1"});
}

FieldRealization simulate_gaussian(const GaussianFieldSpec& spec, const GridWindow& window,
                                   SeedSpec seed) {
  return GaussianSimulator(spec, window).sample(seed);
}

FieldRealization simulate_white_noise(const GaussianFieldSpec& spec, const GridWindow& window,
                                      SeedSpec seed) {
  require_dim(spec.dim(), window);
  RandomStream rng(seed);
  const double tau = spec.stddev();
  std::vector<double> values(window.site_count());
  for (auto& v : values) v = spec.mean + tau * rng.normal();
  return FieldRealization(window, std::move(values),
                          {digest_hex(describe(spec) + window_digest_text(window)), seed,
                           "white-noise/1"});
}

std::uint64_t poisson_count(RandomStream& rng, double mean) {
  std::uint64_t count = 0;
  double t = rng.exponential(1.0);
  while (t <= mean) {
    ++count;
    t += rng.exponential(1.0);
  }
  return count;
}

FieldRealization simulate_shot_noise(const ShotNoiseSpec& spec, const GridWindow& window,
                                     SeedSpec seed) {
  spec.validate();
  require_dim(spec.dim, window);
  const std::size_t d = window.dims.size();
  const double h = window.spacing;
  const double rt = spec.truncation_radius();

  // Germs live in the box [-r_t, (n_k - 1) h + r_t] around the sites.
  std::array<double, kMaxDim> lo{}, extent{};
  double box_volume = 1.0;
  for (std::size_t k = 0; k < d; ++k) {
    lo[k] = -rt;
    extent[k] = static_cast<double>(window.dims[k] - 1) * h + 2.0 * rt;
    box_volume *= extent[k];
  }

  RandomStream rng(seed);
  const std::uint64_t n_points = poisson_count(rng, spec.intensity * box_volume);
  std::vector<double> values(window.site_count(), 0.0);
  std::array<std::size_t, kMaxDim> stride{};
  stride[d - 1] = 1;
  for (std::size_t k = d - 1; k-- > 0;) stride[k] = stride[k + 1] * window.dims[k + 1];

  const double rt2 = rt * rt;
  std::array<double, kMaxDim> x{};
  std::array<std::size_t, kMaxDim> first{}, last{};
  for (std::uint64_t p = 0; p < n_points; ++p) {
    for (std::size_t k = 0; k < d; ++k) x[k] = lo[k] + extent[k] * rng.uniform();
    const double mark = spec.marks == MarkLaw::deterministic ? spec.mark_mean
                                                             : rng.exponential(spec.mark_mean);
    bool empty = false;
    for (std::size_t k = 0; k < d; ++k) {
      const double a = std::ceil((x[k] - rt) / h);
      const double b = std::floor((x[k] + rt) / h);
      const double top = static_cast<double>(window.dims[k] - 1);
      if (b < 0.0 || a > top) {
        empty = true;
        break;
      }
      first[k] = static_cast<std::size_t>(std::max(a, 0.0));
      last[k] = static_cast<std::size_t>(std::min(b, top));
    }
    if (empty) continue;

    // Iterate the bounding box of the truncated kernel support.
    Index idx{};
    for (std::size_t k = 0; k < d; ++k) idx[k] = first[k];
    while (true) {
      double r2 = 0.0;
      std::size_t flat = 0;
      for (std::size_t k = 0; k < d; ++k) {
        const double dx = static_cast<double>(idx[k]) * h - x[k];
        r2 += dx * dx;
        flat += idx[k] * stride[k];
      }
      if (r2 <= rt2) values[flat] += mark * spec.kernel_value(std::sqrt(r2));
      std::size_t k = d;
      while (k-- > 0) {
        if (++idx[k] <= last[k]) break;
        idx[k] = first[k];
      }
      if (k == static_cast<std::size_t>(-1)) break;
    }
  }
  return FieldRealization(window, std::move(values),
                          {digest_hex(describe(spec) + window_digest_text(window)), seed,
                           "shot-noise/1"});
}

FieldSampler::FieldSampler(const FieldConfig& cfg, const GridWindow& window)
    : cfg_(cfg), window_(window) {
  require_dim(cfg_.dim(), window_);
  if (cfg_.kind == FieldKind::gaussian &&
      cfg_.gaussian.cov.family() != CovarianceFamily::nugget) {
    gauss_ = std::make_shared<const GaussianSimulator>(cfg_.gaussian, window_);
  }
}

FieldRealization FieldSampler::sample(SeedSpec seed) const {
  if (gauss_) return gauss_->sample(seed);
  if (cfg_.kind == FieldKind::gaussian) return simulate_white_noise(cfg_.gaussian, window_, seed);
  auto field = simulate_shot_noise(cfg_.shot_noise, window_, seed);
  if (!cfg_.standardize) return field;
  const double m = cfg_.shot_noise.field_mean();
  const double s = std::sqrt(cfg_.shot_noise.field_variance());
  const double scale = std::sqrt(cfg_.target_variance) / s;
  std::vector<double> values = field.values();
  for (auto& v : values) v = cfg_.target_mean + scale * (v - m);
  auto prov = field.provenance();
  prov.generator += "+standardized";
  return FieldRealization(window_, std::move(values), std::move(prov));
}

}  // namespace exset
