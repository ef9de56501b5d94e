#pragma once

// Lattice realizations of stationary fields, reproducible from a seed.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "exset/config.hpp"
#include "exset/models.hpp"
#include "exset/rng.hpp"

namespace exset {

struct Provenance {
  std::string spec_digest;
  SeedSpec seed;
  std::string generator;
};

/// One sampled field on a GridWindow. Values are row-major, axis 0 slowest.
class FieldRealization {
 public:
  FieldRealization(GridWindow window, std::vector<double> values, Provenance provenance = {});

  const GridWindow& window() const noexcept { return window_; }
  const std::vector<double>& values() const noexcept { return values_; }
  const Provenance& provenance() const noexcept { return provenance_; }
  int dim() const noexcept { return window_.dim(); }
  double at(std::size_t i) const { return values_[i]; }

 private:
  GridWindow window_;
  std::vector<double> values_;
  Provenance provenance_;
};

/// 64-bit FNV-1a of a text, rendered as 16 hex digits.
std::string digest_hex(const std::string& text);

struct EmbeddingInfo {
  std::vector<std::size_t> padded_dims;
  int doublings = 0;
  /// Clipped negative eigenvalue mass relative to the total positive mass.
  double clipped_mass = 0.0;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
};

/// Circulant-embedding sampler. The embedding spectrum is computed once at
/// construction; `sample` is const and may be called from many threads.
///
/// The torus starts at 2 n_k per axis and all axes are doubled up to
/// `max_pad` times until the smallest eigenvalue is >= -clip_tol * largest.
/// Remaining negative eigenvalues are clipped to zero.
class GaussianSimulator {
 public:
  GaussianSimulator(GaussianFieldSpec spec, GridWindow window, double clip_tol = 1e-9,
                    int max_pad = 4);
  ~GaussianSimulator();
  GaussianSimulator(GaussianSimulator&&) noexcept;
  GaussianSimulator& operator=(GaussianSimulator&&) noexcept;

  FieldRealization sample(SeedSpec seed) const;
  const EmbeddingInfo& embedding() const noexcept { return info_; }
  const GridWindow& window() const noexcept { return window_; }

 private:
  struct Impl;
  GaussianFieldSpec spec_;
  GridWindow window_;
  EmbeddingInfo info_;
  std::string digest_;
  std::unique_ptr<Impl> impl_;
};

FieldRealization simulate_gaussian(const GaussianFieldSpec& spec, const GridWindow& window,
                                   SeedSpec seed);

/// i.i.d. Normal(a, tau^2) per site; the lattice realization of the nugget model.
FieldRealization simulate_white_noise(const GaussianFieldSpec& spec, const GridWindow& window,
                                      SeedSpec seed);

/// Poisson germs on the window dilated by the kernel truncation radius;
/// each site receives the truncated kernel sum.
FieldRealization simulate_shot_noise(const ShotNoiseSpec& spec, const GridWindow& window,
                                     SeedSpec seed);

/// Number of arrivals of a unit-rate Poisson process on [0, mean].
std::uint64_t poisson_count(RandomStream& rng, double mean);

/// Reusable sampler for any configured field. Gaussian fields with the
/// nugget family use the white-noise generator; shot noise is optionally
/// standardized to the configured target mean and variance.
class FieldSampler {
 public:
  FieldSampler(const FieldConfig& cfg, const GridWindow& window);
  FieldRealization sample(SeedSpec seed) const;
  const GridWindow& window() const noexcept { return window_; }
  const GaussianSimulator* gaussian_simulator() const noexcept { return gauss_.get(); }

 private:
  FieldConfig cfg_;
  GridWindow window_;
  std::shared_ptr<const GaussianSimulator> gauss_;
};

}  // namespace exset
