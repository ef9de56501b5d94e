#pragma once

// Monte Carlo experiments that reproduce the excursion-set limit theorems at
// desk scale.
//
// Replication i on window w draws its field from stream
//     SeedSpec{master_seed, (w << 32) | i}
// and the alternative field of a size/power study from
//     SeedSpec{master_seed, (1 << 48) | (w << 32) | i}.
// Reports contain no wall-clock data, so a fixed (config, seed) produces
// byte-identical output for any thread count.
//
// Experiment config keys (besides the model keys of config.hpp):
//   kind          clt_volume | multivariate_clt | fclt_grid | level_growth |
//                 surface_mean | test_size_power
//   windows       window sequence, e.g. 64x64, 128x128
//   spacing       lattice spacing h
//   levels        levels (clt_volume uses the first)
//   level_c       c of the level schedule u_n = a + tau c sqrt(log n)
//   replications  R
//   seed          master seed
//   threads       worker count (0 = hardware concurrency)
//   alpha, block, test_levels, alt.*, alt_replications    (test_size_power)
//   tol.var_rel, tol.ks_p, tol.se, tol.mean_rel, tol.size_lo, tol.size_hi,
//   tol.power     verdict thresholds

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "exset/config.hpp"
#include "exset/models.hpp"

namespace exset {

enum class ExperimentKind {
  clt_volume,
  multivariate_clt,
  fclt_grid,
  level_growth,
  surface_mean,
  test_size_power
};

std::string_view to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(std::string_view name);

struct Tolerances {
  double var_rel = 0.10;
  double ks_p = 0.01;
  double se_multiplier = 3.0;
  double mean_rel = 0.03;
  double size_lo = 0.03;
  double size_hi = 0.08;
  double power_min = 0.9;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::clt_volume;
  FieldConfig field;
  std::vector<GridWindow> windows;
  std::vector<double> levels{0.0};
  double level_c = 0.7;
  std::size_t replications = 1000;
  std::uint64_t master_seed = 1;
  unsigned threads = 0;

  double alpha = 0.05;
  std::size_t block_side = 0;  // 0: floor(sqrt(smallest side))
  int test_levels = 3;
  bool explicit_levels = false;
  std::optional<FieldConfig> alternative;
  std::size_t alt_replications = 200;

  Tolerances tol;

  static ExperimentConfig from(const KeyValueConfig& cfg);
  void validate() const;
  /// Canonical text of everything that influences results (not threads).
  std::string canonical() const;
};

std::vector<GridWindow> parse_windows(std::string_view text, double spacing);

struct Verdict {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

struct RawTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::vector<double> column(std::size_t c) const;
};

struct WindowResult {
  GridWindow window;
  nlohmann::json summary;
  std::vector<Verdict> verdicts;
  RawTable raw;
};

struct MCReport {
  ExperimentKind kind = ExperimentKind::clt_volume;
  std::string config_digest;
  std::uint64_t master_seed = 0;
  std::size_t replications = 0;
  std::vector<WindowResult> windows;
  std::vector<std::string> warnings;

  bool passed() const;
  const Verdict* find(std::size_t window, std::string_view name) const;
  nlohmann::json to_json() const;
  /// One CSV per window: window_<i>.csv.
  void write_raw(const std::filesystem::path& dir) const;
};

inline constexpr const char* kMcReportSchema = "exset.mc_report/1";

MCReport run_clt_experiment(const ExperimentConfig& cfg);
/// Handles both multivariate_clt and fclt_grid: empirical level-pair
/// covariance of Y_n(u) against lattice and continuum targets.
MCReport run_fclt_experiment(const ExperimentConfig& cfg);
MCReport run_level_growth_experiment(const ExperimentConfig& cfg);
MCReport run_surface_experiment(const ExperimentConfig& cfg);
MCReport run_test_study(const ExperimentConfig& cfg);
MCReport run_experiment(const ExperimentConfig& cfg);

void write_report(const MCReport& report, const std::filesystem::path& path);
void write_json(const nlohmann::json& j, const std::filesystem::path& path);

}  // namespace exset
