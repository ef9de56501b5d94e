#pragma once

// Structured key-value text configuration.
//
// One `key = value` pair per line; `#` starts a comment; keys may carry a
// dotted prefix (`alt.family = ...`) to address a nested section. Lists are
// comma separated. Model keys:
//
//   field     gaussian | shot_noise                       (default gaussian)
//   family    exponential | squared_exponential | cauchy | nugget
//   scale     correlation length (same unit as spacing)
//   beta      cauchy exponent
//   variance  tau^2
//   mean      a
//   lambda    shot-noise intensity
//   marks     deterministic | exponential
//   mark_mean E xi
//   kernel    gaussian_bump | ball_indicator
//   width     kernel width
//   trunc     kernel truncation relative to the peak   (default 1e-10)
//   standardize  true: affinely map shot noise to target_mean / target_variance
//   dims      lattice shape, e.g. 256,256
//   spacing   lattice spacing h
//   dim       dimension when no dims are given

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "exset/models.hpp"

namespace exset {

class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::string_view text);
  static KeyValueConfig load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& get(const std::string& key) const;
  std::string get_or(const std::string& key, std::string fallback) const;
  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key) const;
  std::int64_t get_int_or(const std::string& key, std::int64_t fallback) const;
  bool get_bool_or(const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& key) const;

  /// Keys below `prefix.` with the prefix stripped.
  KeyValueConfig section(const std::string& prefix) const;

  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

std::vector<double> parse_double_list(std::string_view text);
std::vector<std::size_t> parse_dims(std::string_view text);

enum class FieldKind { gaussian, shot_noise };

struct FieldConfig {
  FieldKind kind = FieldKind::gaussian;
  GaussianFieldSpec gaussian;
  ShotNoiseSpec shot_noise;
  bool standardize = false;
  double target_mean = 0.0;
  double target_variance = 1.0;
  std::optional<GridWindow> window;

  int dim() const { return kind == FieldKind::gaussian ? gaussian.dim() : shot_noise.dim; }
  std::string describe() const;
};

FieldConfig field_config_from(const KeyValueConfig& cfg);

}  // namespace exset
