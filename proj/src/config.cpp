#include "exset/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "exset/error.hpp"

namespace exset {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(std::string_view text, std::string_view key) {
  const auto t = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError("key '" + std::string(key) + "': '" + std::string(t) + "' is not a number");
  }
  return value;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::string_view text) {
  KeyValueConfig cfg;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    cfg.values_[std::string(key)] = std::string(trim(line.substr(eq + 1)));
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const std::string& KeyValueConfig::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing key '" + key + "'");
  return it->second;
}

std::string KeyValueConfig::get_or(const std::string& key, std::string fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double KeyValueConfig::get_double(const std::string& key) const { return to_double(get(key), key); }

double KeyValueConfig::get_double_or(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

std::int64_t KeyValueConfig::get_int(const std::string& key) const {
  const auto t = trim(get(key));
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError("key '" + key + "': '" + std::string(t) + "' is not an integer");
  }
  return value;
}

std::int64_t KeyValueConfig::get_int_or(const std::string& key, std::int64_t fallback) const {
  return has(key) ? get_int(key) : fallback;
}

bool KeyValueConfig::get_bool_or(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const auto& v = get(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("key '" + key + "': '" + v + "' is not a boolean");
}

std::vector<double> KeyValueConfig::get_doubles(const std::string& key) const {
  return parse_double_list(get(key));
}

KeyValueConfig KeyValueConfig::section(const std::string& prefix) const {
  KeyValueConfig out;
  const std::string p = prefix + ".";
  for (const auto& [k, v] : values_)
    if (k.rfind(p, 0) == 0) out.values_[k.substr(p.size())] = v;
  return out;
}

std::vector<double> parse_double_list(std::string_view text) {
  std::vector<double> out;
  while (true) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    if (item.empty()) throw ConfigError("empty entry in list");
    out.push_back(to_double(item, "list"));
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  return out;
}

std::vector<std::size_t> parse_dims(std::string_view text) {
  std::string list(text);
  for (auto& c : list)
    if (c == 'x') c = ',';
  std::vector<std::size_t> dims;
  for (double v : parse_double_list(list)) {
    if (v < 1 || v != static_cast<double>(static_cast<std::size_t>(v)))
      throw ConfigError("dims must be positive integers");
    dims.push_back(static_cast<std::size_t>(v));
  }
  return dims;
}

FieldConfig field_config_from(const KeyValueConfig& cfg) {
  FieldConfig out;
  if (cfg.has("dims")) {
    out.window = GridWindow(parse_dims(cfg.get("dims")), cfg.get_double_or("spacing", 1.0));
  }
  const int dim = static_cast<int>(
      cfg.get_int_or("dim", out.window ? out.window->dim() : 1));
  if (out.window && out.window->dim() != dim) {
    throw ConfigError("'dim' disagrees with the number of 'dims' entries");
  }

  const auto field = cfg.get_or("field", "gaussian");
  if (field == "gaussian") {
    out.kind = FieldKind::gaussian;
    out.gaussian.mean = cfg.get_double_or("mean", 0.0);
    out.gaussian.cov = CovarianceModel(parse_covariance_family(cfg.get_or("family", "exponential")),
                                       cfg.get_double_or("scale", 1.0),
                                       cfg.get_double_or("variance", 1.0), dim,
                                       cfg.get_double_or("beta", 0.0));
  } else if (field == "shot_noise") {
    out.kind = FieldKind::shot_noise;
    auto& s = out.shot_noise;
    s.dim = dim;
    s.intensity = cfg.get_double("lambda");
    s.marks = parse_mark_law(cfg.get_or("marks", "deterministic"));
    s.mark_mean = cfg.get_double_or("mark_mean", 1.0);
    s.kernel = parse_kernel_shape(cfg.get_or("kernel", "gaussian_bump"));
    s.width = cfg.get_double_or("width", 1.0);
    s.trunc_eps = cfg.get_double_or("trunc", 1e-10);
    s.validate();
    out.standardize = cfg.get_bool_or("standardize", false);
    out.target_mean = cfg.get_double_or("target_mean", 0.0);
    out.target_variance = cfg.get_double_or("target_variance", 1.0);
    if (out.standardize && !(out.target_variance > 0.0))
      throw ConfigError("target_variance must be positive");
  } else {
    throw ConfigError("unknown field kind '" + field + "'");
  }
  return out;
}

std::string FieldConfig::describe() const {
  if (kind == FieldKind::gaussian) return exset::describe(gaussian);
  std::ostringstream os;
  os.precision(17);
  os << exset::describe(shot_noise);
  if (standardize) os << ";standardize=" << target_mean << "," << target_variance;
  return os.str();
}

}  // namespace exset
