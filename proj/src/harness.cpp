#include "exset/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "exset/asymptotics.hpp"
#include "exset/error.hpp"
#include "exset/geometry.hpp"
#include "exset/inference.hpp"
#include "exset/parallel.hpp"
#include "exset/simulate.hpp"
#include "exset/stats.hpp"

namespace exset {

namespace {

constexpr const char* kStreamDerivation =
    "splitmix64/1: stream = (window << 32) | replication; alternative fields add 1 << 48";

SeedSpec replication_seed(const ExperimentConfig& cfg, std::size_t window, std::size_t rep,
                          bool alternative = false) {
  std::uint64_t stream = (static_cast<std::uint64_t>(window) << 32) | static_cast<std::uint64_t>(rep);
  if (alternative) stream |= std::uint64_t{1} << 48;
  return {cfg.master_seed, stream};
}

const GaussianFieldSpec& gaussian_null(const ExperimentConfig& cfg) {
  if (cfg.field.kind != FieldKind::gaussian)
    throw ConfigError(std::string(to_string(cfg.kind)) + " requires a Gaussian field model");
  return cfg.field.gaussian;
}

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

Verdict band(std::string name, double value, double lower, double upper) {
  return {std::move(name), value >= lower && value <= upper, value, lower, upper};
}

MCReport new_report(const ExperimentConfig& cfg) {
  cfg.validate();
  MCReport rep;
  rep.kind = cfg.kind;
  rep.config_digest = digest_hex(cfg.canonical());
  rep.master_seed = cfg.master_seed;
  rep.replications = cfg.replications;
  return rep;
}

void require_kind(const ExperimentConfig& cfg, std::initializer_list<ExperimentKind> kinds) {
  for (auto k : kinds)
    if (cfg.kind == k) return;
  throw ConfigError("experiment kind '" + std::string(to_string(cfg.kind)) +
                    "' does not match the requested runner");
}

std::string pair_name(const char* prefix, std::size_t l, std::size_t m) {
  return std::string(prefix) + "[" + std::to_string(l) + "," + std::to_string(m) + "]";
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::clt_volume: return "clt_volume";
    case ExperimentKind::multivariate_clt: return "multivariate_clt";
    case ExperimentKind::fclt_grid: return "fclt_grid";
    case ExperimentKind::level_growth: return "level_growth";
    case ExperimentKind::surface_mean: return "surface_mean";
    case ExperimentKind::test_size_power: return "test_size_power";
  }
  return "?";
}

ExperimentKind parse_experiment_kind(std::string_view name) {
  for (auto k : {ExperimentKind::clt_volume, ExperimentKind::multivariate_clt,
                 ExperimentKind::fclt_grid, ExperimentKind::level_growth,
                 ExperimentKind::surface_mean, ExperimentKind::test_size_power}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown experiment kind '" + std::string(name) + "'");
}

std::vector<GridWindow> parse_windows(std::string_view text, double spacing) {
  std::vector<GridWindow> out;
  std::stringstream ss{std::string(text)};
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::string dims_text;
    for (char c : item) {
      if (c == ' ' || c == '\t') continue;
      dims_text.push_back(c == 'x' ? ',' : c);
    }
    if (dims_text.empty()) throw ConfigError("empty window entry");
    out.emplace_back(parse_dims(dims_text), spacing);
  }
  if (out.empty()) throw ConfigError("no windows given");
  return out;
}

ExperimentConfig ExperimentConfig::from(const KeyValueConfig& kv) {
  ExperimentConfig cfg;
  cfg.kind = parse_experiment_kind(kv.get("kind"));
  cfg.windows = parse_windows(kv.get("windows"), kv.get_double_or("spacing", 1.0));
  const auto dim = std::to_string(cfg.windows.front().dim());

  KeyValueConfig model = kv;
  if (!model.has("dim")) model.set("dim", dim);
  cfg.field = field_config_from(model);

  if (kv.has("levels")) {
    cfg.levels = kv.get_doubles("levels");
    cfg.explicit_levels = true;
  }
  cfg.level_c = kv.get_double_or("level_c", cfg.level_c);
  cfg.replications = static_cast<std::size_t>(kv.get_int_or("replications", 1000));
  cfg.master_seed = static_cast<std::uint64_t>(kv.get_int_or("seed", 1));
  cfg.threads = static_cast<unsigned>(kv.get_int_or("threads", 0));
  cfg.alpha = kv.get_double_or("alpha", cfg.alpha);
  cfg.block_side = static_cast<std::size_t>(kv.get_int_or("block", 0));
  cfg.test_levels = static_cast<int>(kv.get_int_or("test_levels", 3));
  cfg.alt_replications = static_cast<std::size_t>(kv.get_int_or("alt_replications", 200));

  auto alt = kv.section("alt");
  if (!alt.entries().empty()) {
    if (!alt.has("dim")) alt.set("dim", dim);
    if (cfg.field.kind == FieldKind::gaussian) {
      std::ostringstream m, v;
      m.precision(17);
      v.precision(17);
      m << cfg.field.gaussian.mean;
      v << cfg.field.gaussian.cov.variance();
      if (!alt.has("target_mean")) alt.set("target_mean", m.str());
      if (!alt.has("target_variance")) alt.set("target_variance", v.str());
    }
    cfg.alternative = field_config_from(alt);
  }

  auto& t = cfg.tol;
  t.var_rel = kv.get_double_or("tol.var_rel", t.var_rel);
  t.ks_p = kv.get_double_or("tol.ks_p", t.ks_p);
  t.se_multiplier = kv.get_double_or("tol.se", t.se_multiplier);
  t.mean_rel = kv.get_double_or("tol.mean_rel", t.mean_rel);
  t.size_lo = kv.get_double_or("tol.size_lo", t.size_lo);
  t.size_hi = kv.get_double_or("tol.size_hi", t.size_hi);
  t.power_min = kv.get_double_or("tol.power", t.power_min);
  cfg.validate();
  return cfg;
}

void ExperimentConfig::validate() const {
  if (windows.empty()) throw ConfigError("no windows given");
  if (!is_vh_increasing(windows)) throw ConfigError("window sequence must strictly increase on every axis");
  for (const auto& w : windows)
    if (w.dim() != field.dim()) throw ConfigError("window dimension differs from the field dimension");
  if (replications < 2) throw ConfigError("need at least two replications");
  if (levels.empty()) throw ConfigError("no levels given");
  for (std::size_t i = 1; i < levels.size(); ++i)
    if (!(levels[i] > levels[i - 1])) throw ConfigError("levels must be strictly increasing");
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream os;
  os.precision(17);
  os << "kind=" << to_string(kind) << "\nfield=" << field.describe() << "\nwindows=";
  for (const auto& w : windows) {
    for (auto n : w.dims) os << n << "x";
    os << "@" << w.spacing << ";";
  }
  os << "\nlevels=";
  for (double u : levels) os << u << ",";
  os << "\nlevel_c=" << level_c << "\nreplications=" << replications << "\nseed=" << master_seed
     << "\nalpha=" << alpha << "\nblock=" << block_side << "\ntest_levels=" << test_levels
     << "\nexplicit_levels=" << explicit_levels;
  if (alternative) os << "\nalt=" << alternative->describe() << "\nalt_replications=" << alt_replications;
  os << "\ntol=" << tol.var_rel << "," << tol.ks_p << "," << tol.se_multiplier << ","
     << tol.mean_rel << "," << tol.size_lo << "," << tol.size_hi << "," << tol.power_min;
  return os.str();
}

std::vector<double> RawTable::column(std::size_t c) const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.at(c));
  return out;
}

bool MCReport::passed() const {
  for (const auto& w : windows)
    for (const auto& v : w.verdicts)
      if (!v.passed) return false;
  return true;
}

const Verdict* MCReport::find(std::size_t window, std::string_view name) const {
  for (const auto& v : windows.at(window).verdicts)
    if (v.name == name) return &v;
  return nullptr;
}

nlohmann::json MCReport::to_json() const {
  nlohmann::json ws = nlohmann::json::array();
  std::size_t realizations = 0;
  for (const auto& w : windows) {
    nlohmann::json verdicts = nlohmann::json::array();
    for (const auto& v : w.verdicts) {
      verdicts.push_back({{"name", v.name}, {"passed", v.passed}, {"value", v.value},
                          {"lower", v.lower}, {"upper", v.upper}});
    }
    realizations += w.raw.rows.size();
    ws.push_back({{"dims", w.window.dims},
                  {"spacing", w.window.spacing},
                  {"window_volume", w.window.volume()},
                  {"summary", w.summary},
                  {"verdicts", verdicts},
                  {"raw_columns", w.raw.columns}});
  }
  return {{"schema", kMcReportSchema},
          {"kind", std::string(to_string(kind))},
          {"config_digest", config_digest},
          {"master_seed", master_seed},
          {"replications", replications},
          {"stream_derivation", kStreamDerivation},
          {"windows", ws},
          {"warnings", warnings},
          {"passed", passed()},
          {"runtime", {{"realizations", realizations}, {"library", "exset/1"}}}};
}

void MCReport::write_raw(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const auto path = dir / ("window_" + std::to_string(i) + ".csv");
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    const auto& raw = windows[i].raw;
    for (std::size_t c = 0; c < raw.columns.size(); ++c) out << (c ? "," : "") << raw.columns[c];
    out << "\n";
    char buf[32];
    for (const auto& row : raw.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        std::snprintf(buf, sizeof buf, "%.17g", row[c]);
        out << (c ? "," : "") << buf;
      }
      out << "\n";
    }
  }
}

MCReport run_clt_experiment(const ExperimentConfig& cfg) {
  require_kind(cfg, {ExperimentKind::clt_volume});
  const auto& spec = gaussian_null(cfg);
  auto rep = new_report(cfg);
  const double u = cfg.levels.front();
  const double psi = tail_prob(spec, u);

  for (std::size_t w = 0; w < cfg.windows.size(); ++w) {
    const auto& window = cfg.windows[w];
    const FieldSampler sampler(cfg.field, window);
    const double vol = window.volume();
    const std::vector<double> level{u};
    WindowResult res{window, {}, {}, {{"z", "volume"}, {}}};
    res.raw.rows = parallel_map(cfg.replications, cfg.threads, [&](std::size_t i) {
      const auto field = sampler.sample(replication_seed(cfg, w, i));
      const double v = excursion_volumes(field, level).front().volume;
      return std::vector<double>{(v - psi * vol) / std::sqrt(vol), v};
    });
    const auto z = res.raw.column(0);
    const double var = sample_variance(z);
    const double lattice = sigma2_lattice(spec, u, window.spacing).value;
    const double continuum = sigma2(spec, u).value;
    const double finite = lattice_windowed_variance(spec, u, window).value / vol;
    const auto ks = ks_test(z, [&](double x) {
      return 0.5 * std::erfc(-x / std::sqrt(2.0 * lattice));
    });
    res.summary = {{"level", u},
                   {"tail_prob", psi},
                   {"mean", sample_mean(z)},
                   {"variance", var},
                   {"variance_se", variance_standard_error(z)},
                   {"target_lattice", lattice},
                   {"target_continuum", continuum},
                   {"target_finite_window", finite},
                   {"discretization_gap", lattice - continuum},
                   {"ks_statistic", ks.statistic},
                   {"ks_p_value", ks.p_value}};
    res.verdicts.push_back(band("variance_vs_lattice", var, lattice * (1.0 - cfg.tol.var_rel),
                                lattice * (1.0 + cfg.tol.var_rel)));
    res.verdicts.push_back(band("ks_p_value", ks.p_value, cfg.tol.ks_p, 1.0));
    rep.windows.push_back(std::move(res));
  }
  return rep;
}

MCReport run_fclt_experiment(const ExperimentConfig& cfg) {
  require_kind(cfg, {ExperimentKind::fclt_grid, ExperimentKind::multivariate_clt});
  const auto& spec = gaussian_null(cfg);
  auto rep = new_report(cfg);
  const auto& levels = cfg.levels;
  const std::size_t m = levels.size();
  std::vector<double> psi;
  for (double u : levels) psi.push_back(tail_prob(spec, u));

  for (std::size_t w = 0; w < cfg.windows.size(); ++w) {
    const auto& window = cfg.windows[w];
    const FieldSampler sampler(cfg.field, window);
    const double vol = window.volume();
    WindowResult res{window, {}, {}, {}};
    for (std::size_t l = 0; l < m; ++l) res.raw.columns.push_back("y" + std::to_string(l));
    res.raw.rows = parallel_map(cfg.replications, cfg.threads, [&](std::size_t i) {
      const auto field = sampler.sample(replication_seed(cfg, w, i));
      const auto meas = excursion_volumes(field, levels);
      std::vector<double> y(m);
      for (std::size_t l = 0; l < m; ++l) y[l] = (meas[l].volume - psi[l] * vol) / std::sqrt(vol);
      return y;
    });

    const auto R = static_cast<double>(cfg.replications);
    std::vector<std::vector<double>> cols;
    std::vector<double> means;
    for (std::size_t l = 0; l < m; ++l) {
      cols.push_back(res.raw.column(l));
      means.push_back(sample_mean(cols.back()));
    }
    const auto M = static_cast<Eigen::Index>(m);
    Eigen::MatrixXd emp(M, M), se(M, M);
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = a; b < m; ++b) {
        std::vector<double> prod(cfg.replications);
        for (std::size_t i = 0; i < cfg.replications; ++i)
          prod[i] = (cols[a][i] - means[a]) * (cols[b][i] - means[b]);
        const double sum = sample_mean(prod) * R;
        const auto ia = static_cast<Eigen::Index>(a), ib = static_cast<Eigen::Index>(b);
        emp(ia, ib) = emp(ib, ia) = sum / (R - 1.0);
        se(ia, ib) = se(ib, ia) = std::sqrt(sample_variance(prod) / R);
      }
    }
    const auto lattice = lattice_sigma_matrix(spec, levels, window.spacing);
    const auto continuum = spec.cov.family() == CovarianceFamily::nugget
                               ? CovMatrix{levels, Eigen::MatrixXd::Zero(M, M), 0.0}
                               : sigma_matrix(spec, levels);
    res.summary = {{"levels", levels},
                   {"tail_probs", psi},
                   {"empirical_cov", matrix_json(emp)},
                   {"empirical_cov_se", matrix_json(se)},
                   {"target_lattice", matrix_json(lattice.entries)},
                   {"target_continuum", matrix_json(continuum.entries)},
                   {"target_lattice_psd", lattice.is_psd()}};
    const double k = cfg.tol.se_multiplier;
    for (Eigen::Index a = 0; a < M; ++a) {
      for (Eigen::Index b = a; b < M; ++b) {
        const double e = emp(a, b), s = se(a, b);
        const auto la = static_cast<std::size_t>(a), lb = static_cast<std::size_t>(b);
        res.verdicts.push_back(band(pair_name("cov_vs_lattice", la, lb), e,
                                    lattice.entries(a, b) - k * s, lattice.entries(a, b) + k * s));
        res.verdicts.push_back(band(pair_name("cov_vs_continuum", la, lb), e,
                                    continuum.entries(a, b) - k * s,
                                    continuum.entries(a, b) + k * s));
      }
    }
    rep.windows.push_back(std::move(res));
  }
  return rep;
}

MCReport run_level_growth_experiment(const ExperimentConfig& cfg) {
  require_kind(cfg, {ExperimentKind::level_growth});
  const auto& spec = gaussian_null(cfg);
  auto rep = new_report(cfg);

  for (std::size_t w = 0; w < cfg.windows.size(); ++w) {
    const auto& window = cfg.windows[w];
    for (auto n : window.dims)
      if (n != window.dims.front()) throw ConfigError("level growth needs cubic windows");
    const double side = static_cast<double>(window.dims.front()) * window.spacing;
    if (side < 1.0 && cfg.level_c != 0.0) throw ConfigError("level schedule needs window side >= 1");
    const double u = spec.mean + spec.stddev() * cfg.level_c * std::sqrt(std::max(std::log(side), 0.0));
    const double psi = tail_prob(spec, u);
    const double expected_sites = psi * static_cast<double>(window.site_count());
    if (expected_sites < 10.0) {
      std::ostringstream os;
      os << "window " << w << ": expected excursion site count " << expected_sites
         << " < 10; schedule is degenerate at this size";
      rep.warnings.push_back(os.str());
    }
    const double vol = window.volume();
    const double sigma_n2 = lattice_windowed_variance(spec, u, window).value;
    const double sigma_n = std::sqrt(sigma_n2);
    const FieldSampler sampler(cfg.field, window);
    const std::vector<double> level{u};
    WindowResult res{window, {}, {}, {{"normalized", "volume"}, {}}};
    res.raw.rows = parallel_map(cfg.replications, cfg.threads, [&](std::size_t i) {
      const auto field = sampler.sample(replication_seed(cfg, w, i));
      const double v = excursion_volumes(field, level).front().volume;
      return std::vector<double>{(v - psi * vol) / sigma_n, v};
    });
    const auto z = res.raw.column(0);
    const double var = sample_variance(z);
    const auto ks = ks_test(z, [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); });
    nlohmann::json continuum = nullptr;
    if (spec.dim() == 1 && spec.cov.family() != CovarianceFamily::nugget)
      continuum = windowed_variance(spec, u, side, 1e-6 * side).value;
    res.summary = {{"side", side},
                   {"level", u},
                   {"tail_prob", psi},
                   {"expected_excursion_sites", expected_sites},
                   {"sigma_n2_lattice", sigma_n2},
                   {"sigma_n2_continuum", continuum},
                   {"mean", sample_mean(z)},
                   {"variance", var},
                   {"variance_se", variance_standard_error(z)},
                   {"ks_statistic", ks.statistic},
                   {"ks_p_value", ks.p_value}};
    res.verdicts.push_back(band("normalized_variance", var, 1.0 - cfg.tol.var_rel, 1.0 + cfg.tol.var_rel));
    res.verdicts.push_back(band("ks_p_value", ks.p_value, cfg.tol.ks_p, 1.0));
    rep.windows.push_back(std::move(res));
  }
  return rep;
}

MCReport run_surface_experiment(const ExperimentConfig& cfg) {
  require_kind(cfg, {ExperimentKind::surface_mean});
  const auto& spec = gaussian_null(cfg);
  second_spectral_moment(spec.cov);  // throws for non-smooth families
  auto rep = new_report(cfg);
  const int d = spec.dim();
  if (d != 1 && d != 2) throw UnsupportedDimension("surface experiments support d = 1 or 2");
  const auto& levels = cfg.levels;

  for (std::size_t w = 0; w < cfg.windows.size(); ++w) {
    const auto& window = cfg.windows[w];
    const FieldSampler sampler(cfg.field, window);
    const double hull = window.hull_volume();
    WindowResult res{window, {}, {}, {}};
    for (std::size_t l = 0; l < levels.size(); ++l)
      res.raw.columns.push_back((d == 1 ? "crossings" : "perimeter") + std::to_string(l));
    res.raw.rows = parallel_map(cfg.replications, cfg.threads, [&](std::size_t i) {
      const auto field = sampler.sample(replication_seed(cfg, w, i));
      std::vector<double> row;
      for (double u : levels) {
        row.push_back(d == 1 ? static_cast<double>(crossing_count(field, u))
                             : excursion_perimeter(field, u));
      }
      return row;
    });
    nlohmann::json per_level = nlohmann::json::array();
    for (std::size_t l = 0; l < levels.size(); ++l) {
      const auto x = res.raw.column(l);
      const double mean = sample_mean(x);
      const double se = std::sqrt(sample_variance(x) / static_cast<double>(x.size()));
      const double expected = mean_surface_area(spec, levels[l], hull);
      per_level.push_back({{"level", levels[l]},
                           {"mean", mean},
                           {"mean_se", se},
                           {"mean_per_unit_volume", mean / hull},
                           {"expected", expected},
                           {"expected_intrinsic_volume", mean_surface_area_display(spec, levels[l], hull)},
                           {"relative_error", expected > 0.0 ? (mean - expected) / expected : 0.0}});
      res.verdicts.push_back(band("mean_vs_theory[" + std::to_string(l) + "]", mean,
                                  expected * (1.0 - cfg.tol.mean_rel),
                                  expected * (1.0 + cfg.tol.mean_rel)));
    }
    res.summary = {{"hull_volume", hull}, {"levels", per_level}};
    rep.windows.push_back(std::move(res));
  }
  return rep;
}

MCReport run_test_study(const ExperimentConfig& cfg) {
  require_kind(cfg, {ExperimentKind::test_size_power});
  const auto& spec = gaussian_null(cfg);
  auto rep = new_report(cfg);
  const auto levels = cfg.explicit_levels ? cfg.levels : default_test_levels(spec, cfg.test_levels);
  const double crit = chi_square_critical_value(static_cast<int>(levels.size()), cfg.alpha);

  for (std::size_t w = 0; w < cfg.windows.size(); ++w) {
    const auto& window = cfg.windows[w];
    EstimatorConfig est = EstimatorConfig::for_window(window);
    if (cfg.block_side > 0) est.block_side = cfg.block_side;

    auto run = [&](const FieldSampler& sampler, std::size_t count, bool alternative, double tag) {
      return parallel_map(count, cfg.threads, [&](std::size_t i) {
        const auto field = sampler.sample(replication_seed(cfg, w, i, alternative));
        const auto t = gaussianity_test(field, spec, levels, cfg.alpha, est);
        return std::vector<double>{tag, t.statistic, t.p_value,
                                   t.decision == Decision::reject ? 1.0 : 0.0};
      });
    };
    WindowResult res{window, {}, {}, {{"population", "statistic", "p_value", "reject"}, {}}};
    res.raw.rows = run(FieldSampler(cfg.field, window), cfg.replications, false, 0.0);
    if (cfg.alternative) {
      auto alt_rows = run(FieldSampler(*cfg.alternative, window), cfg.alt_replications, true, 1.0);
      res.raw.rows.insert(res.raw.rows.end(), alt_rows.begin(), alt_rows.end());
    }

    std::size_t null_n = 0, null_rej = 0, alt_n = 0, alt_rej = 0, disagreements = 0;
    std::vector<double> null_stats;
    for (const auto& row : res.raw.rows) {
      const bool reject = row[3] == 1.0;
      if ((row[2] < cfg.alpha) != reject) ++disagreements;
      if (row[0] == 0.0) {
        ++null_n;
        null_rej += reject;
        null_stats.push_back(row[1]);
      } else {
        ++alt_n;
        alt_rej += reject;
      }
    }
    const double size = static_cast<double>(null_rej) / static_cast<double>(null_n);
    const auto ci = wilson_interval(null_rej, null_n);
    res.summary = {{"levels", levels},
                   {"alpha", cfg.alpha},
                   {"critical_value", crit},
                   {"block_side", est.block_side},
                   {"size", size},
                   {"size_ci99", {ci.lo, ci.hi}},
                   {"null_statistic_mean", sample_mean(null_stats)},
                   {"decision_disagreements", disagreements}};
    res.verdicts.push_back(band("size", size, cfg.tol.size_lo, cfg.tol.size_hi));
    res.verdicts.push_back(band("decision_consistency", static_cast<double>(disagreements), 0.0, 0.0));
    if (alt_n > 0) {
      const double power = static_cast<double>(alt_rej) / static_cast<double>(alt_n);
      res.summary["power"] = power;
      res.summary["alternative"] = cfg.alternative->describe();
      res.verdicts.push_back(band("power", power, cfg.tol.power_min, 1.0));
    }
    rep.windows.push_back(std::move(res));
  }
  return rep;
}

MCReport run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case ExperimentKind::clt_volume: return run_clt_experiment(cfg);
    case ExperimentKind::multivariate_clt:
    case ExperimentKind::fclt_grid: return run_fclt_experiment(cfg);
    case ExperimentKind::level_growth: return run_level_growth_experiment(cfg);
    case ExperimentKind::surface_mean: return run_surface_experiment(cfg);
    case ExperimentKind::test_size_power: return run_test_study(cfg);
  }
  throw ConfigError("unknown experiment kind");
}

void write_json(const nlohmann::json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << j.dump(2) << "\n";
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

void write_report(const MCReport& report, const std::filesystem::path& path) {
  write_json(report.to_json(), path);
}

}  // namespace exset
