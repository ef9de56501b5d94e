// exset command-line front end: simulate, measure, variance, test, mc.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>
#include <json.hpp>
#include <optional>

#include "exset/asymptotics.hpp"
#include "exset/config.hpp"
#include "exset/error.hpp"
#include "exset/geometry.hpp"
#include "exset/grid_io.hpp"
#include "exset/harness.hpp"
#include "exset/inference.hpp"
#include "exset/simulate.hpp"

using namespace exset;
using nlohmann::json;

namespace {

void emit(const json& j, const std::string& out) {
  if (out == "-") {
    std::cout << j.dump(2) << "\n";
  } else {
    write_json(j, out);
  }
}

json window_json(const GridWindow& w) {
  return {{"dims", w.dims}, {"spacing", w.spacing}, {"volume", w.volume()}, {"sites", w.site_count()}};
}

json report_json(const VarianceReport& r) {
  json j = {{"value", r.value},
            {"truncation_radius", r.truncation_radius},
            {"quadrature_error_estimate", r.quadrature_error_estimate},
            {"requested_tolerance", r.requested_tolerance}};
  j["lattice_spacing"] = r.lattice_spacing ? json(*r.lattice_spacing) : json(nullptr);
  return j;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(row);
  }
  return out;
}

GaussianFieldSpec gaussian_model(const std::string& path) {
  const auto cfg = field_config_from(KeyValueConfig::load(path));
  if (cfg.kind != FieldKind::gaussian) throw ConfigError("'" + path + "' does not describe a Gaussian field");
  return cfg.gaussian;
}

int run_simulate(const std::string& config, std::uint64_t seed, std::uint64_t stream, const std::string& out) {
  const auto cfg = field_config_from(KeyValueConfig::load(config));
  if (!cfg.window) throw ConfigError("simulation config needs 'dims' (and optionally 'spacing')");
  const FieldSampler sampler(cfg, *cfg.window);
  const auto field = sampler.sample({seed, stream});
  write_grid(field, out);
  std::fprintf(stderr, "%s: %zu sites, generator %s, spec %s\n", out.c_str(), field.values().size(),
               field.provenance().generator.c_str(), field.provenance().spec_digest.c_str());
  return 0;
}

int run_measure(const std::string& path, const std::vector<double>& levels, bool perimeter,
                const std::string& out) {
  const auto field = read_grid(path);
  const auto meas = measure_excursions(field, levels, perimeter);
  json volumes = json::array(), perimeters = json::array(), crossings = json::array();
  for (const auto& m : meas) {
    volumes.push_back(m.volume);
    perimeters.push_back(m.perimeter ? json(*m.perimeter) : json(nullptr));
    crossings.push_back(m.crossings ? json(*m.crossings) : json(nullptr));
  }
  emit({{"schema", "exset.measure/1"},
        {"field", path},
        {"window", window_json(field.window())},
        {"levels", levels},
        {"volumes", volumes},
        {"perimeters", perimeters},
        {"crossings", crossings}},
       out);
  return 0;
}

struct VarianceArgs {
  std::string config;
  double level = 0.0;
  std::optional<double> lattice;
  std::vector<double> matrix;
  std::optional<double> windowed;
  bool surface = false;
  double tol = kDefaultTolerance;
  std::string out;
};

int run_variance(const VarianceArgs& a) {
  const auto spec = gaussian_model(a.config);
  json j = {{"schema", "exset.variance/1"}, {"model", describe(spec)}, {"level", a.level},
            {"tail_prob", tail_prob(spec, a.level)}};
  if (auto w = decay_hypothesis_warning(spec.cov)) j["warnings"] = json::array({*w});
  j["sigma2"] = report_json(sigma2(spec, a.level, a.tol));
  if (a.lattice) j["sigma2_lattice"] = report_json(sigma2_lattice(spec, a.level, *a.lattice));
  if (!a.matrix.empty()) {
    const auto m = sigma_matrix(spec, a.matrix, a.tol);
    json mj = {{"levels", m.levels},
               {"entries", matrix_json(m.entries)},
               {"min_eigenvalue", m.min_eigenvalue()},
               {"psd", m.is_psd()}};
    if (a.lattice) mj["lattice_entries"] = matrix_json(lattice_sigma_matrix(spec, a.matrix, *a.lattice).entries);
    j["matrix"] = mj;
  }
  if (a.windowed) {
    const double n = *a.windowed;
    auto wj = report_json(windowed_variance(spec, a.level, n, a.tol * std::pow(std::max(n, 1.0), spec.dim())));
    wj["n"] = n;
    j["windowed"] = wj;
  }
  if (a.surface) {
    j["surface"] = {{"second_spectral_moment", second_spectral_moment(spec.cov)},
                    {"boundary_measure_per_unit_volume", mean_surface_area(spec, a.level, 1.0)},
                    {"intrinsic_volume_per_unit_volume", mean_surface_area_display(spec, a.level, 1.0)}};
  }
  emit(j, a.out);
  return 0;
}

struct TestArgs {
  std::string field, null_model, out;
  std::vector<double> levels;
  double alpha = 0.05;
  std::size_t block = 0;
  int r = 3;
};

int run_test(const TestArgs& a) {
  const auto field = read_grid(a.field);
  const auto null_spec = gaussian_model(a.null_model);
  const auto levels = a.levels.empty() ? default_test_levels(null_spec, a.r) : a.levels;
  auto est = EstimatorConfig::for_window(field.window());
  if (a.block > 0) est.block_side = a.block;
  const auto rep = gaussianity_test(field, null_spec, levels, a.alpha, est);
  auto j = to_json(rep);
  j["field"] = a.field;
  j["null_model"] = describe(null_spec);
  emit(j, a.out);
  std::fprintf(stderr, "T = %.6g, df = %d, p = %.6g: %s\n", rep.statistic, rep.df, rep.p_value,
               std::string(to_string(rep.decision)).c_str());
  return 0;
}

int run_mc(const std::string& config, const std::string& out, const std::string& raw, int threads) {
  auto cfg = ExperimentConfig::from(KeyValueConfig::load(config));
  if (threads >= 0) cfg.threads = static_cast<unsigned>(threads);
  const auto t0 = std::chrono::steady_clock::now();
  const auto rep = run_experiment(cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  emit(rep.to_json(), out);
  if (!raw.empty()) rep.write_raw(raw);
  for (std::size_t w = 0; w < rep.windows.size(); ++w) {
    for (const auto& v : rep.windows[w].verdicts) {
      std::fprintf(stderr, "window %zu  %-28s %s  value %.6g  [%.6g, %.6g]\n", w, v.name.c_str(),
                   v.passed ? "PASS" : "FAIL", v.value, v.lower, v.upper);
    }
  }
  for (const auto& w : rep.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  std::fprintf(stderr, "%s in %.1f s\n", rep.passed() ? "passed" : "FAILED", secs);
  return rep.passed() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Excursion sets of stationary random fields: simulation, limit theorems, tests"};
  app.require_subcommand(1);

  std::string sim_config, sim_out;
  std::uint64_t sim_seed = 1, sim_stream = 0;
  auto* sim = app.add_subcommand("simulate", "Sample a field and write it as an XGRD grid");
  sim->add_option("--config", sim_config, "Model config (with dims and spacing)")->required()->check(CLI::ExistingFile);
  sim->add_option("--seed", sim_seed, "Master seed");
  sim->add_option("--stream", sim_stream, "Stream index");
  sim->add_option("--out", sim_out, "Output .xgrd path")->required();

  std::string meas_field, meas_levels, meas_out = "-";
  bool meas_perimeter = false;
  auto* meas = app.add_subcommand("measure", "Excursion volumes, perimeters and crossings of a grid");
  meas->add_option("--field", meas_field, "Input .xgrd")->required()->check(CLI::ExistingFile);
  meas->add_option("--levels", meas_levels, "Comma-separated increasing levels")->required();
  meas->add_flag("--perimeter", meas_perimeter, "Also compute contour lengths (d = 2)");
  meas->add_option("--out", meas_out, "Output JSON ('-' for stdout)");

  VarianceArgs va;
  va.out = "-";
  std::string va_matrix;
  auto* var = app.add_subcommand("variance", "Asymptotic variances and related limits of a Gaussian model");
  var->add_option("--config", va.config, "Model config")->required()->check(CLI::ExistingFile);
  var->add_option("--level", va.level, "Level u")->required();
  var->add_option("--lattice", va.lattice, "Also compute the lattice sum at spacing h");
  var->add_option("--matrix", va_matrix, "Comma-separated increasing levels for the covariance matrix");
  var->add_option("--windowed", va.windowed, "Window side n for the finite-window variance");
  var->add_flag("--surface", va.surface, "Mean boundary measure (smooth models)");
  var->add_option("--tol", va.tol, "Absolute quadrature tolerance");
  var->add_option("--out", va.out, "Output JSON ('-' for stdout)");

  TestArgs ta;
  ta.out = "-";
  std::string ta_levels;
  auto* test = app.add_subcommand("test", "Gaussianity test of a grid against a fully specified null");
  test->add_option("--field", ta.field, "Input .xgrd")->required()->check(CLI::ExistingFile);
  test->add_option("--null", ta.null_model, "Null model config")->required()->check(CLI::ExistingFile);
  test->add_option("--levels", ta_levels, "Comma-separated increasing levels (default: null quartiles)");
  test->add_option("--r", ta.r, "Number of default levels");
  test->add_option("--alpha", ta.alpha, "Significance level");
  test->add_option("--block", ta.block, "Block side in sites (default: floor(sqrt(side)))");
  test->add_option("--out", ta.out, "Output JSON ('-' for stdout)");

  std::string mc_config, mc_out = "-", mc_raw;
  int mc_threads = -1;
  auto* mc = app.add_subcommand("mc", "Run a Monte Carlo experiment");
  mc->add_option("--config", mc_config, "Experiment config")->required()->check(CLI::ExistingFile);
  mc->add_option("--out", mc_out, "Output JSON report ('-' for stdout)");
  mc->add_option("--raw", mc_raw, "Directory for per-replication CSV tables");
  mc->add_option("--threads", mc_threads, "Worker threads (0 = all cores; overrides the config)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) return run_simulate(sim_config, sim_seed, sim_stream, sim_out);
    if (*meas) return run_measure(meas_field, parse_double_list(meas_levels), meas_perimeter, meas_out);
    if (*var) {
      if (!va_matrix.empty()) va.matrix = parse_double_list(va_matrix);
      return run_variance(va);
    }
    if (*test) {
      if (!ta_levels.empty()) ta.levels = parse_double_list(ta_levels);
      return run_test(ta);
    }
    if (*mc) return run_mc(mc_config, mc_out, mc_raw, mc_threads);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
