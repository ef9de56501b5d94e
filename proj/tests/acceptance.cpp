// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
// Usage: acceptance [config_dir]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "exset/asymptotics.hpp"
#include "exset/grid_io.hpp"
#include "exset/harness.hpp"
#include "exset/simulate.hpp"
#include "oracles.hpp"

using namespace exset;

namespace {

// Pinned tolerances.
constexpr double kPlackettTol = 1e-8;
constexpr double kClosedFormTol = 1e-6;
constexpr double kWindowedTol = 1e-8;
constexpr double kFastSeconds = 1.0;
constexpr double kWhiteNoiseVarLo = 0.225, kWhiteNoiseVarHi = 0.275;
constexpr double kKsMin = 0.01;
constexpr double kLatticeVarRel = 0.10;
constexpr double kSeMultiplier = 3.0;
constexpr double kSizeLo = 0.03, kSizeHi = 0.08;
constexpr double kPowerMin = 0.9;
constexpr double kRiceRel = 0.03;
constexpr double kPerimeterRel = 0.05;
constexpr double kGrowthVarLo = 0.85, kGrowthVarHi = 1.15;

constexpr double kPi = std::numbers::pi;

std::filesystem::path config_dir = EXSET_CONFIG_DIR;
int failures = 0;

void report(int n, bool ok, const std::string& what) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", n, what.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ExperimentConfig load(const std::string& name) {
  return ExperimentConfig::from(KeyValueConfig::load(config_dir / name));
}

GaussianFieldSpec spec_of(CovarianceFamily f, double scale, int d) {
  return {0.0, CovarianceModel(f, scale, 1.0, d)};
}

void guarded(int n, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(n, false, std::string("exception: ") + e.what());
  }
}

void criterion1() {
  const auto spec = spec_of(CovarianceFamily::exponential, 1.0, 1);
  const auto t0 = std::chrono::steady_clock::now();
  double worst_closed = 0.0;
  std::vector<double> lib;
  for (int k = 1; k <= 9; ++k) {
    const double rho = 0.1 * k;
    const double c = indicator_cov_gauss(0.0, 0.0, rho, spec);
    lib.push_back(c);
    worst_closed = std::max(worst_closed, std::abs(c - std::asin(rho) / (2.0 * kPi)));
  }
  const double secs = seconds_since(t0);
  double worst_bf = 0.0;
  for (int k = 1; k <= 9; ++k) {
    const double bf = oracle::orthant_bruteforce(0.0, 0.0, 0.1 * k) - 0.25;
    worst_bf = std::max(worst_bf, std::abs(lib[k - 1] - bf));
  }
  report(1, worst_closed < kPlackettTol && worst_bf < kPlackettTol && secs < kFastSeconds,
         fmt("orthant identity, max |err| vs arcsin %.2e, vs 2-D brute force %.2e (tol %.0e), %.3f s",
             worst_closed, worst_bf, kPlackettTol, secs));
}

void criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  const double e1 = sigma2(spec_of(CovarianceFamily::exponential, 1.0, 1), 0.0).value;
  // exp(-|t|^2) in the squared-exponential parametrization exp(-r^2 / (2 s^2)).
  const double se2 = sigma2(spec_of(CovarianceFamily::squared_exponential, 1.0 / std::sqrt(2.0), 2), 0.0).value;
  const double secs = seconds_since(t0);
  const double t1 = std::log(2.0) / 2.0, t2 = kPi * std::log(2.0) / 4.0;
  const double d1 = std::abs(e1 - t1), d2 = std::abs(se2 - t2);
  report(2, d1 < kClosedFormTol && d2 < kClosedFormTol && secs < kFastSeconds,
         fmt("closed forms, d=1 exp %.9f (err %.1e), d=2 gauss %.9f (err %.1e), %.3f s", e1, d1, se2, d2,
             secs));
}

void criterion3() {
  const auto spec = spec_of(CovarianceFamily::exponential, 1.0, 1);
  double worst = 0.0;
  for (double n : {0.5, 1.0, 2.0}) {
    // u = 0 through the arcsine law, u = 0.5 through Owen's T.
    const double at_median =
        oracle::windowed_double_integral([](double t) { return std::asin(std::exp(-t)) / (2.0 * kPi); }, n);
    const double off_median = oracle::windowed_double_integral(
        [](double t) { return oracle::indicator_cov_equal(0.5, std::exp(-t)); }, n);
    worst = std::max(worst, std::abs(windowed_variance(spec, 0.0, n).value - at_median));
    worst = std::max(worst, std::abs(windowed_variance(spec, 0.5, n).value - off_median));
  }
  report(3, worst < kWindowedTol,
         fmt("windowed reduction, n in {0.5,1,2}, u in {0,0.5}, max |err| %.2e (tol %.0e)", worst, kWindowedTol));
}

void criterion4() {
  const auto wn = run_experiment(load("clt_white_noise.cfg"));
  const auto& ws = wn.windows.front().summary;
  const double v = ws.at("variance"), ks = ws.at("ks_p_value");
  const auto se = run_experiment(load("clt_squared_exponential.cfg"));
  const auto& ss = se.windows.front().summary;
  const double sv = ss.at("variance"), target = ss.at("target_lattice");
  const double rel = std::abs(sv / target - 1.0);
  report(4, v >= kWhiteNoiseVarLo && v <= kWhiteNoiseVarHi && ks > kKsMin && rel < kLatticeVarRel,
         fmt("CLT, white noise 128^2 var %.4f in [%.3f, %.3f], KS p %.3f; squared exp 256^2 var %.4f vs "
             "lattice %.4f (rel %.3f < %.2f)",
             v, kWhiteNoiseVarLo, kWhiteNoiseVarHi, ks, sv, target, rel, kLatticeVarRel));
}

void criterion5() {
  const auto cfg = load("fclt_exponential.cfg");
  const auto rep = run_experiment(cfg);
  const auto& s = rep.windows.front().summary;
  const auto& spec = cfg.field.gaussian;
  const auto& lv = cfg.levels;
  double worst_z = 0.0, worst_oracle = 0.0;
  for (std::size_t a = 0; a < lv.size(); ++a) {
    for (std::size_t b = a; b < lv.size(); ++b) {
      const double target = fclt_cov(spec, lv[a], lv[b]);
      worst_oracle = std::max(worst_oracle,
                              std::abs(target - oracle::exp1d_cross_integral(lv[a], lv[b], spec.cov.scale())));
      const double emp = s.at("empirical_cov")[a][b], se = s.at("empirical_cov_se")[a][b];
      worst_z = std::max(worst_z, std::abs(emp - target) / se);
    }
  }
  report(5, worst_z < kSeMultiplier && worst_oracle < 1e-6,
         fmt("functional covariance, levels {-1,0,1}, n=4096, R=%zu, max |emp - fclt_cov| / SE %.2f (< %.0f); "
             "fclt_cov vs independent quadrature %.1e",
             cfg.replications, worst_z, kSeMultiplier, worst_oracle));
}

void criterion6() {
  const auto rep = run_experiment(load("test_size_power.cfg"));
  const auto& s = rep.windows.front().summary;
  const double size = s.at("size"), power = s.at("power");
  const double disagreements = s.at("decision_disagreements");
  report(6, size >= kSizeLo && size <= kSizeHi && power >= kPowerMin && disagreements == 0.0,
         fmt("Gaussianity test, size %.3f in [%.2f, %.2f] over 500 seeds, power %.3f >= %.2f over 200 seeds",
             size, kSizeLo, kSizeHi, power, kPowerMin));
}

void criterion7() {
  const auto cfg1 = load("surface_d1.cfg");
  const auto r1 = run_experiment(cfg1);
  // Independent lambda_2: -rho''(0) by central differences.
  const double dt = 1e-4;
  const auto& cov = cfg1.field.gaussian.cov;
  const double lambda2 = -(2.0 * cov.corr_radial(dt) - 2.0) / (dt * dt);
  std::string detail;
  bool ok = true;
  for (const auto& lv : r1.windows.front().summary.at("levels")) {
    const double u = lv.at("level"), rate = lv.at("mean_per_unit_volume");
    const double rice = oracle::rice_rate(lambda2, 1.0, u);
    const double rel = std::abs(rate / rice - 1.0);
    ok = ok && rel < kRiceRel;
    detail += fmt("u=%g rate %.5f vs Rice %.5f (rel %.4f); ", u, rate, rice, rel);
  }
  const auto r2 = run_experiment(load("surface_d2.cfg"));
  const auto& l2 = r2.windows.front().summary.at("levels")[0];
  const double mean = l2.at("mean"), expected = l2.at("expected");
  const double rel2 = std::abs(mean / expected - 1.0);
  ok = ok && rel2 < kPerimeterRel;
  report(7, ok,
         detail + fmt("d=2 perimeter %.4f vs %.4f (rel %.4f < %.2f)", mean, expected, rel2, kPerimeterRel));
}

void criterion8() {
  const auto rep = run_experiment(load("level_growth.cfg"));
  const auto& s = rep.windows.back().summary;
  const double v = s.at("variance"), ks = s.at("ks_p_value"), u = s.at("level");
  report(8, v >= kGrowthVarLo && v <= kGrowthVarHi && ks > kKsMin,
         fmt("increasing level, n=2^14, u_n=%.4f, normalized var %.4f in [%.2f, %.2f], KS p %.3f", u, v,
             kGrowthVarLo, kGrowthVarHi, ks));
}

void criterion9() {
  bool bitwise = true;
  const auto field = simulate_gaussian(spec_of(CovarianceFamily::exponential, 0.5, 3), GridWindow({7, 5, 3}, 0.3),
                                       {11, 0});
  auto values = field.values();
  values[0] = -0.0;
  values[1] = 4.9e-324;
  values[2] = std::nextafter(1.0, 2.0);
  const FieldRealization edge(field.window(), values);
  for (const auto* f : {&field, &edge}) {
    const auto back = decode_grid(encode_grid(*f));
    bitwise = bitwise && back.window() == f->window() &&
              std::memcmp(back.values().data(), f->values().data(), 8 * f->values().size()) == 0;
  }
  const auto tmp = std::filesystem::temp_directory_path() / "exset_acceptance.xgrd";
  write_grid(edge, tmp);
  const auto disk = read_grid(tmp);
  std::filesystem::remove(tmp);
  bitwise = bitwise && std::memcmp(disk.values().data(), values.data(), 8 * values.size()) == 0;

  bool identical = true;
  for (const char* name : {"smoke.cfg", "fclt_exponential.cfg"}) {
    auto cfg = load(name);
    cfg.replications = std::min<std::size_t>(cfg.replications, 200);
    std::string first;
    for (unsigned threads : {1u, 4u, 3u}) {
      cfg.threads = threads;
      const auto text = run_experiment(cfg).to_json().dump(2);
      if (first.empty()) first = text;
      identical = identical && text == first;
    }
  }
  report(9, bitwise && identical,
         fmt("XGRD round-trip bitwise %s; reports byte-identical at 1, 4, 3 threads %s", bitwise ? "yes" : "no",
             identical ? "yes" : "no"));
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) config_dir = argv[1];
  const auto t0 = std::chrono::steady_clock::now();
  guarded(1, criterion1);
  guarded(2, criterion2);
  guarded(3, criterion3);
  guarded(4, criterion4);
  guarded(5, criterion5);
  guarded(6, criterion6);
  guarded(7, criterion7);
  guarded(8, criterion8);
  guarded(9, criterion9);
  std::printf("%d of 9 criteria failed, %.1f s\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
