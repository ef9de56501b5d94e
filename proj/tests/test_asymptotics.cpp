#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "exset/asymptotics.hpp"
#include "exset/error.hpp"
#include "exset/quadrature.hpp"
#include "oracles.hpp"

using namespace exset;

namespace {

constexpr double kPi = std::numbers::pi;
const double kLn2 = std::log(2.0);

GaussianFieldSpec spec_of(CovarianceFamily f, double scale, int d, double mean = 0.0, double var = 1.0,
                          double beta = 0.0) {
  return {mean, CovarianceModel(f, scale, var, d, beta)};
}

/// Radial integral of the oracle indicator covariance at standardized level x.
double oracle_sigma2(const GaussianFieldSpec& s, double u) {
  const int d = s.dim();
  const double x = (u - s.mean) / s.stddev();
  const double reach = s.cov.cutoff_radius(1e-13);
  const double surface = d * unit_ball_volume(d);
  auto f = [&](double r) { return surface * std::pow(r, d - 1) * oracle::indicator_cov(x, x, s.cov.corr_radial(r)); };
  const double knot = std::min(reach, s.cov.scale());
  return oracle::gk(f, 0.0, knot) + oracle::gk(f, knot, reach);
}

}  // namespace

TEST_CASE("adaptive quadrature on known integrals") {
  auto r = integrate([](double x) { return std::exp(x); }, 0.0, 1.0, 1e-13);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
  r = integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-10);
  CHECK(r.value == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  CHECK(r.error <= 1e-10);
  r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-14, 0.0, 20);
  CHECK_FALSE(r.converged);
}

TEST_CASE("indicator covariance reference values") {
  const auto s = spec_of(CovarianceFamily::exponential, 1.0, 1);
  CHECK(indicator_cov_gauss(0, 0, 0.0, s) == 0.0);
  CHECK(indicator_cov_gauss(0, 0, 1.0, s) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(indicator_cov_gauss(0, 0, 0.5, s) == doctest::Approx(1.0 / 12.0).epsilon(1e-12));
  CHECK(std::abs(indicator_cov_gauss(0, 0, 0.5, s) - (oracle::orthant_bruteforce(0, 0, 0.5) - 0.25)) < 1e-10);
  CHECK_THROWS_AS(indicator_cov_gauss(0, 0, 1.0 + 1e-9, s), Error);
  CHECK_THROWS_AS(indicator_cov_gauss(0, 0, -1.5, s), Error);
}

TEST_CASE("indicator covariance against brute-force orthant quadrature") {
  const auto s = spec_of(CovarianceFamily::exponential, 1.0, 1);
  for (int k = 1; k <= 9; ++k) {
    const double rho = 0.1 * k;
    const double bf = oracle::orthant_bruteforce(0, 0, rho) - 0.25;
    CHECK(std::abs(indicator_cov_gauss(0, 0, rho, s) - bf) < 1e-10);
    CHECK(std::abs(bf - std::asin(rho) / (2.0 * kPi)) < 1e-10);
  }
  // Unequal levels, shifted mean and variance, negative correlation.
  const auto t = spec_of(CovarianceFamily::exponential, 1.0, 1, 1.0, 4.0);
  for (double rho : {-0.8, -0.3, 0.2, 0.6, 0.95, 0.999}) {
    for (auto [u, v] : {std::pair{1.0, 1.0}, std::pair{0.2, 2.6}, std::pair{3.5, -1.0}}) {
      const double x = (u - 1.0) / 2.0, y = (v - 1.0) / 2.0;
      const double bf = oracle::orthant_bruteforce(x, y, rho, 160) - oracle::upper_tail(x) * oracle::upper_tail(y);
      CHECK_MESSAGE(std::abs(indicator_cov_gauss(u, v, rho, t) - bf) < 1e-10, "rho ", rho, " u ", u, " v ", v);
      CHECK(indicator_cov_gauss(u, v, rho, t) == doctest::Approx(indicator_cov_gauss(v, u, rho, t)).epsilon(1e-13));
    }
  }
}

TEST_CASE("indicator covariance is nonnegative and non-decreasing in rho") {
  const auto s = spec_of(CovarianceFamily::exponential, 1.0, 1);
  for (auto [u, v] : {std::pair{0.0, 0.0}, std::pair{-1.0, 2.0}, std::pair{3.0, 3.0}}) {
    double prev = 0.0;
    for (int k = 0; k <= 100; ++k) {
      const double c = indicator_cov_gauss(u, v, 0.01 * k, s);
      CHECK(c >= 0.0);
      CHECK(c >= prev - 1e-16);
      prev = c;
    }
  }
}

TEST_CASE("asymptotic variance closed forms") {
  const auto e1 = spec_of(CovarianceFamily::exponential, 1.0, 1);
  const auto r = sigma2(e1, 0.0);
  CHECK(std::abs(r.value - kLn2 / 2.0) < 1e-6);
  CHECK(r.quadrature_error_estimate <= r.requested_tolerance);
  // (1/pi) int_0^inf arcsin(e^-t) dt by tanh-sinh.
  boost::math::quadrature::tanh_sinh<double> ts;
  const double ts_val = ts.integrate([](double t) { return std::asin(std::exp(-t)); }, 0.0, 60.0) / kPi;
  CHECK(std::abs(r.value - ts_val) < 1e-9);

  const auto se2 = spec_of(CovarianceFamily::squared_exponential, 1.0 / std::sqrt(2.0), 2, 3.0, 2.0);
  CHECK(std::abs(sigma2(se2, 3.0).value - kPi * kLn2 / 4.0) < 1e-6);
  CHECK(sigma2(e1, 6.0).value < 1e-6);
}

TEST_CASE("asymptotic variance against an independent radial oracle") {
  for (const auto& [s, u] : {std::pair{spec_of(CovarianceFamily::exponential, 1.5, 1, 0.5, 2.0), 1.2},
                             std::pair{spec_of(CovarianceFamily::squared_exponential, 0.8, 2), 0.7},
                             std::pair{spec_of(CovarianceFamily::exponential, 1.0, 3), -0.3},
                             std::pair{spec_of(CovarianceFamily::cauchy, 1.0, 1, 0.0, 1.0, 5.0), 0.4}}) {
    const double lib = sigma2(s, u).value;
    CHECK_MESSAGE(std::abs(lib - oracle_sigma2(s, u)) < 1e-7 * std::max(1.0, lib), describe(s));
  }
}

TEST_CASE("asymptotic variance shrinks with the level distance and handles edge models") {
  const auto s = spec_of(CovarianceFamily::squared_exponential, 1.0, 2, 1.0);
  double prev = INFINITY;
  for (int k = 0; k <= 8; ++k) {
    const double up = sigma2(s, 1.0 + 0.5 * k).value;
    const double down = sigma2(s, 1.0 - 0.5 * k).value;
    CHECK(up == doctest::Approx(down).epsilon(1e-9));
    CHECK(up < prev);
    prev = up;
  }
  CHECK(sigma2(spec_of(CovarianceFamily::nugget, 1.0, 2), 0.0).value == 0.0);
  CHECK_THROWS_AS(sigma2(spec_of(CovarianceFamily::cauchy, 1.0, 2, 0.0, 1.0, 2.0), 0.0), Error);
  try {
    sigma2(spec_of(CovarianceFamily::exponential, 1.0, 1), 0.0, 1e-30);
    FAIL("expected a quadrature failure");
  } catch (const QuadratureFailure& e) {
    CHECK(e.best_estimate() == doctest::Approx(kLn2 / 2.0).epsilon(1e-8));
    CHECK(e.error_estimate() > 1e-30);
  }
}

TEST_CASE("cross covariances and the level covariance matrix") {
  const auto e1 = spec_of(CovarianceFamily::exponential, 1.0, 1);
  const std::vector<double> two{0.0, 0.5};
  const auto m = sigma_matrix(e1, two);
  CHECK(std::abs(m.entries(0, 1) - oracle::exp1d_cross_integral(0.0, 0.5, 1.0)) < 1e-6);
  CHECK(m.entries(0, 1) == m.entries(1, 0));
  CHECK(m.entries(0, 0) == doctest::Approx(sigma2(e1, 0.0).value).epsilon(1e-10));
  CHECK(std::abs(fclt_cov(e1, 0.0, 1.0) - oracle::exp1d_cross_integral(0.0, 1.0, 1.0)) < 1e-6);
  CHECK(fclt_cov(e1, 1.0, 0.0) == doctest::Approx(fclt_cov(e1, 0.0, 1.0)).epsilon(1e-12));
  CHECK(fclt_cov(e1, -0.4, -0.4) == doctest::Approx(sigma2(e1, -0.4).value).epsilon(1e-10));

  const std::vector<double> one{0.8};
  CHECK(sigma_matrix(e1, one).entries(0, 0) == doctest::Approx(sigma2(e1, 0.8).value).epsilon(1e-12));

  const auto s2 = spec_of(CovarianceFamily::squared_exponential, 1.0, 2);
  const std::vector<double> grid{-1.5, -0.5, 0.0, 0.4, 1.0, 2.0};
  const auto big = sigma_matrix(s2, grid);
  CHECK(big.entries.isApprox(big.entries.transpose(), 0.0));
  CHECK(big.is_psd());
  CHECK(big.min_eigenvalue() >= -1e-10 * big.max_eigenvalue());
  CHECK_THROWS_AS(sigma_matrix(s2, std::vector<double>{1.0, 0.0}), Error);
}

TEST_CASE("lattice variance: nugget, direct summation and refinement") {
  CHECK(sigma2_lattice(spec_of(CovarianceFamily::nugget, 1.0, 2), 0.0, 1.0).value == doctest::Approx(0.25));
  CHECK(sigma2_lattice(spec_of(CovarianceFamily::nugget, 1.0, 1), 0.0, 0.5).value == doctest::Approx(0.125));
  const auto e1 = spec_of(CovarianceFamily::exponential, 1.0, 1);
  const auto q = sigma2_lattice(e1, 0.0, 0.25);
  // The exact lattice sum sits 3.4% above the continuum value at h = 1/4
  // and 1.2% above it at h = 1/8.
  CHECK(std::abs(q.value / (kLn2 / 2.0) - 1.0) < 0.035);
  CHECK(std::abs(sigma2_lattice(e1, 0.0, 0.125).value / (kLn2 / 2.0) - 1.0) < 0.02);
  REQUIRE(q.lattice_spacing.has_value());
  double direct = 0.25;  // k = 0 term: arcsin(1) / (2 pi)
  for (int k = 1; k < 400; ++k) direct += 2.0 * std::asin(std::exp(-0.25 * k)) / (2.0 * kPi);
  CHECK(std::abs(q.value - 0.25 * direct) < 1e-9);

  for (const auto& s : {e1, spec_of(CovarianceFamily::exponential, 1.0, 2), spec_of(CovarianceFamily::cauchy, 1.0, 1, 0.0, 1.0, 4.0)}) {
    const double target = sigma2(s, 0.3).value;
    double prev_err = INFINITY;
    for (double h = 0.5; h >= 1.0 / 32; h /= 2) {
      const double err = std::abs(sigma2_lattice(s, 0.3, h).value - target);
      CHECK_MESSAGE(err < prev_err, describe(s), " h=", h);
      if (std::isfinite(prev_err) && prev_err > 1e-7) CHECK_MESSAGE(std::log2(prev_err / err) >= 1.0, describe(s), " h=", h);
      prev_err = err;
    }
  }
}

TEST_CASE("windowed variance: reduction identity and limits") {
  const auto e1 = spec_of(CovarianceFamily::exponential, 1.0, 1);
  for (double rho : {0.1, 0.5, 0.9})
    CHECK(oracle::indicator_cov_equal(0.5, rho) == doctest::Approx(oracle::indicator_cov(0.5, 0.5, rho)).epsilon(1e-10));
  for (double n : {0.5, 1.0, 2.0}) {
    const double direct = oracle::windowed_double_integral(
        [](double t) { return std::asin(std::exp(-t)) / (2.0 * kPi); }, n);
    CHECK(std::abs(windowed_variance(e1, 0.0, n).value - direct) < 1e-8);
    const double off = oracle::windowed_double_integral(
        [](double t) { return oracle::indicator_cov_equal(0.5, std::exp(-t)); }, n);
    CHECK(std::abs(windowed_variance(e1, 0.5, n).value - off) < 1e-8);
  }
  const double s2 = sigma2(e1, 0.0).value;
  CHECK(std::abs(windowed_variance(e1, 0.0, 100.0, 1e-6).value / 100.0 / s2 - 1.0) < 0.03);
  for (double n : {0.1, 1.0, 10.0, 50.0, 300.0}) CHECK(windowed_variance(e1, 0.0, n, 1e-6 * n).value <= n * s2);
  CHECK(windowed_variance(e1, 0.0, 1e-6).value < 1e-12);

  const auto se2 = spec_of(CovarianceFamily::squared_exponential, 1.0, 2);
  const double sig = sigma2(se2, 0.0).value;
  double prev_ratio = 0.0;
  for (double n : {5.0, 20.0, 80.0}) {
    const double ratio = windowed_variance(se2, 0.0, n, 1e-7 * n * n).value / (n * n);
    CHECK(ratio <= sig);
    CHECK(ratio > prev_ratio);
    prev_ratio = ratio;
  }
  CHECK(std::abs(prev_ratio / sig - 1.0) < 0.05);
  CHECK_THROWS_AS(windowed_variance(e1, 0.0, 0.0), Error);
}

TEST_CASE("lattice windowed variance equals the brute-force pair sum") {
  const auto s = spec_of(CovarianceFamily::exponential, 1.7, 2, 0.0, 2.0);
  const GridWindow w({7, 5}, 0.6);
  const double u = 0.4;
  const double x = u / std::sqrt(2.0);
  double sum = 0.0;
  for (int i1 = 0; i1 < 7; ++i1)
    for (int j1 = 0; j1 < 5; ++j1)
      for (int i2 = 0; i2 < 7; ++i2)
        for (int j2 = 0; j2 < 5; ++j2) {
          const double r = 0.6 * std::hypot(i1 - i2, j1 - j2);
          sum += oracle::indicator_cov(x, x, s.cov.corr_radial(r));
        }
  const double expected = std::pow(0.6, 4) * sum;
  CHECK(lattice_windowed_variance(s, u, w).value == doctest::Approx(expected).epsilon(1e-11));
  const auto wn = GridWindow({10, 10}, 1.0);
  CHECK(lattice_windowed_variance(spec_of(CovarianceFamily::nugget, 1.0, 2), 0.0, wn).value ==
        doctest::Approx(100 * 0.25));
}

TEST_CASE("mean surface area") {
  const auto se1 = spec_of(CovarianceFamily::squared_exponential, 1.0, 1);
  CHECK(mean_surface_area(se1, 0.0, 1.0) == doctest::Approx(1.0 / kPi).epsilon(1e-14));
  CHECK(mean_surface_area_display(se1, 0.0, 1.0) == doctest::Approx(0.5 / kPi).epsilon(1e-14));
  const auto g1 = spec_of(CovarianceFamily::squared_exponential, 2.0, 1, 1.0, 3.0);
  CHECK(mean_surface_area(g1, 2.0, 5.0) ==
        doctest::Approx(5.0 * oracle::rice_rate(3.0 / 4.0, 3.0, 1.0 / std::sqrt(3.0))).epsilon(1e-13));
  double prev = INFINITY;
  for (int k = 0; k <= 20; ++k) {
    const double v = mean_surface_area(g1, 1.0 + 0.5 * k, 1.0);
    CHECK(v < prev);
    CHECK(v == doctest::Approx(mean_surface_area(g1, 1.0 - 0.5 * k, 1.0)));
    prev = v;
  }
  CHECK(prev < 1e-6);
  const auto se2 = spec_of(CovarianceFamily::squared_exponential, 1.0, 2);
  CHECK(mean_surface_area(se2, 0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(mean_surface_area(spec_of(CovarianceFamily::exponential, 1.0, 2), 0.0, 1.0), NoSpectralMoment);
}
