#include "exset/inference.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "exset/error.hpp"
#include "exset/geometry.hpp"

namespace exset {

EstimatorConfig EstimatorConfig::for_window(const GridWindow& window) {
  const auto side = *std::min_element(window.dims.begin(), window.dims.end());
  EstimatorConfig cfg;
  cfg.block_side = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(side))));
  return cfg;
}

std::string_view to_string(Decision d) {
  return d == Decision::reject ? "reject" : "fail_to_reject";
}

CovMatrix estimate_cov_matrix(const FieldRealization& field, std::span<const double> levels,
                              const EstimatorConfig& cfg) {
  if (levels.empty()) throw Error("level vector is empty");
  for (std::size_t i = 1; i < levels.size(); ++i)
    if (!(levels[i] > levels[i - 1])) throw Error("levels must be strictly increasing");
  if (cfg.block_side == 0) throw ConfigError("block side must be positive");
  if (cfg.min_blocks < 8) throw ConfigError("min_blocks must be at least 8");

  const auto& w = field.window();
  const std::size_t d = w.dims.size();
  const std::size_t b = cfg.block_side;
  std::vector<std::size_t> per_axis(d);
  std::size_t n_blocks = 1;
  for (std::size_t k = 0; k < d; ++k) {
    per_axis[k] = w.dims[k] / b;
    n_blocks *= per_axis[k];
  }
  if (n_blocks < cfg.min_blocks) {
    throw Error("only " + std::to_string(n_blocks) + " blocks of side " + std::to_string(b) +
                " fit the window; at least " + std::to_string(cfg.min_blocks) + " are required");
  }

  // hist[block * (r + 1) + j]: sites of the block with exactly j levels <= value.
  const std::size_t r = levels.size();
  std::vector<std::uint64_t> hist(n_blocks * (r + 1), 0);
  const auto& values = field.values();
  std::size_t idx[3] = {0, 0, 0};
  for (std::size_t flat = 0; flat < values.size(); ++flat) {
    bool inside = true;
    std::size_t block = 0;
    for (std::size_t k = 0; k < d; ++k) {
      const std::size_t bk = idx[k] / b;
      if (bk >= per_axis[k]) {
        inside = false;
        break;
      }
      block = block * per_axis[k] + bk;
    }
    if (inside) {
      const auto j = static_cast<std::size_t>(
          std::upper_bound(levels.begin(), levels.end(), values[flat]) - levels.begin());
      ++hist[block * (r + 1) + j];
    }
    for (std::size_t k = d; k-- > 0;) {
      if (++idx[k] < w.dims[k]) break;
      idx[k] = 0;
    }
  }

  const double cell = std::pow(w.spacing, static_cast<double>(d));
  const double block_volume = cell * std::pow(static_cast<double>(b), static_cast<double>(d));
  const auto R = static_cast<Eigen::Index>(r);
  Eigen::MatrixXd vols(static_cast<Eigen::Index>(n_blocks), R);
  for (std::size_t blk = 0; blk < n_blocks; ++blk) {
    std::uint64_t acc = 0;
    for (std::size_t l = r; l-- > 0;) {
      acc += hist[blk * (r + 1) + l + 1];
      vols(static_cast<Eigen::Index>(blk), static_cast<Eigen::Index>(l)) =
          cell * static_cast<double>(acc);
    }
  }
  const Eigen::RowVectorXd mean = vols.colwise().mean();
  const Eigen::MatrixXd y = (vols.rowwise() - mean) / std::sqrt(block_volume);
  CovMatrix out;
  out.levels.assign(levels.begin(), levels.end());
  out.entries = (y.transpose() * y) / static_cast<double>(n_blocks - 1);
  for (Eigen::Index l = 0; l < R; ++l) {
    if (!(out.entries(l, l) > 0.0)) {
      std::ostringstream os;
      os << "level " << levels[static_cast<std::size_t>(l)]
         << " has no variation across blocks; covariance estimate is singular";
      throw SingularMatrix(os.str());
    }
  }
  return out;
}

double condition_number(const Eigen::MatrixXd& m) {
  const auto ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues();
  const double lo = ev.minCoeff(), hi = ev.maxCoeff();
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

double gaussianity_statistic(std::span<const double> volumes, std::span<const double> tail_probs,
                             const Eigen::MatrixXd& c_hat, double window_volume) {
  const auto r = static_cast<Eigen::Index>(volumes.size());
  if (tail_probs.size() != volumes.size() || c_hat.rows() != r || c_hat.cols() != r) {
    throw DimensionMismatch("statistic inputs disagree in length");
  }
  if (!(window_volume > 0.0)) throw Error("window volume must be positive");
  const double cond = condition_number(c_hat);
  if (!(cond < kMaxConditionNumber)) {
    std::ostringstream os;
    os << "covariance estimate is singular or ill-conditioned (condition number " << cond << ")";
    throw SingularMatrix(os.str());
  }
  Eigen::VectorXd diff(r);
  for (Eigen::Index l = 0; l < r; ++l)
    diff(l) = volumes[static_cast<std::size_t>(l)] - tail_probs[static_cast<std::size_t>(l)] * window_volume;
  const Eigen::VectorXd solved = c_hat.ldlt().solve(diff);
  return std::max(0.0, diff.dot(solved) / window_volume);
}

double chi_square_p_value(double t, int df) {
  if (df < 1) throw Error("degrees of freedom must be positive");
  if (t <= 0.0) return 1.0;
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared_distribution<double>(df), t));
}

double chi_square_critical_value(int df, double alpha) {
  if (df < 1) throw Error("degrees of freedom must be positive");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("significance level must lie in (0, 1]");
  if (alpha == 1.0) return 0.0;
  return boost::math::quantile(
      boost::math::complement(boost::math::chi_squared_distribution<double>(df), alpha));
}

std::vector<double> default_test_levels(const GaussianFieldSpec& null_spec, int r) {
  if (r < 1) throw ConfigError("need at least one level");
  std::vector<double> levels;
  // Increasing levels correspond to decreasing tail probabilities.
  for (int l = r; l >= 1; --l) levels.push_back(tail_quantile(null_spec, static_cast<double>(l) / (r + 1)));
  return levels;
}

TestReport gaussianity_test(const FieldRealization& field, const GaussianFieldSpec& null_spec,
                            std::span<const double> levels, double alpha,
                            const EstimatorConfig& cfg) {
  if (field.dim() != null_spec.dim()) throw DimensionMismatch("field and null model dimensions differ");
  TestReport rep;
  rep.alpha = alpha;
  rep.critical_value = chi_square_critical_value(static_cast<int>(levels.size()), alpha);
  rep.levels.assign(levels.begin(), levels.end());
  for (double u : levels) {
    const double psi = tail_prob(null_spec, u);
    if (psi < kMinTailProb || psi > 1.0 - kMinTailProb) {
      std::ostringstream os;
      os << "level " << u << " has null tail probability " << psi << " outside [1e-4, 1 - 1e-4]";
      throw ConfigError(os.str());
    }
    rep.tail_probs.push_back(psi);
  }
  for (const auto& m : excursion_volumes(field, levels)) rep.volumes.push_back(m.volume);
  rep.window_volume = field.window().volume();
  const auto c_hat = estimate_cov_matrix(field, levels, cfg);
  rep.c_hat = c_hat.entries;
  rep.condition_number = condition_number(rep.c_hat);
  rep.statistic = gaussianity_statistic(rep.volumes, rep.tail_probs, rep.c_hat, rep.window_volume);
  rep.df = static_cast<int>(levels.size());
  rep.p_value = chi_square_p_value(rep.statistic, rep.df);
  rep.decision = rep.statistic > rep.critical_value ? Decision::reject : Decision::fail_to_reject;
  rep.block_side = cfg.block_side;
  std::size_t blocks = 1;
  for (auto n : field.window().dims) blocks *= n / cfg.block_side;
  rep.blocks = blocks;
  return rep;
}

nlohmann::json to_json(const TestReport& report) {
  nlohmann::json c = nlohmann::json::array();
  for (Eigen::Index i = 0; i < report.c_hat.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < report.c_hat.cols(); ++j) row.push_back(report.c_hat(i, j));
    c.push_back(row);
  }
  return {
      {"schema", kTestReportSchema},
      {"levels", report.levels},
      {"volumes", report.volumes},
      {"tail_probs", report.tail_probs},
      {"window_volume", report.window_volume},
      {"c_hat", c},
      {"condition_number", report.condition_number},
      {"statistic", report.statistic},
      {"df", report.df},
      {"p_value", report.p_value},
      {"alpha", report.alpha},
      {"critical_value", report.critical_value},
      {"decision", std::string(to_string(report.decision))},
      {"block_side", report.block_side},
      {"blocks", report.blocks},
  };
}

}  // namespace exset
