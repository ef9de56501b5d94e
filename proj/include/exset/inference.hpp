#pragma once

// Asymptotic Gaussianity test built on the multivariate excursion-volume CLT.

#include <Eigen/Dense>

#include <span>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "exset/asymptotics.hpp"
#include "exset/simulate.hpp"

namespace exset {

/// Non-overlapping block (subsampling) estimator settings.
struct EstimatorConfig {
  std::size_t block_side = 16;
  std::size_t min_blocks = 8;

  /// floor(sqrt(smallest grid side)).
  static EstimatorConfig for_window(const GridWindow& window);
};

enum class Decision { reject, fail_to_reject };
std::string_view to_string(Decision d);

struct TestReport {
  std::vector<double> levels;
  std::vector<double> volumes;
  std::vector<double> tail_probs;
  Eigen::MatrixXd c_hat;
  double window_volume = 0.0;
  double statistic = 0.0;
  int df = 0;
  double p_value = 1.0;
  double alpha = 0.05;
  double critical_value = 0.0;
  Decision decision = Decision::fail_to_reject;
  double condition_number = 0.0;
  std::size_t block_side = 0;
  std::size_t blocks = 0;
};

inline constexpr double kMaxConditionNumber = 1e12;
inline constexpr double kMinTailProb = 1e-4;
inline constexpr const char* kTestReportSchema = "exset.test_report/1";

/// Per block b: Y_b = (vol_b(u) - mean over blocks) / sqrt(block volume);
/// returns the empirical covariance of {Y_b} (divisor B - 1). Throws when
/// fewer than min_blocks fit or a level has no variation across blocks.
CovMatrix estimate_cov_matrix(const FieldRealization& field, std::span<const double> levels,
                              const EstimatorConfig& cfg);

/// T_n = (S - Psi V)^T C^-1 (S - Psi V) / V. Throws SingularMatrix when C is
/// not positive definite or its condition number reaches 1e12.
double gaussianity_statistic(std::span<const double> volumes, std::span<const double> tail_probs,
                             const Eigen::MatrixXd& c_hat, double window_volume);

/// Condition number (largest / smallest eigenvalue) of a symmetric matrix.
double condition_number(const Eigen::MatrixXd& m);

/// 1 - F_{chi^2_df}(t).
double chi_square_p_value(double t, int df);
/// (1 - alpha) quantile of chi^2_df; alpha = 1 gives 0.
double chi_square_critical_value(int df, double alpha);

/// r levels at equally spaced null tail probabilities l / (r + 1).
std::vector<double> default_test_levels(const GaussianFieldSpec& null_spec, int r = 3);

TestReport gaussianity_test(const FieldRealization& field, const GaussianFieldSpec& null_spec,
                            std::span<const double> levels, double alpha,
                            const EstimatorConfig& cfg);

nlohmann::json to_json(const TestReport& report);

}  // namespace exset
