#pragma once

#include "ridgeboot/estimator.hpp"
#include "ridgeboot/rng.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ridgeboot {

enum class ErrorLaw { Normal, Laplace };

/// Generator recipe for M and beta: `LowDim` for p < n designs (tau split
/// 50, block norms 2/4/6, 16-entry beta), `HighDim` for p > n (tau split 6,
/// block norms 2/1, 6-entry beta).
enum class Regime { LowDim, HighDim };

/// Which parameter the linear combinations are measured against.
enum class Target { Theta, Beta };

enum class Scale { Desk, Full };

std::string to_string(ErrorLaw law);
std::string to_string(Regime regime);
std::string to_string(Target target);

struct SimCase {
  int id = 1;
  Eigen::Index n = 300;
  Eigen::Index p = 100;
  Eigen::Index p1 = 160;
  Eigen::Index m_count = 60;   // rows of M that load on the signal block
  Eigen::Index tau_split = 50;
  ErrorLaw law = ErrorLaw::Normal;
  Regime regime = Regime::LowDim;
  Target target = Target::Theta;
  std::optional<Hyperparams> hyper;  // empty: 5-fold CV on the first replication
  int reps = 300;
  int replicates = 200;  // B
  Eigen::Index xf_rows = 10;
  double alpha = 0.05;
  double noise_scale = 1.0;  // multiplies the error sd; 0 gives noiseless data
  std::uint64_t seed = 20240601;
  int threads = 0;
  std::vector<double> deltas;  // power sweep; empty skips it

  void validate() const;
  double error_variance() const { return 4.0 * noise_scale * noise_scale; }
};

/// One of the six cases of the reference study. Desk scale shrinks n, p,
/// p1, |M| and the replication counts so a case runs in minutes.
SimCase reference_case(int id, Scale scale);

struct PowerPoint {
  double delta = 0.0;
  double rejection_rate = 0.0;
};

struct SimReport {
  SimCase config;
  Hyperparams hyper;   // as used (CV choice when the case asked for CV)
  double lambda_r = 0.0;
  KDiagnostics k;
  std::size_t true_support_size = 0;

  double misspecification = 0.0;  // P(selected != true support)
  double mean_gamma_error = 0.0;  // mean of max_i |gamma_hat_i - gamma_i| for the target
  double mean_sigma2_error = 0.0;
  double coverage = 0.0;          // confidence region, target parameter
  double coverage_theta = 0.0;
  double coverage_beta = 0.0;
  double prediction_coverage = 0.0;
  double mean_confidence_radius = 0.0;
  double mean_prediction_radius = 0.0;
  std::vector<PowerPoint> power;

  /// Binomial Monte-Carlo standard error of a coverage proportion.
  double standard_error(double proportion) const;
};

/// Rows i.i.d. N(0, Sigma), Sigma with 2.0 on the diagonal and 0.5 off it.
Matrix gen_design(Stream& stream, Eigen::Index n, Eigen::Index p);

/// Block-structured combination matrix; rows at or after `m_count` are zero
/// on the first `tau_split` columns.
Matrix gen_combination(Stream& stream, Eigen::Index p, Eigen::Index p1, Eigen::Index m_count,
                       Eigen::Index tau_split, Regime regime);

Vector gen_beta(Regime regime, Eigen::Index p);

/// Draws `count` errors of the given law with variance 4 * scale^2.
Vector gen_errors(Stream& stream, ErrorLaw law, double noise_scale, Eigen::Index count);

/// Fixed design, combination matrix and coefficients of a case.
struct SimInstance {
  Matrix design;
  Matrix combination;
  Vector beta;
  Vector theta;
  ThinSvd svd;
};

SimInstance make_instance(const SimCase& c);

SimReport run_case(const SimCase& c);

/// Rejection rate of the level-alpha test of gamma = gamma_true + delta * 1.
std::vector<PowerPoint> power_sweep(const SimCase& c, const std::vector<double>& deltas);

/// ||gamma_hat - gamma||_2 along a ridge grid for the four ridge variants,
/// on the first replication of a case.
struct PathPoint {
  double rho = 0.0;
  double ridge = 0.0;
  double thresholded_ridge = 0.0;
  double debiased_ridge = 0.0;
  double debiased_thresholded = 0.0;
};

std::vector<PathPoint> ridge_path(const SimCase& c, const std::vector<double>& rho_grid,
                                  double threshold);

}  // namespace ridgeboot
