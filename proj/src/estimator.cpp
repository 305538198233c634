#include "ridgeboot/estimator.hpp"

#include "ridgeboot/error.hpp"

#include <cmath>

namespace ridgeboot {
namespace {

void check_length(const char* what, Eigen::Index expected, Eigen::Index found) {
  if (expected != found) {
    throw DimensionError(std::string(what) + ": expected length " + std::to_string(expected) +
                         ", found " + std::to_string(found));
  }
}

void check_rho(const ThinSvd& svd, double rho) {
  if (!std::isfinite(rho) || rho < 0.0) {
    throw InvalidArgument("ridge parameter must be finite and nonnegative");
  }
  if (rho == 0.0 && !svd.full_column_rank()) {
    throw NumericalError("rho = 0 requires a full column rank design (rank " +
                         std::to_string(svd.rank()) + " < p = " + std::to_string(svd.cols()) + ")");
  }
}

}  // namespace

Vector ridge_estimate(const ModelFrame& frame, double rho) {
  const ThinSvd& svd = frame.svd();
  check_rho(svd, rho);
  const Vector& lam = svd.singular;
  Vector proj = svd.left.transpose() * frame.response();
  Vector gain = lam.array() / (lam.array().square() + rho);
  return svd.right * gain.cwiseProduct(proj);
}

Vector debias(const ModelFrame& frame, const Vector& theta_star, double rho) {
  const ThinSvd& svd = frame.svd();
  check_length("debias", svd.cols(), theta_star.size());
  if (rho == 0.0) return theta_star;
  const Vector& lam = svd.singular;
  Vector coef = svd.right.transpose() * theta_star;
  coef.array() /= lam.array().square() + rho;
  return theta_star + rho * (svd.right * coef);
}

Vector loading_weights(const ThinSvd& svd, double rho) {
  const auto lam = svd.singular.array();
  const auto denom = lam.square() + rho;
  return lam / denom + rho * lam / denom.square();
}

Vector debiased_estimate(const ThinSvd& svd, const Vector& response, double rho) {
  check_length("debiased_estimate", svd.rows(), response.size());
  check_rho(svd, rho);
  Vector proj = svd.left.transpose() * response;
  return svd.right * loading_weights(svd, rho).cwiseProduct(proj);
}

double expansion_check(const ModelFrame& frame, const Vector& beta, const Vector& noise,
                       double rho) {
  const ThinSvd& svd = frame.svd();
  check_length("expansion_check beta", svd.cols(), beta.size());
  check_length("expansion_check noise", svd.rows(), noise.size());
  ModelFrame synthetic = frame.with_response(frame.design() * beta + noise);
  const Vector tilde = debias(synthetic, ridge_estimate(synthetic, rho), rho);
  const auto [zeta, theta] = row_space_params(svd, beta);

  const auto lam = svd.singular.array();
  const Eigen::ArrayXd denom = lam.square() + rho;
  Vector bias_coef = -(rho * rho) * zeta.array() / denom.square();
  Vector noise_gain = lam / denom + rho * lam / denom.square();
  Vector noise_coef = noise_gain.cwiseProduct(svd.left.transpose() * noise);
  const Vector expansion = svd.right * (bias_coef + noise_coef);
  return ((tilde - theta) - expansion).lpNorm<Eigen::Infinity>();
}

IndexSet threshold_select(const Vector& theta, double threshold) {
  if (!(threshold >= 0.0)) throw InvalidArgument("threshold must be nonnegative");
  IndexSet out;
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    if (std::abs(theta(i)) > threshold) out.push_back(i);
  }
  return out;
}

Vector restrict_to(const Vector& theta, const IndexSet& selected) {
  Vector out = Vector::Zero(theta.size());
  for (Eigen::Index i : selected) out(i) = theta(i);
  return out;
}

Matrix combination_loadings(const ThinSvd& svd, const Matrix& combination,
                            const IndexSet& selected) {
  if (combination.cols() != svd.cols()) {
    throw DimensionError("combination matrix has " + std::to_string(combination.cols()) +
                         " columns, expected " + std::to_string(svd.cols()));
  }
  Matrix out = Matrix::Zero(combination.rows(), svd.rank());
  for (Eigen::Index j : selected) {
    out.noalias() += combination.col(j) * svd.right.row(j);
  }
  return out;
}

IndexSet active_combinations(const Matrix& loadings) {
  IndexSet out;
  for (Eigen::Index i = 0; i < loadings.rows(); ++i) {
    if (loadings.row(i).squaredNorm() > 0.0) out.push_back(i);
  }
  return out;
}

Vector scale_factors(const Matrix& loadings, const Vector& weights, Eigen::Index n) {
  check_length("scale_factors", loadings.cols(), weights.size());
  const Vector w2 = weights.array().square();
  Vector out = (loadings.array().square().matrix() * w2).array() + 1.0 / static_cast<double>(n);
  return out.cwiseSqrt();
}

Matrix weighted_gram(const ThinSvd& svd, const Vector& weights) {
  check_length("weighted_gram", svd.rank(), weights.size());
  const Matrix qw = svd.right * weights.asDiagonal();
  Matrix gram = Matrix::Zero(svd.cols(), svd.cols());
  gram.selfadjointView<Eigen::Lower>().rankUpdate(qw);
  return gram.selfadjointView<Eigen::Lower>();
}

Vector scale_factors_from_gram(const Matrix& combination, const Matrix& gram,
                               const IndexSet& selected, Eigen::Index n) {
  const Matrix sub = combination(Eigen::all, selected);
  const Matrix gs = gram(selected, selected);
  Vector out = ((sub * gs).cwiseProduct(sub)).rowwise().sum().array() + 1.0 / static_cast<double>(n);
  return out.cwiseSqrt();
}

ImprovedFit improved_fit(const ModelFrame& frame, const Hyperparams& hyper) {
  hyper.validate();
  const ThinSvd& svd = frame.svd();
  ImprovedFit fit;
  fit.hyper = hyper;
  fit.theta_star = ridge_estimate(frame, hyper.rho);
  fit.theta_tilde = debias(frame, fit.theta_star, hyper.rho);
  fit.selected = threshold_select(fit.theta_tilde, hyper.threshold);
  fit.theta_hat = restrict_to(fit.theta_tilde, fit.selected);
  fit.gamma_hat = frame.combination() * fit.theta_hat;

  const auto n = frame.n();
  fit.residuals_raw = frame.response() - frame.design() * fit.theta_hat;
  fit.sigma2_hat = fit.residuals_raw.squaredNorm() / static_cast<double>(n);
  fit.residuals_centered = fit.residuals_raw.array() - fit.residuals_raw.mean();

  fit.weights = loading_weights(svd, hyper.rho);
  fit.tau_hat =
      scale_factors(combination_loadings(svd, frame.combination(), fit.selected), fit.weights, n);
  fit.theta_perp_hat = complement_project(svd, fit.theta_hat);
  return fit;
}

KDiagnostics k_diagnostics(const ModelFrame& frame, const Vector& beta_true,
                           const Hyperparams& hyper, const IndexSet& true_support) {
  const ThinSvd& svd = frame.svd();
  check_length("k_diagnostics", svd.cols(), beta_true.size());
  const auto [zeta, theta] = row_space_params(svd, beta_true);
  const Vector theta_perp = beta_true - theta;
  const double n = static_cast<double>(frame.n());
  const double kn = std::sqrt(n * std::log(n));

  Vector omitted = theta - restrict_to(theta, true_support);
  KDiagnostics k;
  k.k1 = kn * (frame.combination() * omitted).lpNorm<Eigen::Infinity>();
  k.k2 = svd.full_column_rank()
             ? 0.0
             : kn * (frame.combination() * theta_perp).lpNorm<Eigen::Infinity>();
  k.k3 = hyper.threshold * omitted.lpNorm<1>();
  k.k4 = std::sqrt(static_cast<double>(true_support.size())) / svd.smallest();
  return k;
}

}  // namespace ridgeboot
