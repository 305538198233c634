#pragma once

#include "ridgeboot/model.hpp"

#include <vector>

namespace ridgeboot {

/// Sorted, duplicate-free coordinate indices (0-based).
using IndexSet = std::vector<Eigen::Index>;

/// Debiased and thresholded ridge fit together with everything the
/// bootstrap procedures reuse.
struct ImprovedFit {
  Vector theta_star;       // plain ridge estimate
  Vector theta_tilde;      // debiased ridge estimate
  IndexSet selected;       // {i : |theta_tilde_i| > b}
  Vector theta_hat;        // theta_tilde restricted to `selected`
  Vector gamma_hat;        // M * theta_hat
  double sigma2_hat = 0.0; // mean squared residual, divisor n
  Vector tau_hat;          // per-combination scale, floor 1/sqrt(n)
  Vector theta_perp_hat;   // (I - QQ^T) theta_hat
  Vector residuals_raw;    // y - X theta_hat
  Vector residuals_centered;
  Vector weights;          // lambda/(lambda^2+rho) + rho*lambda/(lambda^2+rho)^2
  Hyperparams hyper;
};

/// (X^T X + rho I)^{-1} X^T y evaluated through the SVD. rho = 0 is only
/// accepted for full column rank designs.
Vector ridge_estimate(const ModelFrame& frame, double rho);

/// theta_star + rho * Q (Lambda^2 + rho)^{-1} Q^T theta_star.
Vector debias(const ModelFrame& frame, const Vector& theta_star, double rho);

/// Per-singular-direction gain of the debiased estimator:
/// w_k = lambda_k/(lambda_k^2+rho) + rho*lambda_k/(lambda_k^2+rho)^2.
Vector loading_weights(const ThinSvd& svd, double rho);

/// Debiased estimate straight from a response vector, Q diag(w) P^T y.
/// Equal to debias(ridge_estimate(...)) but without the intermediate.
Vector debiased_estimate(const ThinSvd& svd, const Vector& response, double rho);

/// Sup-norm gap between the debiased estimation error and its closed-form
/// bias + noise expansion. A check for synthetic data where beta and the
/// noise are known.
double expansion_check(const ModelFrame& frame, const Vector& beta, const Vector& noise,
                       double rho);

/// Indices with |theta_i| > b (strict).
IndexSet threshold_select(const Vector& theta, double threshold);

/// Zeroes every coordinate outside `selected`.
Vector restrict_to(const Vector& theta, const IndexSet& selected);

/// c_ik = sum_{j in selected} m_ij q_jk, a p1 x r matrix.
Matrix combination_loadings(const ThinSvd& svd, const Matrix& combination,
                            const IndexSet& selected);

/// Rows of the loading matrix with a nonzero sum of squares.
IndexSet active_combinations(const Matrix& loadings);

/// tau_i = sqrt(sum_k c_ik^2 w_k^2 + 1/n).
Vector scale_factors(const Matrix& loadings, const Vector& weights, Eigen::Index n);

/// Q diag(w)^2 Q^T, the p x p Gram matrix behind the scale factors. Lets
/// scale_factors_from_gram() handle any selection in O(p1 |S|^2).
Matrix weighted_gram(const ThinSvd& svd, const Vector& weights);

/// Same values as scale_factors(combination_loadings(...)) via the Gram matrix.
Vector scale_factors_from_gram(const Matrix& combination, const Matrix& gram,
                               const IndexSet& selected, Eigen::Index n);

ImprovedFit improved_fit(const ModelFrame& frame, const Hyperparams& hyper);

struct KDiagnostics {
  double k1 = 0.0;  // omitted small coordinates seen through M, scaled by sqrt(n log n)
  double k2 = 0.0;  // null-space part of beta seen through M, same scaling
  double k3 = 0.0;  // b * l1 norm of omitted coordinates
  double k4 = 0.0;  // sqrt(|support|) / lambda_r
};

/// Finite-sample size of the bias terms that vanish asymptotically, for a
/// known beta. `true_support` is the threshold set of the true theta.
KDiagnostics k_diagnostics(const ModelFrame& frame, const Vector& beta_true,
                           const Hyperparams& hyper, const IndexSet& true_support);

}  // namespace ridgeboot
