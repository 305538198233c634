#pragma once

#include "ridgeboot/inference.hpp"

#include <span>

namespace ridgeboot {

/// Empirical distribution of centered residuals. Resampling from it is the
/// nonparametric half of the hybrid bootstrap.
class EmpiricalCdf {
 public:
  /// Centers `residuals` (subtracting their mean) and sorts them.
  explicit EmpiricalCdf(const Vector& residuals);

  double operator()(double x) const;
  double draw(Stream& stream) const;

  const std::vector<double>& sorted() const { return sorted_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(sorted_.size()); }

 private:
  std::vector<double> sorted_;
};

EmpiricalCdf ecdf(const ImprovedFit& fit);

/// Leave-one-out predictive residuals y_i - x_i^T theta_hat(-i), one refit
/// (with its own SVD) per observation.
Vector loo_residuals(const ModelFrame& frame, const Hyperparams& hyper);

/// X_f theta_hat.
Vector predict_point(const ImprovedFit& fit, const Matrix& xf);

struct PredictionRegion {
  Vector center;
  double radius = 0.0;
  double level = 0.0;

  double statistic(const Vector& y_future) const;
  bool contains(const Vector& y_future) const { return statistic(y_future) <= radius; }
  Vector lower() const { return center.array() - radius; }
  Vector upper() const { return center.array() + radius; }
};

/// Hybrid bootstrap: Gaussian wild noise reproduces the estimation error,
/// residual resampling reproduces the future noise.
class HybridBootstrap {
 public:
  HybridBootstrap(const ModelFrame& frame, const ImprovedFit& fit, const Matrix& xf,
                  const EmpiricalCdf& cdf);

  /// Draws n Gaussian errors, then p1 resampled residuals, from `stream`.
  double replicate(Stream& stream) const;

 private:
  const ModelFrame& frame_;
  const ImprovedFit& fit_;
  const Matrix& xf_;
  const EmpiricalCdf& cdf_;
  Vector fitted_;
  Vector point_;
};

double hybrid_replicate(const ModelFrame& frame, const ImprovedFit& fit, const Matrix& xf,
                        const EmpiricalCdf& cdf, Stream& stream);

BootstrapDraws hybrid_draws(const ModelFrame& frame, const ImprovedFit& fit, const Matrix& xf,
                            const EmpiricalCdf& cdf, const BootstrapConfig& cfg);

/// Region from the fitted residuals.
std::pair<PredictionRegion, BootstrapDraws> prediction_region(const ModelFrame& frame,
                                                              const ImprovedFit& fit,
                                                              const Matrix& xf,
                                                              const BootstrapConfig& cfg);

/// Region resampling from an explicit residual distribution (e.g. leave-one-out).
std::pair<PredictionRegion, BootstrapDraws> prediction_region(const ModelFrame& frame,
                                                              const ImprovedFit& fit,
                                                              const Matrix& xf,
                                                              const EmpiricalCdf& cdf,
                                                              const BootstrapConfig& cfg);

}  // namespace ridgeboot
