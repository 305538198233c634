#include "ridgeboot/prediction.hpp"

#include "ridgeboot/error.hpp"
#include "ridgeboot/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace ridgeboot {

EmpiricalCdf::EmpiricalCdf(const Vector& residuals) {
  if (residuals.size() == 0) throw InvalidArgument("empirical CDF needs at least one residual");
  const double mean = residuals.mean();
  sorted_.reserve(static_cast<std::size_t>(residuals.size()));
  for (double r : residuals) sorted_.push_back(r - mean);
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double x) const {
  auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalCdf::draw(Stream& stream) const {
  return sorted_[static_cast<std::size_t>(stream.below(sorted_.size()))];
}

EmpiricalCdf ecdf(const ImprovedFit& fit) { return EmpiricalCdf(fit.residuals_centered); }

Vector loo_residuals(const ModelFrame& frame, const Hyperparams& hyper) {
  const Eigen::Index n = frame.n();
  if (n < 2) throw InvalidArgument("leave-one-out residuals need at least two observations");
  Vector out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Matrix x(n - 1, frame.p());
    Vector y(n - 1);
    x.topRows(i) = frame.design().topRows(i);
    x.bottomRows(n - 1 - i) = frame.design().bottomRows(n - 1 - i);
    y.head(i) = frame.response().head(i);
    y.tail(n - 1 - i) = frame.response().tail(n - 1 - i);
    const ModelFrame reduced(std::move(x), std::move(y), frame.combination(),
                             frame.svd().rank_tolerance);
    const ImprovedFit fit = improved_fit(reduced, hyper);
    out(i) = frame.response()(i) - frame.design().row(i).dot(fit.theta_hat);
  }
  return out;
}

Vector predict_point(const ImprovedFit& fit, const Matrix& xf) {
  if (xf.cols() != fit.theta_hat.size()) {
    throw DimensionError("prediction matrix has " + std::to_string(xf.cols()) +
                         " columns, expected " + std::to_string(fit.theta_hat.size()));
  }
  return xf * fit.theta_hat;
}

double PredictionRegion::statistic(const Vector& y_future) const {
  if (y_future.size() != center.size()) {
    throw DimensionError("prediction region has dimension " + std::to_string(center.size()) +
                         ", got " + std::to_string(y_future.size()));
  }
  return (y_future - center).lpNorm<Eigen::Infinity>();
}

HybridBootstrap::HybridBootstrap(const ModelFrame& frame, const ImprovedFit& fit,
                                 const Matrix& xf, const EmpiricalCdf& cdf)
    : frame_(frame), fit_(fit), xf_(xf), cdf_(cdf), fitted_(frame.design() * fit.theta_hat),
      point_(predict_point(fit, xf)) {
  if (xf.rows() < 1) throw DimensionError("prediction matrix has no rows");
  if (fit.theta_hat.size() != frame.p() || fit.weights.size() != frame.svd().rank()) {
    throw DimensionError("fit does not belong to this model frame");
  }
}

double HybridBootstrap::replicate(Stream& stream) const {
  const Vector noise = normal(stream, 0.0, std::sqrt(fit_.sigma2_hat), frame_.n());
  double worst = 0.0;
  IndexSet selected;
  const Vector theta = wild_refit(frame_, fit_, fitted_, noise, selected);
  for (Eigen::Index i = 0; i < xf_.rows(); ++i) {
    double predicted = 0.0;
    for (Eigen::Index j : selected) predicted += xf_(i, j) * theta(j);
    const double future = point_(i) + cdf_.draw(stream);
    worst = std::max(worst, std::abs(future - predicted));
  }
  return worst;
}

double hybrid_replicate(const ModelFrame& frame, const ImprovedFit& fit, const Matrix& xf,
                        const EmpiricalCdf& cdf, Stream& stream) {
  return HybridBootstrap(frame, fit, xf, cdf).replicate(stream);
}

BootstrapDraws hybrid_draws(const ModelFrame& frame, const ImprovedFit& fit, const Matrix& xf,
                            const EmpiricalCdf& cdf, const BootstrapConfig& cfg) {
  cfg.validate();
  const HybridBootstrap boot(frame, fit, xf, cdf);
  BootstrapDraws draws;
  draws.stats.resize(static_cast<std::size_t>(cfg.replicates));
  parallel_for(draws.stats.size(), cfg.threads, [&](std::size_t b) {
    Stream stream(cfg.seed, b);
    draws.stats[b] = boot.replicate(stream);
  });
  draws.quantile = sample_quantile(draws.stats, 1.0 - cfg.alpha);
  return draws;
}

std::pair<PredictionRegion, BootstrapDraws> prediction_region(const ModelFrame& frame,
                                                              const ImprovedFit& fit,
                                                              const Matrix& xf,
                                                              const EmpiricalCdf& cdf,
                                                              const BootstrapConfig& cfg) {
  BootstrapDraws draws = hybrid_draws(frame, fit, xf, cdf, cfg);
  PredictionRegion region{predict_point(fit, xf), draws.quantile, 1.0 - cfg.alpha};
  return {std::move(region), std::move(draws)};
}

std::pair<PredictionRegion, BootstrapDraws> prediction_region(const ModelFrame& frame,
                                                              const ImprovedFit& fit,
                                                              const Matrix& xf,
                                                              const BootstrapConfig& cfg) {
  return prediction_region(frame, fit, xf, ecdf(fit), cfg);
}

}  // namespace ridgeboot
