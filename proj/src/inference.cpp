#include "ridgeboot/inference.hpp"

#include "ridgeboot/error.hpp"
#include "ridgeboot/parallel.hpp"

#include <cmath>

namespace ridgeboot {

void BootstrapConfig::validate() const {
  if (replicates < 1) throw InvalidArgument("number of bootstrap replicates must be at least 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
}

double ConfidenceRegion::statistic(const Vector& gamma) const {
  if (gamma.size() != center.size()) {
    throw DimensionError("region has dimension " + std::to_string(center.size()) + ", got " +
                         std::to_string(gamma.size()));
  }
  return ((center - gamma).cwiseAbs().array() / scale.array()).maxCoeff();
}

WildBootstrap::WildBootstrap(const ModelFrame& frame, const ImprovedFit& fit,
                             std::shared_ptr<const Matrix> gram)
    : frame_(frame), fit_(fit), fitted_(frame.design() * fit.theta_hat), gram_(std::move(gram)) {
  if (fit.theta_hat.size() != frame.p() || fit.tau_hat.size() != frame.p1() ||
      fit.weights.size() != frame.svd().rank()) {
    throw DimensionError("fit does not belong to this model frame");
  }
  if (!gram_) {
    gram_ = std::make_shared<const Matrix>(weighted_gram(frame.svd(), fit.weights));
  } else if (gram_->rows() != frame.p() || gram_->cols() != frame.p()) {
    throw DimensionError("Gram matrix must be p x p");
  }
}

Vector wild_refit(const ModelFrame& frame, const ImprovedFit& fit, const Vector& fitted,
                  const Vector& noise, IndexSet& selected) {
  const ThinSvd& svd = frame.svd();
  const Vector proj = svd.left.transpose() * (fitted + noise);
  Vector tilde = svd.right * fit.weights.cwiseProduct(proj);
  if (!svd.full_column_rank()) tilde += fit.theta_perp_hat;
  selected = threshold_select(tilde, fit.hyper.threshold);
  return restrict_to(tilde, selected);
}

Vector WildBootstrap::scales_for(const IndexSet& selected) const {
  if (selected == fit_.selected) return fit_.tau_hat;
  return scale_factors_from_gram(frame_.combination(), *gram_, selected, frame_.n());
}

double WildBootstrap::replicate(Stream& stream) const {
  const Vector noise = normal(stream, 0.0, std::sqrt(fit_.sigma2_hat), frame_.n());
  IndexSet selected;
  const Vector theta = wild_refit(frame_, fit_, fitted_, noise, selected);
  Vector gamma = Vector::Zero(frame_.p1());
  for (Eigen::Index j : selected) gamma.noalias() += theta(j) * frame_.combination().col(j);
  const Vector tau = scales_for(selected);
  return ((gamma - fit_.gamma_hat).cwiseAbs().array() / tau.array()).maxCoeff();
}

double wild_replicate(const ModelFrame& frame, const ImprovedFit& fit, Stream& stream) {
  return WildBootstrap(frame, fit).replicate(stream);
}

BootstrapDraws wild_draws(const ModelFrame& frame, const ImprovedFit& fit,
                          const BootstrapConfig& cfg, std::shared_ptr<const Matrix> gram) {
  cfg.validate();
  const WildBootstrap boot(frame, fit, std::move(gram));
  BootstrapDraws draws;
  draws.stats.resize(static_cast<std::size_t>(cfg.replicates));
  parallel_for(draws.stats.size(), cfg.threads, [&](std::size_t b) {
    Stream stream(cfg.seed, b);
    draws.stats[b] = boot.replicate(stream);
  });
  draws.quantile = sample_quantile(draws.stats, 1.0 - cfg.alpha);
  return draws;
}

ConfidenceRegion region_from_draws(const ImprovedFit& fit, const BootstrapDraws& draws,
                                   double alpha) {
  return {fit.gamma_hat, fit.tau_hat, sample_quantile(draws.stats, 1.0 - alpha), 1.0 - alpha};
}

std::pair<ConfidenceRegion, BootstrapDraws> confidence_region(const ModelFrame& frame,
                                                              const ImprovedFit& fit,
                                                              const BootstrapConfig& cfg) {
  BootstrapDraws draws = wild_draws(frame, fit, cfg);
  ConfidenceRegion region{fit.gamma_hat, fit.tau_hat, draws.quantile, 1.0 - cfg.alpha};
  return {std::move(region), std::move(draws)};
}

TestResult test_from_draws(const ImprovedFit& fit, const Vector& gamma0,
                           const BootstrapDraws& draws, double alpha) {
  const ConfidenceRegion region = region_from_draws(fit, draws, alpha);
  TestResult out;
  out.statistic = region.statistic(gamma0);
  out.critical = region.radius;
  out.reject = out.statistic > out.critical;
  out.level = alpha;
  return out;
}

TestResult hypothesis_test(const ModelFrame& frame, const ImprovedFit& fit, const Vector& gamma0,
                           const BootstrapConfig& cfg) {
  if (gamma0.size() != frame.p1()) {
    throw DimensionError("gamma0 has length " + std::to_string(gamma0.size()) + ", expected " +
                         std::to_string(frame.p1()));
  }
  return test_from_draws(fit, gamma0, wild_draws(frame, fit, cfg), cfg.alpha);
}

SampleCdf h_oracle(const ThinSvd& svd, const Matrix& loadings, const Vector& tau, double rho,
                   double sigma, int draws, Stream& stream) {
  if (draws < 1) throw InvalidArgument("h_oracle: draws must be positive");
  if (!(sigma > 0.0)) throw InvalidArgument("h_oracle: sigma must be positive");
  if (loadings.cols() != svd.rank() || loadings.rows() != tau.size() || loadings.rows() == 0) {
    throw DimensionError("h_oracle: loadings must be |M| x r with one scale per row");
  }
  const Matrix weighted = loadings * loading_weights(svd, rho).asDiagonal();
  std::vector<double> values(static_cast<std::size_t>(draws));
  for (auto& v : values) {
    const Vector xi = normal(stream, 0.0, sigma, svd.rank());
    v = ((weighted * xi).cwiseAbs().array() / tau.array()).maxCoeff();
  }
  return SampleCdf(std::move(values));
}

}  // namespace ridgeboot
