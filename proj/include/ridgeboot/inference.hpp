#pragma once

#include "ridgeboot/estimator.hpp"
#include "ridgeboot/rng.hpp"
#include "ridgeboot/stats.hpp"

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

namespace ridgeboot {

struct BootstrapConfig {
  int replicates = 500;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  int threads = 0;  // <= 0: all hardware threads

  void validate() const;
};

/// Replicate max-statistics E*_1..E*_B (in replicate order) and their
/// 1 - alpha sample quantile.
struct BootstrapDraws {
  std::vector<double> stats;
  double quantile = 0.0;
};

/// Simultaneous region {gamma : max_i |center_i - gamma_i| / scale_i <= radius}.
struct ConfidenceRegion {
  Vector center;
  Vector scale;
  double radius = 0.0;
  double level = 0.0;

  double statistic(const Vector& gamma) const;
  bool contains(const Vector& gamma) const { return statistic(gamma) <= radius; }
  Vector lower() const { return center - radius * scale; }
  Vector upper() const { return center + radius * scale; }
};

struct TestResult {
  double statistic = 0.0;
  double critical = 0.0;
  bool reject = false;
  double level = 0.0;
};

/// Debiased, thresholded estimate refitted on y* = fitted + noise, where
/// `fitted` is X theta_hat. Writes the selection into `selected`.
Vector wild_refit(const ModelFrame& frame, const ImprovedFit& fit, const Vector& fitted,
                  const Vector& noise, IndexSet& selected);

/// Gaussian wild bootstrap for the debiased, thresholded ridge fit. Holds
/// the quantities every replicate shares (fitted mean, weights, Gram
/// matrix); replicate() is const and safe to call concurrently.
class WildBootstrap {
 public:
  /// `gram` may be shared between fits with the same design and rho;
  /// computed from the frame when null.
  WildBootstrap(const ModelFrame& frame, const ImprovedFit& fit,
                std::shared_ptr<const Matrix> gram = nullptr);

  /// Max-statistic of one replicate.
  double replicate(Stream& stream) const;

  /// Scale factors for an arbitrary selection; reuses the fitted scales when
  /// the selection matches the original one.
  Vector scales_for(const IndexSet& selected) const;

 private:
  const ModelFrame& frame_;
  const ImprovedFit& fit_;
  Vector fitted_;
  std::shared_ptr<const Matrix> gram_;
};

double wild_replicate(const ModelFrame& frame, const ImprovedFit& fit, Stream& stream);

/// B wild replicates, replicate b on stream (cfg.seed, b).
BootstrapDraws wild_draws(const ModelFrame& frame, const ImprovedFit& fit,
                          const BootstrapConfig& cfg,
                          std::shared_ptr<const Matrix> gram = nullptr);

std::pair<ConfidenceRegion, BootstrapDraws> confidence_region(const ModelFrame& frame,
                                                              const ImprovedFit& fit,
                                                              const BootstrapConfig& cfg);

/// Region from draws already computed for `fit`.
ConfidenceRegion region_from_draws(const ImprovedFit& fit, const BootstrapDraws& draws,
                                   double alpha);

TestResult hypothesis_test(const ModelFrame& frame, const ImprovedFit& fit, const Vector& gamma0,
                           const BootstrapConfig& cfg);

/// Test against precomputed draws; rejects iff the statistic exceeds the
/// quantile.
TestResult test_from_draws(const ImprovedFit& fit, const Vector& gamma0,
                           const BootstrapDraws& draws, double alpha);

/// Monte-Carlo sample of the Gaussian max-statistic law
/// max_i |sum_k c_ik w_k xi_k| / tau_i with xi_k ~ N(0, sigma^2).
/// `loadings` holds the rows c_i of the active combinations only.
SampleCdf h_oracle(const ThinSvd& svd, const Matrix& loadings, const Vector& tau, double rho,
                   double sigma, int draws, Stream& stream);

}  // namespace ridgeboot
