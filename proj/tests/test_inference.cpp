#include "helpers.hpp"

#include "ridgeboot/error.hpp"
#include "ridgeboot/inference.hpp"

#include <doctest.h>

#include <cmath>

using namespace ridgeboot;

namespace {

struct Instance {
  Matrix x;
  Vector beta;
  Matrix m;
};

Instance sparse_instance(std::uint64_t seed, Eigen::Index n, Eigen::Index p, Eigen::Index p1) {
  Stream rng(seed, 0);
  Instance inst{testing::gaussian_matrix(rng, n, p), Vector::Zero(p),
                testing::gaussian_matrix(rng, p1, p)};
  inst.beta.head(3) << 2.0, -1.5, 1.0;
  return inst;
}

}  // namespace

TEST_SUITE("inference") {

TEST_CASE("noiseless replicate reproduces the fit") {
  const Instance inst = sparse_instance(1, 20, 3, 3);
  const ModelFrame frame(inst.x, inst.x * inst.beta, inst.m);
  ImprovedFit fit = improved_fit(frame, {0.0, 0.1});
  REQUIRE(fit.selected == IndexSet{0, 1, 2});
  fit.sigma2_hat = 0.0;
  Stream s(2, 0);
  CHECK(wild_replicate(frame, fit, s) <= 1e-12);

  const auto [region, draws] = confidence_region(frame, fit, {1, 0.05, 3, 1});
  CHECK(region.radius <= 1e-12);
  CHECK(region.contains(fit.gamma_hat));
}

TEST_CASE("empty replicate selection uses the floor scale") {
  const Instance inst = sparse_instance(3, 30, 5, 4);
  const ModelFrame frame(inst.x, inst.x * inst.beta, inst.m);
  ImprovedFit fit = improved_fit(frame, {1.0, 0.5});
  REQUIRE_FALSE(fit.selected.empty());
  // Zero fitted mean and no noise: every refitted coordinate is 0.
  fit.theta_hat.setZero();
  fit.sigma2_hat = 0.0;
  Stream s(4, 0);
  const double expected = fit.gamma_hat.cwiseAbs().maxCoeff() * std::sqrt(30.0);
  CHECK(wild_replicate(frame, fit, s) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(WildBootstrap(frame, fit).scales_for({}).isApproxToConstant(std::sqrt(1.0 / 30.0)));
}

TEST_CASE("scales for the fitted selection are the fitted scales") {
  const Instance inst = sparse_instance(5, 40, 8, 5);
  Stream rng(6, 0);
  const Vector y = inst.x * inst.beta + testing::gaussian_vector(rng, 40);
  const ModelFrame frame(inst.x, y, inst.m);
  const ImprovedFit fit = improved_fit(frame, {1.0, 0.5});
  const WildBootstrap boot(frame, fit);
  CHECK(boot.scales_for(fit.selected) == fit.tau_hat);
  const IndexSet other{0, 4};
  const Vector direct = scale_factors(combination_loadings(frame.svd(), inst.m, other),
                                      fit.weights, frame.n());
  CHECK(testing::max_abs(boot.scales_for(other) - direct) <= 1e-12);
}

TEST_CASE("radius grows with the level") {
  const Instance inst = sparse_instance(7, 50, 8, 6);
  Stream rng(8, 0);
  const ModelFrame frame(inst.x, inst.x * inst.beta + testing::gaussian_vector(rng, 50), inst.m);
  const ImprovedFit fit = improved_fit(frame, {1.0, 0.4});
  const BootstrapDraws draws = wild_draws(frame, fit, {300, 0.05, 9, 1});
  CHECK(region_from_draws(fit, draws, 0.01).radius >= region_from_draws(fit, draws, 0.10).radius);
  CHECK(region_from_draws(fit, draws, 0.05).radius == draws.quantile);
  for (double e : draws.stats) CHECK(e >= 0.0);

  const ConfidenceRegion r = region_from_draws(fit, draws, 0.05);
  CHECK(testing::max_abs(r.upper() - r.lower() - 2.0 * r.radius * r.scale) <= 1e-12);
}

TEST_CASE("testing the estimate itself never rejects") {
  const Instance inst = sparse_instance(10, 50, 8, 6);
  Stream rng(11, 0);
  const ModelFrame frame(inst.x, inst.x * inst.beta + testing::gaussian_vector(rng, 50), inst.m);
  const ImprovedFit fit = improved_fit(frame, {1.0, 0.4});
  const TestResult t = hypothesis_test(frame, fit, fit.gamma_hat, {200, 0.05, 12, 1});
  CHECK(t.statistic == 0.0);
  CHECK_FALSE(t.reject);

  const TestResult far = hypothesis_test(frame, fit, fit.gamma_hat.array() + 100.0, {200, 0.05, 12, 1});
  CHECK(far.reject);
  CHECK(far.critical == t.critical);

  CHECK_THROWS_AS(hypothesis_test(frame, fit, Vector::Zero(2), {200, 0.05, 12, 1}), DimensionError);
}

TEST_CASE("bootstrap configuration is validated") {
  const Instance inst = sparse_instance(13, 20, 3, 2);
  const ModelFrame frame(inst.x, inst.x * inst.beta, inst.m);
  const ImprovedFit fit = improved_fit(frame, {1.0, 0.1});
  CHECK_THROWS_AS(wild_draws(frame, fit, {0, 0.05, 1, 1}), InvalidArgument);
  CHECK_THROWS_AS(wild_draws(frame, fit, {10, 1.5, 1, 1}), InvalidArgument);
  const ModelFrame other(inst.x.leftCols(2), inst.x * inst.beta);
  CHECK_THROWS_AS(WildBootstrap(other, fit), DimensionError);
}

TEST_CASE("test size under the null") {
  // Fresh data each time, fixed design and truth. At n = 100 the test runs
  // slightly liberal (about 0.067), so the check uses a larger sample.
  const Instance inst = sparse_instance(14, 300, 10, 5);
  const ThinSvd svd = thin_svd(inst.x);
  const Vector gamma = inst.m * row_space_params(svd, inst.beta).theta;
  int rejections = 0;
  const int sims = 500;
  for (int k = 0; k < sims; ++k) {
    Stream noise(15, static_cast<std::uint64_t>(k));
    const ModelFrame frame(inst.x, inst.x * inst.beta + normal(noise, 0.0, 1.0, 300), inst.m, svd);
    const ImprovedFit fit = improved_fit(frame, {1.0, 0.4});
    const BootstrapConfig cfg{200, 0.05, derive_seed(16, static_cast<std::uint64_t>(k)), 1};
    rejections += hypothesis_test(frame, fit, gamma, cfg).reject;
  }
  const double size = static_cast<double>(rejections) / sims;
  CHECK(size >= 0.02);
  CHECK(size <= 0.08);
}

TEST_CASE("oracle law at zero and monotone") {
  const Instance inst = sparse_instance(17, 40, 6, 4);
  const ThinSvd svd = thin_svd(inst.x);
  const IndexSet sel{0, 1, 2};
  const Matrix c = combination_loadings(svd, inst.m, sel);
  const Vector tau = scale_factors(c, loading_weights(svd, 1.0), 40);
  Stream s(18, 0);
  const SampleCdf h = h_oracle(svd, c, tau, 1.0, 2.0, 2000, s);
  CHECK(h(0.0) == 0.0);
  double last = 0.0;
  for (double x = 0.0; x < 5.0; x += 0.05) {
    CHECK(h(x) >= last);
    last = h(x);
  }
  CHECK_THROWS_AS(h_oracle(svd, c, tau, 1.0, 0.0, 10, s), InvalidArgument);
  CHECK_THROWS_AS(h_oracle(svd, c.leftCols(2), tau, 1.0, 1.0, 10, s), DimensionError);
}

TEST_CASE("oracle law with one combination is a folded normal") {
  // |a^T xi| / tau with xi ~ N(0, sigma^2 I): P(. <= x) = 2 Phi(x tau / (|a| sigma)) - 1.
  const Instance inst = sparse_instance(19, 40, 6, 1);
  const ThinSvd svd = thin_svd(inst.x);
  const double rho = 2.0;
  const double sigma = 1.5;
  const Matrix c = combination_loadings(svd, inst.m, IndexSet{0, 1, 2});
  const Vector tau = scale_factors(c, loading_weights(svd, rho), 40);
  double a2 = 0.0;
  for (Eigen::Index k = 0; k < svd.rank(); ++k) {
    const double lam = svd.singular(k);
    const double w = lam / (lam * lam + rho) + rho * lam / std::pow(lam * lam + rho, 2);
    a2 += std::pow(c(0, k) * w, 2);
  }
  const double scale = std::sqrt(a2) * sigma / tau(0);
  Stream s(20, 0);
  const SampleCdf h = h_oracle(svd, c, tau, rho, sigma, 40000, s);
  for (double q : {0.25, 0.5, 0.75}) {
    // Folded-normal quantile: x = scale * Phi^{-1}((1 + q) / 2).
    double lo = 0.0, hi = 10.0;
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (lo + hi);
      (2.0 * normal_cdf(mid) - 1.0 < q ? lo : hi) = mid;
    }
    const double x = scale * lo;
    CHECK(std::abs(h(x) - (2.0 * normal_cdf(x / scale) - 1.0)) <= 0.01);
  }
}

}  // TEST_SUITE
