#include "ridgeboot/simulation.hpp"

#include "ridgeboot/cross_validation.hpp"
#include "ridgeboot/error.hpp"
#include "ridgeboot/inference.hpp"
#include "ridgeboot/parallel.hpp"
#include "ridgeboot/prediction.hpp"

#include <cmath>
#include <memory>

namespace ridgeboot {
namespace {

// Stream tags under the case seed.
enum : std::uint64_t {
  kDesignTag = 1,
  kCombinationTag = 2,
  kNoiseTag = 3,
  kFutureNoiseTag = 4,
  kWildTag = 5,
  kHybridTag = 6,
  kCvTag = 7,
};

}  // namespace

std::string to_string(ErrorLaw law) { return law == ErrorLaw::Normal ? "normal" : "laplace"; }
std::string to_string(Regime regime) { return regime == Regime::LowDim ? "low_dim" : "high_dim"; }
std::string to_string(Target target) { return target == Target::Theta ? "theta" : "beta"; }

void SimCase::validate() const {
  if (n < 2 || p < 1 || p1 < 1) throw InvalidArgument("simulation dimensions must be positive");
  if (m_count < 0 || m_count > p1) throw InvalidArgument("|M| must lie in [0, p1]");
  if (tau_split < 1 || tau_split >= p) throw InvalidArgument("tau split must lie in [1, p)");
  if (xf_rows < 1 || xf_rows > p1) throw InvalidArgument("prediction rows must lie in [1, p1]");
  if (reps < 1 || replicates < 1) throw InvalidArgument("replication counts must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  if (!(noise_scale >= 0.0)) throw InvalidArgument("noise scale must be nonnegative");
  if (hyper) hyper->validate();
  for (double d : deltas) {
    if (!(d >= 0.0)) throw InvalidArgument("power sweep shifts must be nonnegative");
  }
}

SimCase reference_case(int id, Scale scale) {
  if (id < 1 || id > 6) throw InvalidArgument("case must be in 1..6");
  SimCase c;
  c.id = id;
  c.law = (id == 1 || id == 5) ? ErrorLaw::Normal : ErrorLaw::Laplace;
  c.regime = id >= 5 ? Regime::HighDim : Regime::LowDim;
  c.tau_split = id >= 5 ? 6 : 50;
  if (scale == Scale::Full) {
    c.n = 1000;
    c.p = id == 3 ? 650 : (id >= 5 ? 1500 : 500);
    c.p1 = 800;
    c.m_count = id == 4 ? 700 : 300;
    c.reps = 1000;
    c.replicates = 500;
    c.xf_rows = 100;
    // Cross-validated values reported for these settings.
    static constexpr Hyperparams kFull[] = {{56.453, 0.343}, {36.728, 0.354}, {56.432, 0.396},
                                            {55.317, 0.346}, {1.201, 0.228},  {1.201, 0.228}};
    c.hyper = kFull[id - 1];
    return c;
  }
  c.n = id >= 5 ? 200 : 300;
  c.p = id == 3 ? 130 : (id >= 5 ? 300 : 100);
  c.p1 = 160;
  c.m_count = id == 4 ? 140 : 60;
  c.reps = 300;
  c.replicates = 200;
  c.xf_rows = 10;
  // At this size cross-validation tends to pick b below the noise level, so
  // the threshold is fixed where the selected set is stable.
  c.hyper = id >= 5 ? Hyperparams{1.0, 0.2} : Hyperparams{1.0, 0.5};
  return c;
}

double SimReport::standard_error(double proportion) const {
  return std::sqrt(proportion * (1.0 - proportion) / static_cast<double>(config.reps));
}

Matrix gen_design(Stream& stream, Eigen::Index n, Eigen::Index p) {
  if (n < 1 || p < 1) throw InvalidArgument("gen_design: dimensions must be positive");
  // Sigma = 1.5 I + 0.5 11^T, so Sigma^{1/2} = a I + c 11^T with
  // a = sqrt(1.5) and a + c p = sqrt(1.5 + 0.5 p).
  const double a = std::sqrt(1.5);
  const double c = (std::sqrt(1.5 + 0.5 * static_cast<double>(p)) - a) / static_cast<double>(p);
  Matrix x(n, p);
  Vector z(p);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) z(j) = stream.standard_normal();
    x.row(i) = (a * z.array() + c * z.sum()).matrix().transpose();
  }
  return x;
}

Matrix gen_combination(Stream& stream, Eigen::Index p, Eigen::Index p1, Eigen::Index m_count,
                       Eigen::Index tau_split, Regime regime) {
  if (p1 < 1 || m_count < 0 || m_count > p1 || tau_split < 1 || tau_split >= p) {
    throw InvalidArgument("gen_combination: invalid shape (p=" + std::to_string(p) +
                          ", p1=" + std::to_string(p1) + ", |M|=" + std::to_string(m_count) +
                          ", tau=" + std::to_string(tau_split) + ")");
  }
  const Eigen::Index tail = p - tau_split;
  const double head_norm = 2.0;
  const double active_tail_norm = regime == Regime::LowDim ? 4.0 : 1.0;
  const double passive_tail_norm = regime == Regime::LowDim ? 6.0 : 1.0;

  Matrix m = Matrix::Zero(p1, p);
  for (Eigen::Index i = 0; i < p1; ++i) {
    if (i < m_count) {
      Vector head = normal(stream, 0.5, 1.0, tau_split);
      m.row(i).head(tau_split) = (head_norm / head.norm()) * head.transpose();
    }
    Vector rest = normal(stream, 1.0, 2.0, tail);
    const double norm = i < m_count ? active_tail_norm : passive_tail_norm;
    m.row(i).tail(tail) = (norm / rest.norm()) * rest.transpose();
  }
  return m;
}

Vector gen_beta(Regime regime, Eigen::Index p) {
  Vector beta = Vector::Zero(p);
  if (regime == Regime::LowDim) {
    if (p < 16) throw InvalidArgument("gen_beta: the p < n pattern needs p >= 16");
    beta.segment(0, 3).setConstant(2.0);
    beta.segment(3, 3).setConstant(-2.0);
    beta.segment(6, 3).setConstant(1.0);
    beta.segment(9, 3).setConstant(-1.0);
    beta.segment(12, 4).setConstant(0.01);
  } else {
    if (p < 6) throw InvalidArgument("gen_beta: the p > n pattern needs p >= 6");
    beta.segment(0, 3).setConstant(1.0);
    beta.segment(3, 3).setConstant(-1.0);
  }
  return beta;
}

Vector gen_errors(Stream& stream, ErrorLaw law, double noise_scale, Eigen::Index count) {
  if (noise_scale == 0.0) return Vector::Zero(count);
  if (law == ErrorLaw::Normal) return normal(stream, 0.0, 2.0 * noise_scale, count);
  return laplace(stream, std::sqrt(2.0) * noise_scale, count);
}

SimInstance make_instance(const SimCase& c) {
  c.validate();
  SimInstance inst;
  Stream design_stream(derive_seed(c.seed, kDesignTag), 0);
  inst.design = gen_design(design_stream, c.n, c.p);
  Stream m_stream(derive_seed(c.seed, kCombinationTag), 0);
  inst.combination = gen_combination(m_stream, c.p, c.p1, c.m_count, c.tau_split, c.regime);
  inst.beta = gen_beta(c.regime, c.p);
  inst.svd = thin_svd(inst.design);
  inst.theta = row_space_params(inst.svd, inst.beta).theta;
  return inst;
}

namespace {

struct Replication {
  bool misspecified = false;
  double gamma_error = 0.0;
  double sigma2_error = 0.0;
  bool covered_theta = false;
  bool covered_beta = false;
  bool covered_prediction = false;
  double confidence_radius = 0.0;
  double prediction_radius = 0.0;
  std::vector<char> rejected;  // per delta
};

Vector observed_response(const SimCase& c, const SimInstance& inst, std::size_t rep) {
  Stream noise(derive_seed(c.seed, kNoiseTag), rep);
  // X beta and X theta coincide, so the same data serve both targets.
  return inst.design * inst.beta + gen_errors(noise, c.law, c.noise_scale, c.n);
}

Hyperparams resolve_hyper(const SimCase& c, const SimInstance& inst) {
  if (c.hyper) return *c.hyper;
  const ModelFrame frame(inst.design, observed_response(c, inst, 0), inst.combination, inst.svd);
  return cross_validate(frame, default_grid(frame, 5, derive_seed(c.seed, kCvTag)), c.threads)
      .chosen;
}

}  // namespace

SimReport run_case(const SimCase& c) {
  const SimInstance inst = make_instance(c);
  SimReport report;
  report.config = c;
  report.hyper = resolve_hyper(c, inst);
  report.lambda_r = inst.svd.smallest();

  const Vector& target_param = c.target == Target::Theta ? inst.theta : inst.beta;
  const IndexSet true_support = threshold_select(inst.theta, report.hyper.threshold);
  report.true_support_size = true_support.size();
  {
    const ModelFrame frame(inst.design, inst.design * inst.beta, inst.combination, inst.svd);
    report.k = k_diagnostics(frame, target_param, report.hyper, true_support);
  }

  const Vector gamma_theta = inst.combination * inst.theta;
  const Vector gamma_beta = inst.combination * inst.beta;
  const Vector& gamma_target = c.target == Target::Theta ? gamma_theta : gamma_beta;
  const Matrix xf = inst.combination.topRows(c.xf_rows);
  const Vector future_mean = xf * target_param;
  const double sigma2 = c.error_variance();

  // The design and rho are fixed across replications, so one Gram matrix serves all.
  const auto gram = std::make_shared<const Matrix>(
      weighted_gram(inst.svd, loading_weights(inst.svd, report.hyper.rho)));

  std::vector<Replication> out(static_cast<std::size_t>(c.reps));
  parallel_for(out.size(), c.threads, [&](std::size_t rep) {
    const ModelFrame frame(inst.design, observed_response(c, inst, rep), inst.combination,
                           inst.svd);
    const ImprovedFit fit = improved_fit(frame, report.hyper);
    Replication& r = out[rep];
    r.misspecified = fit.selected != true_support;
    r.gamma_error = (fit.gamma_hat - gamma_target).lpNorm<Eigen::Infinity>();
    r.sigma2_error = std::abs(fit.sigma2_hat - sigma2);

    const BootstrapConfig wild_cfg{c.replicates, c.alpha, derive_seed(derive_seed(c.seed, kWildTag), rep), 1};
    const BootstrapDraws draws = wild_draws(frame, fit, wild_cfg, gram);
    const ConfidenceRegion region = region_from_draws(fit, draws, c.alpha);
    r.confidence_radius = region.radius;
    r.covered_theta = region.contains(gamma_theta);
    r.covered_beta = region.contains(gamma_beta);
    r.rejected.reserve(c.deltas.size());
    for (double delta : c.deltas) {
      const Vector gamma0 = gamma_target.array() + delta;
      r.rejected.push_back(test_from_draws(fit, gamma0, draws, c.alpha).reject ? 1 : 0);
    }

    Stream future(derive_seed(c.seed, kFutureNoiseTag), rep);
    const Vector y_future = future_mean + gen_errors(future, c.law, c.noise_scale, c.xf_rows);
    const BootstrapConfig hybrid_cfg{c.replicates, c.alpha, derive_seed(derive_seed(c.seed, kHybridTag), rep), 1};
    const auto [pred_region, pred_draws] = prediction_region(frame, fit, xf, hybrid_cfg);
    r.prediction_radius = pred_region.radius;
    r.covered_prediction = pred_region.contains(y_future);
  });

  const double reps = static_cast<double>(c.reps);
  std::vector<double> rejections(c.deltas.size(), 0.0);
  for (const Replication& r : out) {
    report.misspecification += r.misspecified;
    report.mean_gamma_error += r.gamma_error;
    report.mean_sigma2_error += r.sigma2_error;
    report.coverage_theta += r.covered_theta;
    report.coverage_beta += r.covered_beta;
    report.prediction_coverage += r.covered_prediction;
    report.mean_confidence_radius += r.confidence_radius;
    report.mean_prediction_radius += r.prediction_radius;
    for (std::size_t d = 0; d < rejections.size(); ++d) rejections[d] += r.rejected[d];
  }
  report.misspecification /= reps;
  report.mean_gamma_error /= reps;
  report.mean_sigma2_error /= reps;
  report.coverage_theta /= reps;
  report.coverage_beta /= reps;
  report.prediction_coverage /= reps;
  report.mean_confidence_radius /= reps;
  report.mean_prediction_radius /= reps;
  report.coverage = c.target == Target::Theta ? report.coverage_theta : report.coverage_beta;
  for (std::size_t d = 0; d < rejections.size(); ++d) {
    report.power.push_back({c.deltas[d], rejections[d] / reps});
  }
  return report;
}

std::vector<PowerPoint> power_sweep(const SimCase& c, const std::vector<double>& deltas) {
  SimCase sweep = c;
  sweep.deltas = deltas;
  return run_case(sweep).power;
}

std::vector<PathPoint> ridge_path(const SimCase& c, const std::vector<double>& rho_grid,
                                  double threshold) {
  const SimInstance inst = make_instance(c);
  const ModelFrame frame(inst.design, observed_response(c, inst, 0), inst.combination, inst.svd);
  const Vector gamma =
      inst.combination * (c.target == Target::Theta ? inst.theta : inst.beta);
  auto error = [&](const Vector& theta) { return (inst.combination * theta - gamma).norm(); };
  std::vector<PathPoint> out;
  for (double rho : rho_grid) {
    const Vector star = ridge_estimate(frame, rho);
    const Vector tilde = debias(frame, star, rho);
    PathPoint pt;
    pt.rho = rho;
    pt.ridge = error(star);
    pt.thresholded_ridge = error(restrict_to(star, threshold_select(star, threshold)));
    pt.debiased_ridge = error(tilde);
    pt.debiased_thresholded = error(restrict_to(tilde, threshold_select(tilde, threshold)));
    out.push_back(pt);
  }
  return out;
}

}  // namespace ridgeboot
