#include "ridgeboot/cross_validation.hpp"

#include "ridgeboot/error.hpp"
#include "ridgeboot/parallel.hpp"
#include "ridgeboot/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ridgeboot {

void CvGrid::validate(Eigen::Index n) const {
  if (rho.empty() || threshold.empty()) throw InvalidArgument("cross-validation grid is empty");
  for (double r : rho) {
    if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("ridge grid values must be positive");
  }
  for (double b : threshold) {
    if (!(b >= 0.0) || !std::isfinite(b)) {
      throw InvalidArgument("threshold grid values must be nonnegative");
    }
  }
  if (folds < 2) throw InvalidArgument("cross-validation needs at least 2 folds");
  if (folds > n) {
    throw InvalidArgument("cannot split " + std::to_string(n) + " observations into " +
                          std::to_string(folds) + " folds");
  }
}

std::vector<int> fold_assignment(Eigen::Index n, int folds, std::uint64_t seed) {
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  Stream stream(seed, 0);
  for (std::size_t i = perm.size(); i > 1; --i) {
    std::swap(perm[i - 1], perm[stream.below(i)]);
  }
  std::vector<int> label(perm.size());
  const auto total = static_cast<std::size_t>(n);
  for (int k = 0; k < folds; ++k) {
    const std::size_t begin = total * static_cast<std::size_t>(k) / static_cast<std::size_t>(folds);
    const std::size_t end =
        total * static_cast<std::size_t>(k + 1) / static_cast<std::size_t>(folds);
    for (std::size_t i = begin; i < end; ++i) label[static_cast<std::size_t>(perm[i])] = k;
  }
  return label;
}

CvGrid default_grid(const ModelFrame& frame, int folds, std::uint64_t seed) {
  CvGrid grid;
  grid.folds = folds;
  grid.seed = seed;
  const double lo = std::log(1e-3);
  const double hi = std::log(static_cast<double>(frame.n()));
  for (int i = 0; i < 20; ++i) grid.rho.push_back(std::exp(lo + (hi - lo) * i / 19.0));

  Vector tilde = debiased_estimate(frame.svd(), frame.response(), 1.0);
  std::vector<double> mags(tilde.data(), tilde.data() + tilde.size());
  for (double& m : mags) m = std::abs(m);
  const std::size_t mid = mags.size() / 2;
  std::nth_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(mid), mags.end());
  double median = mags[mid];
  if (mags.size() % 2 == 0) {
    median = 0.5 * (median + *std::max_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(mid)));
  }
  for (int i = 0; i < 20; ++i) grid.threshold.push_back(2.0 * median * i / 19.0);
  return grid;
}

namespace {

struct Fold {
  ThinSvd svd;
  Vector y_train;
  Matrix x_test;
  Vector y_test;
};

Fold make_fold(const ModelFrame& frame, const std::vector<int>& label, int k) {
  std::vector<Eigen::Index> train, test;
  for (std::size_t i = 0; i < label.size(); ++i) {
    (label[i] == k ? test : train).push_back(static_cast<Eigen::Index>(i));
  }
  Fold fold;
  const Matrix x_train = frame.design()(train, Eigen::all);
  fold.svd = thin_svd(x_train, frame.svd().rank_tolerance);
  fold.y_train = frame.response()(train);
  fold.x_test = frame.design()(test, Eigen::all);
  fold.y_test = frame.response()(test);
  return fold;
}

}  // namespace

CvReport cross_validate(const ModelFrame& frame, const CvGrid& grid, int threads) {
  grid.validate(frame.n());
  const std::vector<int> label = fold_assignment(frame.n(), grid.folds, grid.seed);

  std::vector<Fold> folds(static_cast<std::size_t>(grid.folds));
  parallel_for(folds.size(), threads,
               [&](std::size_t k) { folds[k] = make_fold(frame, label, static_cast<int>(k)); });

  const std::size_t nb = grid.threshold.size();
  std::vector<double> errors(grid.rho.size() * nb, 0.0);
  parallel_for(grid.rho.size(), threads, [&](std::size_t ir) {
    for (const Fold& fold : folds) {
      const Vector tilde = debiased_estimate(fold.svd, fold.y_train, grid.rho[ir]);
      for (std::size_t ib = 0; ib < nb; ++ib) {
        const Vector theta = restrict_to(tilde, threshold_select(tilde, grid.threshold[ib]));
        const double mse = (fold.y_test - fold.x_test * theta).squaredNorm() /
                           static_cast<double>(fold.y_test.size());
        errors[ir * nb + ib] += mse;
      }
    }
  });

  CvReport report;
  report.seed = grid.seed;
  report.folds = grid.folds;
  bool have = false;
  for (std::size_t ir = 0; ir < grid.rho.size(); ++ir) {
    for (std::size_t ib = 0; ib < nb; ++ib) {
      const CvEntry entry{grid.rho[ir], grid.threshold[ib],
                          errors[ir * nb + ib] / static_cast<double>(grid.folds)};
      report.entries.push_back(entry);
      const bool better =
          !have || entry.mean_error < report.chosen_error ||
          (entry.mean_error == report.chosen_error &&
           (entry.rho < report.chosen.rho ||
            (entry.rho == report.chosen.rho && entry.threshold < report.chosen.threshold)));
      if (better) {
        report.chosen = {entry.rho, entry.threshold};
        report.chosen_error = entry.mean_error;
        have = true;
      }
    }
  }
  return report;
}

}  // namespace ridgeboot
