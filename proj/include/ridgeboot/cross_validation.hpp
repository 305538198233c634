#pragma once

#include "ridgeboot/estimator.hpp"

#include <cstdint>
#include <vector>

namespace ridgeboot {

struct CvGrid {
  std::vector<double> rho;        // positive
  std::vector<double> threshold;  // nonnegative
  int folds = 5;
  std::uint64_t seed = 0;

  void validate(Eigen::Index n) const;
};

struct CvEntry {
  double rho = 0.0;
  double threshold = 0.0;
  double mean_error = 0.0;  // held-out squared prediction error, averaged over folds
};

struct CvReport {
  std::vector<CvEntry> entries;  // rho-major, in grid order
  Hyperparams chosen;
  double chosen_error = 0.0;
  std::uint64_t seed = 0;
  int folds = 0;
};

/// Fold label (0..folds-1) of every observation: contiguous blocks of a
/// seeded permutation, block sizes differing by at most one.
std::vector<int> fold_assignment(Eigen::Index n, int folds, std::uint64_t seed);

/// 20 log-spaced ridge values on [1e-3, n] and 20 thresholds on
/// [0, 2 * median |theta_tilde|], theta_tilde fitted with rho = 1.
CvGrid default_grid(const ModelFrame& frame, int folds = 5, std::uint64_t seed = 0);

/// k-fold cross-validation of the full debias + threshold pipeline over
/// the grid. Ties go to the smaller rho, then the smaller threshold.
CvReport cross_validate(const ModelFrame& frame, const CvGrid& grid, int threads = 0);

}  // namespace ridgeboot
