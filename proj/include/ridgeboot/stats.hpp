#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace ridgeboot {

/// 1 - alpha sample quantile in the order-statistic sense: the smallest
/// sorted value X_(i) whose empirical CDF reaches `level`. Never
/// interpolates, so the result is always one of the inputs.
double sample_quantile(std::span<const double> values, double level);

/// Empirical distribution of a finite sample.
class SampleCdf {
 public:
  explicit SampleCdf(std::vector<double> values);

  /// Fraction of sample points <= x.
  double operator()(double x) const;
  double quantile(double level) const;

  std::size_t size() const { return sorted_.size(); }
  const std::vector<double>& sorted() const { return sorted_; }

 private:
  std::vector<double> sorted_;
};

/// sup_x |F_a(x) - F_b(x)| over two empirical CDFs.
double ks_distance(const SampleCdf& a, const SampleCdf& b);

/// Standard normal CDF.
double normal_cdf(double x);

}  // namespace ridgeboot
