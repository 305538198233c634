#include "ridgeboot/stats.hpp"

#include "ridgeboot/error.hpp"

#include <algorithm>
#include <cmath>

namespace ridgeboot {

double sample_quantile(std::span<const double> values, double level) {
  if (values.empty()) throw InvalidArgument("sample_quantile: empty input");
  if (!(level > 0.0 && level < 1.0)) throw InvalidArgument("sample_quantile: level must be in (0, 1)");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double count = static_cast<double>(sorted.size());
  // Scan runs of ties: the ECDF at a value counts every copy of it.
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
    if (static_cast<double>(j + 1) / count >= level) return sorted[i];
    i = j + 1;
  }
  return sorted.back();
}

SampleCdf::SampleCdf(std::vector<double> values) : sorted_(std::move(values)) {
  if (sorted_.empty()) throw InvalidArgument("SampleCdf: empty sample");
  std::sort(sorted_.begin(), sorted_.end());
}

double SampleCdf::operator()(double x) const {
  auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double SampleCdf::quantile(double level) const { return sample_quantile(sorted_, level); }

double ks_distance(const SampleCdf& a, const SampleCdf& b) {
  const auto& xa = a.sorted();
  const auto& xb = b.sorted();
  const double na = static_cast<double>(xa.size());
  const double nb = static_cast<double>(xb.size());
  std::size_t i = 0, j = 0;
  double best = 0.0;
  while (i < xa.size() || j < xb.size()) {
    double x;
    if (j == xb.size() || (i < xa.size() && xa[i] <= xb[j])) {
      x = xa[i];
    } else {
      x = xb[j];
    }
    while (i < xa.size() && xa[i] <= x) ++i;
    while (j < xb.size() && xb[j] <= x) ++j;
    best = std::max(best, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return best;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace ridgeboot
