#pragma once

#include "ridgeboot/cross_validation.hpp"
#include "ridgeboot/estimator.hpp"
#include "ridgeboot/simulation.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace ridgeboot {

inline constexpr const char* kVersion = "0.1.0";

/// Ordered key/value report. Every line is a CSV row: the key followed by
/// one or more values, so vectors become one row each. Reals are written
/// with 17 significant digits and round-trip exactly.
class Report {
 public:
  using Row = std::pair<std::string, std::vector<std::string>>;

  Report& set(const std::string& key, const std::string& value);
  Report& set(const std::string& key, double value);
  Report& set(const std::string& key, long long value);
  Report& set(const std::string& key, int value) { return set(key, static_cast<long long>(value)); }
  Report& set(const std::string& key, std::uint64_t value);
  Report& set(const std::string& key, bool value);
  Report& set(const std::string& key, const Vector& values);
  Report& set(const std::string& key, const IndexSet& values);

  const std::vector<Row>& rows() const { return rows_; }
  /// Values stored under `key`; throws InvalidArgument when absent.
  const std::vector<std::string>& at(const std::string& key) const;
  double number(const std::string& key) const;

  void write(std::ostream& out) const;
  std::string str() const;
  static Report parse(std::istream& in);

 private:
  std::vector<Row> rows_;
};

std::string format_real(double value);

/// Appends theta_hat, selected indices, gamma_hat, sigma2_hat and tau_hat.
void append_fit(Report& report, const ImprovedFit& fit);

void append_sim(Report& report, const SimReport& sim);

/// rho,b,mean_error rows of a CV report.
void write_cv_table(std::ostream& out, const CvReport& cv);

}  // namespace ridgeboot
