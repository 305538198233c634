#include "ridgeboot/report.hpp"

#include "ridgeboot/error.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

namespace ridgeboot {
namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        out.back() += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.emplace_back();
    } else if (ch != '\r') {
      out.back() += ch;
    }
  }
  return out;
}

}  // namespace

std::string format_real(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

Report& Report::set(const std::string& key, const std::string& value) {
  for (auto& row : rows_) {
    if (row.first == key) {
      row.second = {value};
      return *this;
    }
  }
  rows_.push_back({key, {value}});
  return *this;
}

Report& Report::set(const std::string& key, double value) { return set(key, format_real(value)); }
Report& Report::set(const std::string& key, long long value) { return set(key, std::to_string(value)); }
Report& Report::set(const std::string& key, std::uint64_t value) { return set(key, std::to_string(value)); }
Report& Report::set(const std::string& key, bool value) { return set(key, std::string(value ? "true" : "false")); }

Report& Report::set(const std::string& key, const Vector& values) {
  std::vector<std::string> cells;
  for (double v : values) cells.push_back(format_real(v));
  set(key, std::string());
  for (auto& row : rows_) {
    if (row.first == key) row.second = std::move(cells);
  }
  return *this;
}

Report& Report::set(const std::string& key, const IndexSet& values) {
  std::vector<std::string> cells;
  for (auto v : values) cells.push_back(std::to_string(v));
  set(key, std::string());
  for (auto& row : rows_) {
    if (row.first == key) row.second = std::move(cells);
  }
  return *this;
}

const std::vector<std::string>& Report::at(const std::string& key) const {
  for (const auto& row : rows_) {
    if (row.first == key) return row.second;
  }
  throw InvalidArgument("report has no key '" + key + "'");
}

double Report::number(const std::string& key) const {
  const auto& cells = at(key);
  if (cells.size() != 1) throw InvalidArgument("report key '" + key + "' is not a scalar");
  return std::stod(cells.front());
}

void Report::write(std::ostream& out) const {
  for (const auto& [key, values] : rows_) {
    out << quote(key);
    for (const auto& v : values) out << ',' << quote(v);
    out << '\n';
  }
}

std::string Report::str() const {
  std::ostringstream os;
  write(os);
  return os.str();
}

Report Report::parse(std::istream& in) {
  Report report;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split_csv(line);
    std::string key = std::move(cells.front());
    cells.erase(cells.begin());
    report.rows_.push_back({std::move(key), std::move(cells)});
  }
  return report;
}

void append_fit(Report& report, const ImprovedFit& fit) {
  report.set("rho", fit.hyper.rho);
  report.set("threshold", fit.hyper.threshold);
  report.set("theta_hat", fit.theta_hat);
  report.set("selected", fit.selected);
  report.set("selected_count", static_cast<long long>(fit.selected.size()));
  report.set("gamma_hat", fit.gamma_hat);
  report.set("sigma2_hat", fit.sigma2_hat);
  report.set("tau_hat", fit.tau_hat);
}

void append_sim(Report& report, const SimReport& sim) {
  const SimCase& c = sim.config;
  report.set("case", c.id);
  report.set("n", static_cast<long long>(c.n));
  report.set("p", static_cast<long long>(c.p));
  report.set("p1", static_cast<long long>(c.p1));
  report.set("m_count", static_cast<long long>(c.m_count));
  report.set("tau_split", static_cast<long long>(c.tau_split));
  report.set("error_law", to_string(c.law));
  report.set("regime", to_string(c.regime));
  report.set("target", to_string(c.target));
  report.set("hyper_source", std::string(c.hyper ? "fixed" : "cv"));
  report.set("reps", c.reps);
  report.set("replicates", c.replicates);
  report.set("xf_rows", static_cast<long long>(c.xf_rows));
  report.set("alpha", c.alpha);
  report.set("noise_scale", c.noise_scale);
  report.set("rho", sim.hyper.rho);
  report.set("threshold", sim.hyper.threshold);
  report.set("lambda_r", sim.lambda_r);
  report.set("true_support_size", static_cast<long long>(sim.true_support_size));
  report.set("K1", sim.k.k1);
  report.set("K2", sim.k.k2);
  report.set("K3", sim.k.k3);
  report.set("K4", sim.k.k4);
  report.set("misspecification", sim.misspecification);
  report.set("mean_gamma_error", sim.mean_gamma_error);
  report.set("mean_sigma2_error", sim.mean_sigma2_error);
  report.set("coverage", sim.coverage);
  report.set("coverage_se", sim.standard_error(sim.coverage));
  report.set("coverage_theta", sim.coverage_theta);
  report.set("coverage_beta", sim.coverage_beta);
  report.set("prediction_coverage", sim.prediction_coverage);
  report.set("prediction_coverage_se", sim.standard_error(sim.prediction_coverage));
  report.set("mean_confidence_radius", sim.mean_confidence_radius);
  report.set("mean_prediction_radius", sim.mean_prediction_radius);
  if (!sim.power.empty()) {
    Vector deltas(static_cast<Eigen::Index>(sim.power.size()));
    Vector rates(deltas.size());
    for (std::size_t i = 0; i < sim.power.size(); ++i) {
      deltas(static_cast<Eigen::Index>(i)) = sim.power[i].delta;
      rates(static_cast<Eigen::Index>(i)) = sim.power[i].rejection_rate;
    }
    report.set("power_delta", deltas);
    report.set("power_rate", rates);
  }
}

void write_cv_table(std::ostream& out, const CvReport& cv) {
  out << "rho,b,mean_error\n";
  for (const CvEntry& e : cv.entries) {
    out << format_real(e.rho) << ',' << format_real(e.threshold) << ',' << format_real(e.mean_error)
        << '\n';
  }
}

}  // namespace ridgeboot
