#include "ridgeboot/cli.hpp"

#include "ridgeboot/cross_validation.hpp"
#include "ridgeboot/error.hpp"
#include "ridgeboot/inference.hpp"
#include "ridgeboot/io.hpp"
#include "ridgeboot/prediction.hpp"
#include "ridgeboot/report.hpp"
#include "ridgeboot/simulation.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

namespace ridgeboot {
namespace {

constexpr std::uint64_t kDefaultSeed = 20240601;

// Flags without a value; a config file sets them with `key = true`.
const std::set<std::string> kSwitches = {"header", "cv", "full"};

struct Options {
  std::string command;
  std::string x, y, m, xf, out, config, gamma0, table;
  double rho = NAN;
  double b = NAN;
  double alpha = 0.05;
  int replicates = 500;
  std::uint64_t seed = kDefaultSeed;
  int threads = 0;
  bool header = false;
  std::string residuals = "fitted";
  std::string rho_grid, b_grid;
  int folds = 5;
  int case_id = 1;
  std::string target = "theta";
  std::string scale = "desk";
  bool full = false;
  int reps = 0;
  bool cv = false;
  double noise_scale = 1.0;
  std::string deltas = "0,0.05,0.1,0.2,0.3,0.5,0.75,1,1.5,2";

  // Options that appeared on the command line or in the config file.
  std::set<std::string> given;
  bool has(const std::string& name) const { return given.count(name) > 0; }
};

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string strip_dashes(std::string key) {
  while (!key.empty() && key.front() == '-') key.erase(key.begin());
  return key;
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    cell = trim(cell);
    if (cell.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(cell, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != cell.size() || !std::isfinite(v)) {
      throw InvalidArgument(std::string(what) + ": cannot parse '" + cell + "' as a number");
    }
    out.push_back(v);
  }
  return out;
}

// Splices config file entries in front of the command line so that flags
// given explicitly win.
std::vector<std::string> merge_config(const std::vector<std::string>& args) {
  std::string path;
  std::set<std::string> explicit_keys;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.rfind("--", 0) != 0) continue;
    const auto eq = a.find('=');
    const std::string key = strip_dashes(a.substr(0, eq));
    explicit_keys.insert(key);
    if (key == "config") {
      if (eq != std::string::npos) {
        path = a.substr(eq + 1);
      } else if (i + 1 < args.size()) {
        path = args[i + 1];
      }
    }
  }
  if (path.empty() || args.empty()) return args;

  std::vector<std::string> from_file;
  for (const auto& [key, value] : read_config_file(path)) {
    if (explicit_keys.count(key) || key == "config") continue;
    if (kSwitches.count(key)) {
      if (value == "true" || value == "1" || value.empty()) from_file.push_back("--" + key);
      else if (value != "false" && value != "0") {
        throw InvalidArgument(path + ": switch '" + key + "' takes true or false, got '" + value + "'");
      }
      continue;
    }
    from_file.push_back("--" + key);
    from_file.push_back(value);
  }
  std::vector<std::string> merged;
  merged.push_back(args.front());
  merged.insert(merged.end(), from_file.begin(), from_file.end());
  merged.insert(merged.end(), args.begin() + 1, args.end());
  return merged;
}

// -- report plumbing --------------------------------------------------------

Report header_report(const Options& o) {
  Report r;
  r.set("version", std::string(kVersion));
  r.set("command", o.command);
  r.set("seed", o.seed);
  return r;
}

void add_config(Report& r, const std::string& key, const std::string& value) {
  r.set("config." + key, value);
}
void add_config(Report& r, const std::string& key, double value) {
  r.set("config." + key, value);
}
void add_config(Report& r, const std::string& key, long long value) {
  r.set("config." + key, value);
}

void add_input_config(Report& r, const Options& o) {
  add_config(r, "x", o.x);
  add_config(r, "y", o.y);
  add_config(r, "m", o.m.empty() ? std::string("identity") : o.m);
  add_config(r, "header", std::string(o.header ? "true" : "false"));
  add_config(r, "threads", static_cast<long long>(o.threads));
}

void add_boot_config(Report& r, const Options& o) {
  add_config(r, "alpha", o.alpha);
  add_config(r, "replicates", static_cast<long long>(o.replicates));
}

void emit(const Report& r, const Options& o, std::ostream& out, const std::string& summary) {
  if (o.out.empty()) {
    r.write(out);
    return;
  }
  std::ofstream file(o.out);
  if (!file) throw DataError("cannot open '" + o.out + "' for writing");
  r.write(file);
  out << summary;
}

// -- shared steps -------------------------------------------------------------

ModelFrame load_frame(const Options& o) {
  Matrix x = read_matrix_csv(o.x, o.header);
  Vector y = read_vector_csv(o.y, o.header);
  if (y.size() != x.rows()) {
    throw DimensionError(o.y + ": response has " + std::to_string(y.size()) +
                         " entries, expected n = " + std::to_string(x.rows()) + " (rows of " + o.x +
                         ")");
  }
  std::optional<Matrix> m;
  if (!o.m.empty()) {
    m = read_matrix_csv(o.m, o.header);
    if (m->cols() != x.cols()) {
      throw DimensionError(o.m + ": combination matrix has " + std::to_string(m->cols()) +
                           " columns, expected p = " + std::to_string(x.cols()));
    }
  }
  return ModelFrame(std::move(x), std::move(y), std::move(m));
}

// Explicit (rho, b), or default-grid cross-validation when both are absent.
Hyperparams resolve_hyper(const Options& o, const ModelFrame& frame, Report& r) {
  const bool has_rho = o.has("rho");
  const bool has_b = o.has("b");
  if (has_rho != has_b) throw InvalidArgument("--rho and --b must be given together");
  Hyperparams h;
  if (has_rho) {
    h = {o.rho, o.b};
    add_config(r, "hyper_source", std::string("fixed"));
  } else {
    h = cross_validate(frame, default_grid(frame, o.folds, o.seed), o.threads).chosen;
    add_config(r, "hyper_source", std::string("cv"));
    add_config(r, "folds", static_cast<long long>(o.folds));
  }
  h.validate();
  add_config(r, "rho", h.rho);
  add_config(r, "b", h.threshold);
  return h;
}

void add_frame_info(Report& r, const ModelFrame& frame) {
  r.set("n", static_cast<long long>(frame.n()));
  r.set("p", static_cast<long long>(frame.p()));
  r.set("p1", static_cast<long long>(frame.p1()));
  r.set("rank", static_cast<long long>(frame.svd().rank()));
  r.set("lambda_r", frame.svd().smallest());
}

BootstrapConfig boot_config(const Options& o) {
  BootstrapConfig cfg;
  cfg.replicates = o.replicates;
  cfg.alpha = o.alpha;
  cfg.seed = o.seed;
  cfg.threads = o.threads;
  cfg.validate();
  return cfg;
}

// -- subcommands ----------------------------------------------------------------

int run_fit(const Options& o, std::ostream& out) {
  Report r = header_report(o);
  add_input_config(r, o);
  const ModelFrame frame = load_frame(o);
  const ImprovedFit fit = improved_fit(frame, resolve_hyper(o, frame, r));
  add_frame_info(r, frame);
  append_fit(r, fit);
  std::ostringstream summary;
  summary << "fit: " << fit.selected.size() << " of " << frame.p()
          << " coordinates selected, sigma2_hat = " << format_real(fit.sigma2_hat) << '\n';
  emit(r, o, out, summary.str());
  return kExitOk;
}

int run_cv(const Options& o, std::ostream& out) {
  Report r = header_report(o);
  add_input_config(r, o);
  const ModelFrame frame = load_frame(o);
  CvGrid grid = default_grid(frame, o.folds, o.seed);
  if (!o.rho_grid.empty()) grid.rho = parse_list(o.rho_grid, "--rho-grid");
  if (!o.b_grid.empty()) grid.threshold = parse_list(o.b_grid, "--b-grid");
  const CvReport cv = cross_validate(frame, grid, o.threads);
  add_config(r, "folds", static_cast<long long>(o.folds));
  add_config(r, "rho_grid", o.rho_grid.empty() ? std::string("default") : o.rho_grid);
  add_config(r, "b_grid", o.b_grid.empty() ? std::string("default") : o.b_grid);
  add_frame_info(r, frame);
  r.set("chosen_rho", cv.chosen.rho);
  r.set("chosen_b", cv.chosen.threshold);
  r.set("chosen_error", cv.chosen_error);
  Vector rho(static_cast<Eigen::Index>(cv.entries.size()));
  Vector b(rho.size());
  Vector err(rho.size());
  for (std::size_t i = 0; i < cv.entries.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    rho(k) = cv.entries[i].rho;
    b(k) = cv.entries[i].threshold;
    err(k) = cv.entries[i].mean_error;
  }
  r.set("grid_rho", rho);
  r.set("grid_b", b);
  r.set("grid_mean_error", err);
  if (!o.table.empty()) {
    std::ofstream file(o.table);
    if (!file) throw DataError("cannot open '" + o.table + "' for writing");
    write_cv_table(file, cv);
  }
  std::ostringstream summary;
  summary << "cv: rho = " << format_real(cv.chosen.rho) << ", b = "
          << format_real(cv.chosen.threshold) << ", mean error "
          << format_real(cv.chosen_error) << '\n';
  emit(r, o, out, summary.str());
  return kExitOk;
}

int run_infer(const Options& o, std::ostream& out) {
  Report r = header_report(o);
  add_input_config(r, o);
  add_boot_config(r, o);
  add_config(r, "gamma0", o.gamma0.empty() ? std::string("none") : o.gamma0);
  const ModelFrame frame = load_frame(o);
  const BootstrapConfig cfg = boot_config(o);
  std::optional<Vector> gamma0;
  if (!o.gamma0.empty()) {
    gamma0 = read_vector_csv(o.gamma0, o.header);
    if (gamma0->size() != frame.p1()) {
      throw DimensionError(o.gamma0 + ": has " + std::to_string(gamma0->size()) +
                           " entries, expected p1 = " + std::to_string(frame.p1()));
    }
  }
  const ImprovedFit fit = improved_fit(frame, resolve_hyper(o, frame, r));
  const auto [region, draws] = confidence_region(frame, fit, cfg);
  add_frame_info(r, frame);
  append_fit(r, fit);
  r.set("level", region.level);
  r.set("radius", region.radius);
  r.set("lower", region.lower());
  r.set("upper", region.upper());
  std::ostringstream summary;
  summary << "infer: radius " << format_real(region.radius) << " at level "
          << format_real(region.level);
  if (gamma0) {
    const TestResult test = test_from_draws(fit, *gamma0, draws, cfg.alpha);
    r.set("test_statistic", test.statistic);
    r.set("test_critical", test.critical);
    r.set("test_reject", test.reject);
    summary << ", test " << (test.reject ? "rejects" : "does not reject");
  }
  summary << '\n';
  emit(r, o, out, summary.str());
  return kExitOk;
}

int run_predict(const Options& o, std::ostream& out) {
  Report r = header_report(o);
  add_input_config(r, o);
  add_boot_config(r, o);
  add_config(r, "xf", o.xf);
  add_config(r, "residuals", o.residuals);
  const ModelFrame frame = load_frame(o);
  const BootstrapConfig cfg = boot_config(o);
  const Matrix xf = read_matrix_csv(o.xf, o.header);
  if (xf.cols() != frame.p()) {
    throw DimensionError(o.xf + ": has " + std::to_string(xf.cols()) +
                         " columns, expected p = " + std::to_string(frame.p()));
  }
  const Hyperparams hyper = resolve_hyper(o, frame, r);
  const ImprovedFit fit = improved_fit(frame, hyper);
  const EmpiricalCdf cdf =
      o.residuals == "loo" ? EmpiricalCdf(loo_residuals(frame, hyper)) : ecdf(fit);
  const auto [region, draws] = prediction_region(frame, fit, xf, cdf, cfg);
  add_frame_info(r, frame);
  r.set("rho", hyper.rho);
  r.set("threshold", hyper.threshold);
  r.set("selected", fit.selected);
  r.set("sigma2_hat", fit.sigma2_hat);
  r.set("level", region.level);
  r.set("y_hat", region.center);
  r.set("radius", region.radius);
  r.set("lower", region.lower());
  r.set("upper", region.upper());
  emit(r, o, out, "predict: " + std::to_string(xf.rows()) + " rows, radius " +
                      format_real(region.radius) + '\n');
  return kExitOk;
}

int run_simulate(const Options& o, std::ostream& out, std::ostream& err) {
  const Scale scale = (o.full || o.scale == "full") ? Scale::Full : Scale::Desk;
  SimCase c = reference_case(o.case_id, scale);
  c.target = o.target == "beta" ? Target::Beta : Target::Theta;
  if (o.has("reps")) c.reps = o.reps;
  if (o.has("replicates")) c.replicates = o.replicates;
  c.alpha = o.alpha;
  c.seed = o.seed;
  c.threads = o.threads;
  c.noise_scale = o.noise_scale;
  if (o.has("rho") != o.has("b")) throw InvalidArgument("--rho and --b must be given together");
  if (o.has("rho")) c.hyper = Hyperparams{o.rho, o.b};
  if (o.cv) c.hyper.reset();
  c.deltas = parse_list(o.deltas, "--deltas");
  c.validate();
  if (scale == Scale::Full) {
    err << "warning: full-scale simulation runs for hours\n";
  }

  const SimReport sim = run_case(c);
  Report r = header_report(o);
  add_config(r, "scale", std::string(scale == Scale::Full ? "full" : "desk"));
  add_config(r, "threads", static_cast<long long>(o.threads));
  add_config(r, "deltas", o.deltas);
  append_sim(r, sim);

  std::vector<double> rho_grid;
  for (int i = 0; i < 20; ++i) {
    rho_grid.push_back(std::pow(10.0, -3.0 + i * (std::log10(static_cast<double>(c.n)) + 3.0) / 19.0));
  }
  const std::vector<PathPoint> path = ridge_path(c, rho_grid, sim.hyper.threshold);

  if (o.out.empty()) {
    r.write(out);
    return kExitOk;
  }
  const std::filesystem::path dir(o.out);
  std::filesystem::create_directories(dir);
  {
    std::ofstream file(dir / "sim_report.csv");
    if (!file) throw DataError("cannot write into '" + o.out + "'");
    r.write(file);
  }
  {
    std::ofstream file(dir / "power.csv");
    file << "delta,power\n";
    for (const PowerPoint& pt : sim.power) {
      file << format_real(pt.delta) << ',' << format_real(pt.rejection_rate) << '\n';
    }
  }
  {
    std::ofstream file(dir / "ridge_path.csv");
    file << "rho,ridge,thresholded_ridge,debiased_ridge,debiased_thresholded\n";
    for (const PathPoint& pt : path) {
      file << format_real(pt.rho) << ',' << format_real(pt.ridge) << ','
           << format_real(pt.thresholded_ridge) << ',' << format_real(pt.debiased_ridge) << ','
           << format_real(pt.debiased_thresholded) << '\n';
    }
  }
  out << "simulate: case " << c.id << " (" << to_string(c.target) << "), coverage "
      << format_real(sim.coverage) << ", misspecification " << format_real(sim.misspecification)
      << ", prediction coverage " << format_real(sim.prediction_coverage) << '\n';
  return kExitOk;
}

// -- parser -------------------------------------------------------------------------

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config, "key = value file; command line overrides it")
      ->check(CLI::ExistingFile);
  sub->add_option("--seed", o.seed, "master seed");
  sub->add_option("--threads", o.threads, "worker threads (0: all cores)")
      ->check(CLI::Range(0, 4096));
  sub->add_option("--out", o.out, "output report path");
}

void add_data(CLI::App* sub, Options& o) {
  sub->add_option("--x", o.x, "design matrix CSV (n x p)")->required()->check(CLI::ExistingFile);
  sub->add_option("--y", o.y, "response CSV (n values)")->required()->check(CLI::ExistingFile);
  sub->add_option("--m", o.m, "combination matrix CSV (p1 x p); default identity")
      ->check(CLI::ExistingFile);
  sub->add_flag("--header", o.header, "input CSVs start with a header line");
  sub->add_option("--folds", o.folds, "folds for cross-validation")->check(CLI::Range(2, 1000));
}

void add_hyper(CLI::App* sub, Options& o) {
  sub->add_option("--rho", o.rho, "ridge parameter");
  sub->add_option("--b,--threshold", o.b, "hard threshold");
}

void add_boot(CLI::App* sub, Options& o) {
  sub->add_option("--alpha", o.alpha, "1 - confidence level")->check(CLI::Range(0.0, 1.0));
  sub->add_option("--replicates", o.replicates, "bootstrap replicates B")->check(CLI::PositiveNumber);
}

void record_given(const CLI::App* sub, Options& o) {
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->count() > 0) o.given.insert(strip_dashes(opt->get_name(false, false)));
  }
  // The --b option is also spelled --threshold.
  if (o.given.count("threshold")) o.given.insert("b");
}

}  // namespace

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path + ": cannot open config file");
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw DataError(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = strip_dashes(trim(line.substr(0, eq)));
    if (key.empty()) throw DataError(path + ":" + std::to_string(lineno) + ": empty key");
    out.emplace_back(std::move(key), trim(line.substr(eq + 1)));
  }
  return out;
}

int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  auto fail = [&](const char* kind, int code, std::string message) {
    for (char& ch : message) {
      if (ch == '\n' || ch == '\r') ch = ' ';
    }
    err << "error," << kind << ',' << code << ',' << message << '\n';
    return code;
  };

  Options o;
  CLI::App app{"Debiased, thresholded ridge regression with bootstrap inference", "ridgeboot"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  auto* fit = app.add_subcommand("fit", "fit the debiased, thresholded ridge estimator");
  add_common(fit, o);
  add_data(fit, o);
  add_hyper(fit, o);

  auto* cv = app.add_subcommand("cv", "cross-validate rho and b over a grid");
  add_common(cv, o);
  add_data(cv, o);
  cv->add_option("--rho-grid", o.rho_grid, "comma-separated rho values");
  cv->add_option("--b-grid", o.b_grid, "comma-separated threshold values");
  cv->add_option("--table", o.table, "also write the rho,b,mean_error table here");

  auto* infer = app.add_subcommand("infer", "simultaneous confidence region and test for M theta");
  add_common(infer, o);
  add_data(infer, o);
  add_hyper(infer, o);
  add_boot(infer, o);
  infer->add_option("--gamma0", o.gamma0, "null value of M theta (p1 values)")
      ->check(CLI::ExistingFile);

  auto* predict = app.add_subcommand("predict", "simultaneous prediction region at new rows");
  add_common(predict, o);
  add_data(predict, o);
  add_hyper(predict, o);
  add_boot(predict, o);
  predict->add_option("--xf", o.xf, "new design rows CSV (p1 x p)")
      ->required()
      ->check(CLI::ExistingFile);
  predict->add_option("--residuals", o.residuals, "residuals to resample")
      ->check(CLI::IsMember({"fitted", "loo"}));

  auto* sim = app.add_subcommand("simulate", "Monte-Carlo study of one of the six cases");
  add_common(sim, o);
  add_boot(sim, o);
  auto* sim_rho = sim->add_option("--rho", o.rho, "ridge parameter (overrides the case default)");
  auto* sim_b = sim->add_option("--b,--threshold", o.b, "hard threshold");
  sim->add_option("--case", o.case_id, "case 1..6")->check(CLI::Range(1, 6));
  sim->add_option("--target", o.target, "parameter the combinations are measured against")
      ->check(CLI::IsMember({"theta", "beta"}));
  auto* scale = sim->add_option("--scale", o.scale, "problem size")
                    ->check(CLI::IsMember({"desk", "full"}));
  sim->add_flag("--full", o.full, "same as --scale full")->excludes(scale);
  sim->add_option("--reps", o.reps, "Monte-Carlo replications R")->check(CLI::PositiveNumber);
  sim->add_flag("--cv", o.cv, "choose rho and b by 5-fold cross-validation")
      ->excludes(sim_rho)
      ->excludes(sim_b);
  sim->add_option("--noise-scale", o.noise_scale, "multiplier on the error sd")
      ->check(CLI::NonNegativeNumber);
  sim->add_option("--deltas", o.deltas, "comma-separated shifts for the power curve");

  try {
    std::vector<std::string> merged = merge_config(args);
    std::vector<std::string> reversed(merged.rbegin(), merged.rend());
    app.parse(std::move(reversed));
    for (CLI::App* sub : app.get_subcommands()) {
      o.command = sub->get_name();
      record_given(sub, o);
    }
    if (o.command == "fit") return run_fit(o, out);
    if (o.command == "cv") return run_cv(o, out);
    if (o.command == "infer") return run_infer(o, out);
    if (o.command == "predict") return run_predict(o, out);
    return run_simulate(o, out, err);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return fail("usage", kExitUsage, e.what());
  } catch (const InvalidArgument& e) {
    return fail(e.kind(), kExitUsage, e.what());
  } catch (const DataError& e) {
    return fail(e.kind(), kExitData, e.what());
  } catch (const DimensionError& e) {
    return fail(e.kind(), kExitData, e.what());
  } catch (const NumericalError& e) {
    return fail(e.kind(), kExitNumerical, e.what());
  } catch (const std::exception& e) {
    return fail("internal", kExitNumerical, e.what());
  }
}

int parse_and_dispatch(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return parse_and_dispatch(args, std::cout, std::cerr);
}

}  // namespace ridgeboot
