#include "helpers.hpp"

#include "ridgeboot/cli.hpp"
#include "ridgeboot/error.hpp"
#include "ridgeboot/io.hpp"
#include "ridgeboot/report.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace ridgeboot;
using testing::TempDir;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Run r;
  r.code = parse_and_dispatch(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

Report load_report(const std::string& path) {
  std::ifstream in(path);
  return Report::parse(in);
}

std::string csv(const Matrix& m) {
  std::ostringstream os;
  write_matrix_csv(os, m);
  return os.str();
}

// Small regression problem written to disk.
struct Dataset {
  TempDir dir{"cli"};
  std::string x, y, m, xf, gamma0;

  Dataset() {
    Stream rng(77, 0);
    const Matrix design = testing::gaussian_matrix(rng, 40, 6);
    Vector beta = Vector::Zero(6);
    beta.head(2) << 2.0, -1.5;
    const Vector resp = design * beta + testing::gaussian_vector(rng, 40);
    const Matrix comb = testing::gaussian_matrix(rng, 3, 6);
    x = dir.file("x.csv", csv(design));
    y = dir.file("y.csv", csv(resp));
    m = dir.file("m.csv", csv(comb));
    xf = dir.file("xf.csv", csv(design.topRows(4)));
    gamma0 = dir.file("gamma0.csv", csv(comb * beta));
  }
};

}  // namespace

TEST_SUITE("io") {

TEST_CASE("csv parsing") {
  std::istringstream in("a,b\n1, 2\n\n3,4.5e0\n");
  const Matrix m = parse_matrix_csv(in, "mem", true);
  REQUIRE(m.rows() == 2);
  REQUIRE(m.cols() == 2);
  CHECK(m(1, 1) == 4.5);
  CHECK(m(0, 1) == 2.0);
}

TEST_CASE("csv errors carry their location") {
  std::istringstream bad("1,2\n3,oops\n");
  try {
    parse_matrix_csv(bad, "data.csv");
    FAIL("expected a DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("data.csv:2:2") != std::string::npos);
  }
  std::istringstream ragged("1,2\n3\n");
  try {
    parse_matrix_csv(ragged, "r.csv");
    FAIL("expected a DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("expected 2 columns, found 1") != std::string::npos);
  }
  std::istringstream nan("1,nan\n");
  CHECK_THROWS_AS(parse_matrix_csv(nan, "n.csv"), DataError);
  std::istringstream empty("\n\n");
  CHECK_THROWS_AS(parse_matrix_csv(empty, "e.csv"), DataError);
  CHECK_THROWS_AS(read_matrix_csv("/nonexistent/file.csv"), DataError);
}

TEST_CASE("matrix round trip is exact") {
  Stream rng(1, 0);
  const Matrix m = testing::gaussian_matrix(rng, 5, 3);
  TempDir dir("io");
  const std::string path = dir.file("m.csv", csv(m));
  CHECK(read_matrix_csv(path) == m);
  const std::string wide = dir.file("w.csv", "1,2\n");
  CHECK_THROWS_AS(read_vector_csv(wide), DataError);
}

TEST_CASE("report round trip") {
  Report r;
  r.set("name", std::string("a,\"quoted\" value"));
  r.set("x", 0.1);
  r.set("v", Vector::LinSpaced(3, 1.0, 3.0));
  r.set("s", IndexSet{2, 5});
  r.set("flag", true);
  r.set("x", 1.0 / 3.0);
  std::istringstream in(r.str());
  const Report back = Report::parse(in);
  CHECK(back.at("name").front() == "a,\"quoted\" value");
  CHECK(back.number("x") == 1.0 / 3.0);
  CHECK(back.at("v").size() == 3);
  CHECK(back.at("s") == std::vector<std::string>{"2", "5"});
  CHECK(back.at("flag").front() == "true");
  CHECK(back.rows().size() == 5);
  CHECK_THROWS_AS(back.at("missing"), InvalidArgument);
  CHECK(std::stod(format_real(0.1)) == 0.1);
}

}  // TEST_SUITE

TEST_SUITE("cli") {

TEST_CASE("fit writes a report with the estimate and its provenance") {
  Dataset d;
  const std::string out = d.dir.path("fit.csv");
  const Run r = run({"fit", "--x", d.x, "--y", d.y, "--rho", "1.0", "--b", "0.5", "--out", out});
  REQUIRE(r.code == 0);
  CHECK(r.err.empty());
  const Report rep = load_report(out);
  CHECK(rep.at("theta_hat").size() == 6);
  CHECK(rep.at("selected") == std::vector<std::string>{"0", "1"});
  CHECK(rep.number("sigma2_hat") > 0.0);
  CHECK(rep.at("version").front() == kVersion);
  CHECK(rep.number("seed") == 20240601.0);
  CHECK(rep.number("config.rho") == 1.0);
  CHECK(rep.number("config.b") == 0.5);
  CHECK(rep.at("config.x").front() == d.x);
}

TEST_CASE("missing response is a usage error") {
  Dataset d;
  const Run r = run({"fit", "--x", d.x, "--rho", "1", "--b", "0.5"});
  CHECK(r.code == 2);
  CHECK(r.err.rfind("error,usage,2,", 0) == 0);
  CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
}

TEST_CASE("response length mismatch names both sizes") {
  Dataset d;
  const std::string short_y = d.dir.file("short.csv", "1\n2\n3\n");
  const Run r = run({"fit", "--x", d.x, "--y", short_y, "--rho", "1", "--b", "0.5"});
  CHECK(r.code == 3);
  CHECK(r.err.find("has 3 entries") != std::string::npos);
  CHECK(r.err.find("n = 40") != std::string::npos);
}

TEST_CASE("malformed csv reports line and column") {
  Dataset d;
  const std::string bad = d.dir.file("bad.csv", "1,2,3,4,5,6\n1,2,x,4,5,6\n");
  const Run r = run({"fit", "--x", bad, "--y", d.y, "--rho", "1", "--b", "0.5"});
  CHECK(r.code == 3);
  CHECK(r.err.find("bad.csv:2:3") != std::string::npos);
}

TEST_CASE("usage errors") {
  Dataset d;
  CHECK(run({"fit", "--x", d.x, "--y", d.y, "--bogus"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"explode"}).code == 2);
  CHECK(run({"fit", "--x", d.x, "--y", d.y, "--rho", "1"}).code == 2);
  CHECK(run({"fit", "--x", d.dir.path("nope.csv"), "--y", d.y}).code == 2);
  CHECK(run({"infer", "--x", d.x, "--y", d.y, "--rho", "1", "--b", "0.5", "--alpha", "2"}).code == 2);
  CHECK(run({"predict", "--x", d.x, "--y", d.y, "--xf", d.xf, "--residuals", "other"}).code == 2);
  CHECK(run({"simulate", "--case", "9"}).code == 2);
  CHECK(run({"simulate", "--cv", "--rho", "1"}).code == 2);
  CHECK(run({"fit", "--x", d.x, "--y", d.y, "--rho", "-1", "--b", "0.5"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("rank-zero design is a numerical error") {
  Dataset d;
  const std::string zeros = d.dir.file("z.csv", csv(Matrix::Zero(40, 6)));
  const Run r = run({"fit", "--x", zeros, "--y", d.y, "--rho", "1", "--b", "0.5"});
  CHECK(r.code == 4);
  CHECK(r.err.rfind("error,numerical,4,", 0) == 0);
}

TEST_CASE("combination matrix with the wrong width") {
  Dataset d;
  const std::string m = d.dir.file("m5.csv", csv(Matrix::Ones(2, 5)));
  const Run r = run({"fit", "--x", d.x, "--y", d.y, "--m", m, "--rho", "1", "--b", "0.5"});
  CHECK(r.code == 3);
  CHECK(r.err.find("expected p = 6") != std::string::npos);
}

TEST_CASE("config file supplies flags and the command line wins") {
  Dataset d;
  const std::string cfg = d.dir.file("run.cfg", "# settings\nrho = 3\n--b = 0.5\nheader = false\n");
  const std::string out = d.dir.path("fit.csv");
  REQUIRE(run({"fit", "--config", cfg, "--x", d.x, "--y", d.y, "--rho", "2", "--out", out}).code == 0);
  const Report rep = load_report(out);
  CHECK(rep.number("config.rho") == 2.0);
  CHECK(rep.number("config.b") == 0.5);

  const std::string broken = d.dir.file("broken.cfg", "rho 3\n");
  CHECK(run({"fit", "--config", broken, "--x", d.x, "--y", d.y}).code == 3);
}

TEST_CASE("fit without hyperparameters cross-validates") {
  Dataset d;
  const Run r = run({"fit", "--x", d.x, "--y", d.y, "--folds", "4"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  const Report rep = Report::parse(in);
  CHECK(rep.at("config.hyper_source").front() == "cv");
  CHECK(rep.number("config.rho") > 0.0);
}

TEST_CASE("infer reports the region and the test") {
  Dataset d;
  const std::string out = d.dir.path("infer.csv");
  const std::vector<std::string> args{"infer", "--x", d.x, "--y", d.y, "--m", d.m,
                                      "--rho", "1", "--b", "0.5", "--replicates", "200",
                                      "--gamma0", d.gamma0, "--seed", "5", "--out", out};
  REQUIRE(run(args).code == 0);
  const Report rep = load_report(out);
  CHECK(rep.at("gamma_hat").size() == 3);
  CHECK(rep.at("lower").size() == 3);
  CHECK(rep.number("radius") > 0.0);
  CHECK(rep.at("test_reject").front() == "false");
  CHECK(rep.number("seed") == 5.0);
  CHECK(rep.number("config.replicates") == 200.0);

  // Same seed, different thread count: identical report.
  std::vector<std::string> threaded = args;
  threaded.back() = d.dir.path("infer2.csv");
  threaded.insert(threaded.end() - 2, {"--threads", "3"});
  REQUIRE(run(threaded).code == 0);
  Report a = load_report(out);
  Report b = load_report(threaded.back());
  a.set("config.threads", std::string());
  b.set("config.threads", std::string());
  CHECK(a.str() == b.str());

  const std::string wrong = d.dir.file("g2.csv", "1\n2\n");
  CHECK(run({"infer", "--x", d.x, "--y", d.y, "--m", d.m, "--rho", "1", "--b", "0.5",
             "--gamma0", wrong}).code == 3);
}

TEST_CASE("predict with fitted and leave-one-out residuals") {
  Dataset d;
  for (const char* kind : {"fitted", "loo"}) {
    const std::string out = d.dir.path(std::string("pred_") + kind + ".csv");
    REQUIRE(run({"predict", "--x", d.x, "--y", d.y, "--xf", d.xf, "--rho", "1", "--b", "0.5",
                 "--replicates", "100", "--residuals", kind, "--out", out})
                .code == 0);
    const Report rep = load_report(out);
    CHECK(rep.at("y_hat").size() == 4);
    CHECK(rep.at("config.residuals").front() == kind);
    CHECK(rep.number("radius") > 0.0);
  }
}

TEST_CASE("cv emits the grid and the chosen pair") {
  Dataset d;
  const std::string table = d.dir.path("grid.csv");
  const Run r = run({"cv", "--x", d.x, "--y", d.y, "--rho-grid", "0.1,1,10", "--b-grid", "0,0.5",
                     "--folds", "4", "--table", table});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  const Report rep = Report::parse(in);
  CHECK(rep.at("grid_rho").size() == 6);
  CHECK(rep.number("chosen_b") >= 0.0);
  std::ifstream t(table);
  std::string header;
  std::getline(t, header);
  CHECK(header == "rho,b,mean_error");
  CHECK(run({"cv", "--x", d.x, "--y", d.y, "--rho-grid", "1,abc"}).code == 2);
}

TEST_CASE("simulate writes report, power and path files") {
  TempDir dir("sim");
  const std::string out = dir.path("case1");
  const Run r = run({"simulate", "--case", "1", "--reps", "4", "--replicates", "20", "--threads",
                     "1", "--deltas", "0,1", "--out", out});
  REQUIRE(r.code == 0);
  const Report rep = load_report(out + "/sim_report.csv");
  CHECK(rep.number("reps") == 4.0);
  CHECK(rep.number("config.threads") == 1.0);
  CHECK(rep.at("version").front() == kVersion);
  std::ifstream power(out + "/power.csv");
  std::string line;
  std::getline(power, line);
  CHECK(line == "delta,power");
  int rows = 0;
  while (std::getline(power, line)) ++rows;
  CHECK(rows == 2);
  std::ifstream path(out + "/ridge_path.csv");
  std::getline(path, line);
  CHECK(line == "rho,ridge,thresholded_ridge,debiased_ridge,debiased_thresholded");
}

TEST_CASE("config reader") {
  TempDir dir("cfg");
  const auto pairs = read_config_file(dir.file("a.cfg", " alpha = 0.1 \n\n# x\n--seed=3\n"));
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0] == std::pair<std::string, std::string>{"alpha", "0.1"});
  CHECK(pairs[1] == std::pair<std::string, std::string>{"seed", "3"});
}

}  // TEST_SUITE
