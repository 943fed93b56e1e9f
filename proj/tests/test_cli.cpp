// End-to-end checks of the command-line tool: exit codes, output formats and
// byte-level reproducibility.  Runs the built binary via std::system.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "dqest/elliptical.hpp"
#include "dqest/tsboot.hpp"

namespace {

const std::string kCli = DQEST_CLI_PATH;
const std::string kTmp = DQEST_TEST_TMPDIR;

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string out_path = kTmp + "/cli_out.txt";
  const std::string cmd = kCli + " " + args + " > " + out_path + " 2>" + kTmp + "/cli_err.txt";
  const int status = std::system(cmd.c_str());
  RunResult res;
  res.exit_code = WEXITSTATUS(status);
  std::ifstream in(out_path);
  std::stringstream ss;
  ss << in.rdbuf();
  res.out = ss.str();
  return res;
}

std::string write_normal_csv(const std::string& name, int n_cols, std::int64_t rows,
                             std::uint64_t seed) {
  using namespace dqest;
  const EllipticalModel model(Family::NORMAL, Eigen::VectorXd::Zero(n_cols),
                              equicorr_sigma(n_cols, 0.3));
  const LossSample draws = model.sample(rows, seed);
  const std::string path = kTmp + "/" + name;
  std::ofstream out(path);
  out.precision(17);
  for (Eigen::Index k = 0; k < draws.rows(); ++k) {
    for (Eigen::Index i = 0; i < draws.cols(); ++i) {
      out << draws.data()(k, i) << (i + 1 < draws.cols() ? "," : "\n");
    }
  }
  return path;
}

double json_number_after(const std::string& doc, const std::string& key) {
  const auto pos = doc.find("\"" + key + "\"");
  REQUIRE(pos != std::string::npos);
  const auto colon = doc.find(':', pos);
  return std::strtod(doc.c_str() + colon + 1, nullptr);
}

}  // namespace

TEST_CASE("truth subcommand reproduces closed forms") {
  const auto res = run_cli("truth --index dq-var --family normal --n 5 --r 0.3 --alpha 0.1");
  CHECK(res.exit_code == 0);
  CHECK(std::fabs(json_number_after(res.out, "value") - 0.27) < 0.005);

  const auto t = run_cli("truth --index dq-es --family t --nu 3 --n 5 --r 0.3 --alpha 0.1");
  CHECK(t.exit_code == 0);
  CHECK(std::fabs(json_number_after(t.out, "value") - 0.36) < 0.005);
}

TEST_CASE("estimate subcommand on generated CSVs") {
  const std::string five = write_normal_csv("five.csv", 5, 5000, 99);
  const auto res = run_cli("estimate --input " + five + " --alpha 0.1 --index dq-var");
  CHECK(res.exit_code == 0);
  CHECK(std::fabs(json_number_after(res.out, "value") - 0.27) < 0.06);

  // single column: every DQ index is 1 (comonotonic singleton)
  const std::string one = write_normal_csv("one.csv", 1, 400, 5);
  for (const std::string idx : {"dq-var", "dq-es", "dq-ex"}) {
    const auto single = run_cli("estimate --input " + one + " --alpha 0.1 --index " + idx);
    CHECK(single.exit_code == 0);
    CHECK(std::fabs(json_number_after(single.out, "value") - 1.0) < 1e-6);
  }

  // concatenating a dataset with itself leaves dq-var unchanged
  const std::string doubled = kTmp + "/doubled.csv";
  {
    std::ifstream in(five);
    std::stringstream ss;
    ss << in.rdbuf();
    std::ofstream out(doubled);
    out << ss.str() << ss.str();
  }
  const auto once = run_cli("estimate --input " + five + " --alpha 0.1 --index dq-var");
  const auto twice = run_cli("estimate --input " + doubled + " --alpha 0.1 --index dq-var");
  CHECK(json_number_after(once.out, "value") == json_number_after(twice.out, "value"));
}

TEST_CASE("estimate rejects malformed input with exit 2") {
  const std::string bad = kTmp + "/bad.csv";
  {
    std::ofstream out(bad);
    out << "1.0,2.0\nnan,3.0\n4.0,5.0\n";
  }
  CHECK(run_cli("estimate --input " + bad + " --index dq-var").exit_code == 2);
  CHECK(run_cli("estimate --input /missing.csv --index dq-var").exit_code == 2);
  // dq-ex outside its canonical range without the override flag
  const std::string five = write_normal_csv("five2.csv", 3, 100, 2);
  CHECK(run_cli("estimate --input " + five + " --alpha 0.6 --index dq-ex").exit_code == 2);
}

TEST_CASE("computation errors map to exit 3, assumption violations to exit 4") {
  using namespace dqest;
  // centered data: marginal VaRs sum to exactly zero
  const EllipticalModel model(Family::NORMAL, Eigen::VectorXd::Zero(3), equicorr_sigma(3, 0.3));
  const LossSample draws = model.sample(500, 77);
  Eigen::MatrixXd centered = draws.data();
  for (Eigen::Index i = 0; i < 3; ++i) {
    centered.col(i).array() -= empirical_var(draws.column_sample(i), RiskLevel(0.1));
  }
  const std::string path = kTmp + "/centered.csv";
  {
    std::ofstream out(path);
    out.precision(17);
    for (Eigen::Index k = 0; k < centered.rows(); ++k) {
      for (Eigen::Index i = 0; i < centered.cols(); ++i) {
        out << centered(k, i) << (i + 1 < centered.cols() ? "," : "\n");
      }
    }
  }
  CHECK(run_cli("estimate --input " + path + " --alpha 0.1 --index dr-var").exit_code == 3);

  // antithetic pair: row sums are all zero, the alpha* equation has no root
  const std::string anti = kTmp + "/anti.csv";
  {
    const LossSample one_col = model.sample(300, 3);
    std::ofstream out(anti);
    out.precision(17);
    for (Eigen::Index k = 0; k < one_col.rows(); ++k) {
      out << one_col.data()(k, 0) << "," << -one_col.data()(k, 0) << "\n";
    }
  }
  CHECK(run_cli("variance --input " + anti + " --alpha 0.1 --index dq-es").exit_code == 4);
}

TEST_CASE("variance subcommand on the analytic model") {
  const auto res = run_cli(
      "variance --index dr-var --family normal --n 5 --r 0.3 --alpha 0.1 --mc-draws 200000");
  CHECK(res.exit_code == 0);
  CHECK(std::fabs(json_number_after(res.out, "sigma2") - 0.43) < 0.04);
  CHECK(res.out.find("a_vec") != std::string::npos);
  CHECK(res.out.find("cov_mat") != std::string::npos);
}

TEST_CASE("simulate output is byte-identical across runs") {
  const std::string args =
      "simulate --index dq-var --family normal --n 3 --r 0.3 --alpha 0.1 --samples 500 "
      "--reps 5 --seed 7 --mc-draws 50000";
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("\"seed\": 7") != std::string::npos);

  // seed fallback through the environment variable
  const std::string env_cmd = "DQEST_SEED=7 " + kCli +
                              " simulate --index dq-var --family normal --n 3 --r 0.3 "
                              "--alpha 0.1 --samples 500 --reps 5 --mc-draws 50000 > " +
                              kTmp + "/env_out.txt 2>/dev/null";
  REQUIRE(std::system(env_cmd.c_str()) == 0);
  std::ifstream in(kTmp + "/env_out.txt");
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == a.out);
}

TEST_CASE("simulate sweep and shift-sweep emit tables") {
  const auto curve = run_cli(
      "simulate --index dq-var --family normal --alpha 0.1 --sweep alpha "
      "--grid 0.1,0.2 --mc-draws 50000 --output csv");
  CHECK(curve.exit_code == 0);
  CHECK(curve.out.rfind("alpha,sigma2", 0) == 0);

  const auto sweep = run_cli(
      "simulate --index dr-var --family normal --n 3 --alpha 0.1 --shift-sweep "
      "--eps-grid 10,0.5 --mc-draws 50000 --output csv");
  CHECK(sweep.exit_code == 0);
  CHECK(sweep.out.rfind("eps,sigma2_var,sigma2_es", 0) == 0);
}

TEST_CASE("rolldq runs on a small synthetic panel") {
  using namespace dqest;
  GarchParams p;
  p.c = 0.0;
  p.phi = 0.1;
  p.omega = 0.05;
  p.alpha_g = 0.08;
  p.beta_g = 0.9;
  p.nu = 6.0;
  const auto a = simulate_ar_garch(p, 140, 1);
  const auto b = simulate_ar_garch(p, 140, 2);
  const std::string path = kTmp + "/roll_panel.csv";
  {
    std::ofstream out(path);
    out << "date,AA,BB\n";
    out.precision(17);
    for (int k = 0; k < 140; ++k) {
      out << "2021-" << 1 + k / 28 << "-" << 1 + k % 28 << "," << a[static_cast<std::size_t>(k)]
          << "," << b[static_cast<std::size_t>(k)] << "\n";
    }
  }
  const auto res = run_cli("rolldq --input " + path +
                           " --index dq-var --alpha 0.1 --window 60 --step 40 --boot-reps 30 "
                           "--seed 3 --output csv");
  CHECK(res.exit_code == 0);
  CHECK(res.out.rfind("date,estimate,boot_mean,ci_lo,ci_hi,boot_var", 0) == 0);
  // two windows end at rows 60 and 100 and 140
  int lines = 0;
  for (char ch : res.out) {
    if (ch == '\n') ++lines;
  }
  CHECK(lines == 4);  // header + 3 windows
}
