#include <sys/wait.h>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace {

const std::string kCli = NLSGD_CLI_PATH;
const std::string kTmp = "cli_test_tmp";

int run_cli(const std::string& args, const std::string& capture) {
  std::string cmd = "\"" + kCli + "\" " + args + " > " + capture + " 2>&1";
  int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  REQUIRE(WIFEXITED(rc));
  return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  REQUIRE(f.good());
  f << text;
}

const char* kRunConfig = R"(
[problem]
name = quadratic
d = 2
x_init = 2
[noise]
family = poly_tail
alpha = 3
[nonlinearity]
family = sign
[estimator]
kind = sgd
[run]
a = 0.05
eta = 0.5
T = 64
trials = 8
seed = 123
[analysis]
deltas = 0.25
t_min = 4
)";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("constants subcommand prints the closed-form table") {
  std::filesystem::create_directories(kTmp);
  std::string out = kTmp + "/constants.txt";
  CHECK(run_cli("constants --alpha 3 --d 4", out) == 0);
  std::string text = slurp(out);
  CHECK(text.find("gamma1=0.166667") != std::string::npos);
  CHECK(text.find("gamma2=0.25") != std::string::npos);
  CHECK(text.find("beta1=0.0754459") != std::string::npos);
  CHECK(text.find("J_alpha=0.340817") != std::string::npos);
}

TEST_CASE("run outputs are byte-identical across reruns and worker counts") {
  std::filesystem::create_directories(kTmp);
  std::string cfg = kTmp + "/run.ini";
  write_file(cfg, kRunConfig);
  CHECK(run_cli("run --config " + cfg + " --out " + kTmp + "/o1 --workers 1",
                kTmp + "/run1.txt") == 0);
  CHECK(run_cli("run --config " + cfg + " --out " + kTmp + "/o2 --workers 4",
                kTmp + "/run2.txt") == 0);
  CHECK(slurp(kTmp + "/o1/summaries.csv") == slurp(kTmp + "/o2/summaries.csv"));
  CHECK(slurp(kTmp + "/o1/quantiles.csv") == slurp(kTmp + "/o2/quantiles.csv"));
  CHECK(slurp(kTmp + "/o1/ratefit.csv") == slurp(kTmp + "/o2/ratefit.csv"));
  CHECK(std::filesystem::exists(kTmp + "/o1/run_meta.json"));

  // A seed override changes the trials.
  CHECK(run_cli("run --config " + cfg + " --out " + kTmp + "/o3 --seed 9",
                kTmp + "/run3.txt") == 0);
  CHECK(slurp(kTmp + "/o3/summaries.csv") != slurp(kTmp + "/o1/summaries.csv"));
}

TEST_CASE("ratefit recovers a synthetic decay exponent") {
  std::string dir = kTmp + "/rf";
  std::filesystem::create_directories(dir);
  std::ostringstream csv;
  csv.precision(17);
  csv << "t,delta,metric,quantile\n";
  for (int k = 2; k <= 12; ++k) {
    double t = std::pow(2.0, k);
    csv << (std::uint64_t)t << ",0.1,avg_min_metric," << 3.0 / std::sqrt(t) << "\n";
    csv << (std::uint64_t)t << ",0.1,min_grad_sq," << 9.0 / t << "\n";
  }
  write_file(dir + "/quantiles.csv", csv.str());
  auto fitted_slope = [&](const std::string& metric) {
    std::string out = kTmp + "/ratefit.txt";
    REQUIRE(run_cli("ratefit --out " + dir + " --t-min 16 --delta 0.1 --metric " + metric,
                    out) == 0);
    std::string text = slurp(out);
    auto pos = text.find("slope=");
    REQUIRE(pos != std::string::npos);
    return std::stod(text.substr(pos + 6));
  };
  CHECK(fitted_slope("avg_min_metric") == doctest::Approx(-0.5).epsilon(1e-9));
  CHECK(fitted_slope("min_grad_sq") == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("verify passes for a supported pair and writes its table") {
  std::filesystem::create_directories(kTmp);
  std::string cfg = kTmp + "/verify.ini";
  write_file(cfg,
             "[problem]\nname = quadratic\nd = 1\nx_init = 1\n"
             "[noise]\nfamily = poly_tail\nalpha = 3\n"
             "[nonlinearity]\nfamily = sign\n"
             "[estimator]\nkind = sgd\n"
             "[run]\nseed = 5\ntrials = 100\n"
             "[analysis]\nn_samples = 50000\nprobes = 20\n");
  std::string out = kTmp + "/verify.txt";
  CHECK(run_cli("verify --config " + cfg + " --out " + kTmp + "/v1", out) == 0);
  std::string text = slurp(out);
  CHECK(text.find("VERIFY PASS") != std::string::npos);
  CHECK(text.find("lower_bound") != std::string::npos);
  std::string csv = slurp(kTmp + "/v1/verify.csv");
  CHECK(csv.rfind("check,probe,lhs,rhs,se,pass\n", 0) == 0);
}

TEST_CASE("verify flags a broken symmetry assumption with exit code 2") {
  std::filesystem::create_directories(kTmp);
  std::string cfg = kTmp + "/verify_bad.ini";
  write_file(cfg,
             "[problem]\nname = quadratic\nd = 1\nx_init = 1\n"
             "[noise]\nfamily = centered_exponential\nlambda = 1\n"
             "[nonlinearity]\nfamily = sign\n"
             "[estimator]\nkind = sgd\n"
             "[run]\nseed = 5\ntrials = 100\n"
             "[analysis]\nn_samples = 50000\n");
  std::string out = kTmp + "/verify_bad.txt";
  CHECK(run_cli("verify --config " + cfg + " --out " + kTmp + "/v2", out) == 2);
  CHECK(slurp(out).find("VERIFY FAIL") != std::string::npos);
}

TEST_CASE("config and usage errors exit with code 1") {
  std::filesystem::create_directories(kTmp);
  std::string out = kTmp + "/err.txt";
  CHECK(run_cli("run --config /nonexistent.ini --out " + kTmp + "/e1", out) == 1);
  CHECK(slurp(out).find("config error") != std::string::npos);

  std::string cfg = kTmp + "/bad.ini";
  write_file(cfg, "[problem]\nwhatsit = 1\n");
  CHECK(run_cli("run --config " + cfg + " --out " + kTmp + "/e2", out) == 1);
  CHECK(slurp(out).find("unknown key") != std::string::npos);

  CHECK(run_cli("", out) == 1);                       // missing subcommand
  CHECK(run_cli("run", out) == 1);                    // missing --config
  CHECK(run_cli("constants --alpha 3", out) == 1);    // missing --d
  CHECK(run_cli("ratefit --out " + kTmp + "/nope --metric bogus", out) == 1);
}

TEST_CASE("report summarizes a finished run directory") {
  // Depends on the run test's o1 directory; rebuild it if the order changed.
  std::string cfg = kTmp + "/run.ini";
  if (!std::filesystem::exists(kTmp + "/o1/run_meta.json")) {
    std::filesystem::create_directories(kTmp);
    write_file(cfg, kRunConfig);
    REQUIRE(run_cli("run --config " + cfg + " --out " + kTmp + "/o1 --workers 1",
                    kTmp + "/run1.txt") == 0);
  }
  std::string out = kTmp + "/report.txt";
  CHECK(run_cli("report --out " + kTmp + "/o1", out) == 0);
  std::string text = slurp(out);
  CHECK(text.find("run report") != std::string::npos);
  CHECK(text.find("poly_tail(alpha=3)") != std::string::npos);
  CHECK(text.find("rate fits") != std::string::npos);

  CHECK(run_cli("report --out " + kTmp + "/definitely_missing", out) == 1);
}

}
