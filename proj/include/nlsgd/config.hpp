#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlsgd/estimator.hpp"
#include "nlsgd/noise.hpp"
#include "nlsgd/nonlinearity.hpp"
#include "nlsgd/problems.hpp"

namespace nlsgd {

struct ProblemSpec {
  std::string name = "quadratic";
  int d = 1;
  std::string x_init = "0";  // scalar fill or comma-separated vector
  int n = 200;               // logistic_synthetic sample count
  double ridge = 0.01;
};

struct NoiseSpec {
  std::string family = "gaussian";
  double alpha = 3.0;
  double scale = 1.0;
  double nu = 3.0;
  double lambda = 1.0;
  double shape = 2.0;
  double sigma = 1.0;
  std::string state_dependence = "none";
};

struct NonlinSpec {
  std::string family = "sign";
  std::optional<double> M, k, eps, R;
};

struct EstimatorSpec {
  std::string kind = "sgd";
  double p = 1.5;
  std::string reference = "x_init";
};

struct RunSpec {
  std::string a = "auto";  // "auto" resolves to step_cap
  double eta = 0.5;
  std::uint64_t T = 1024;
  int trials = 1;
  std::uint64_t seed = 12345;
  bool record_trajectory = false;
  std::vector<std::uint64_t> checkpoints;  // empty = powers of two plus T
};

struct AnalysisSpec {
  std::vector<double> deltas{0.1};
  std::uint64_t t_min = 64;
  std::uint64_t n_samples = 1000000;
  int probes = 100;
  std::vector<std::uint64_t> batches{4, 16, 64, 256};
};

struct ExperimentSpec {
  ProblemSpec problem;
  NoiseSpec noise;
  NonlinSpec nonlinearity;
  EstimatorSpec estimator;
  RunSpec run;
  AnalysisSpec analysis;
  std::vector<std::string> warnings;  // filled by validation
};

// Parse failure with a "file:line: message" diagnostic where applicable.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sectioned key = value text; '#'/';' comments; unknown sections/keys are
// errors. Validates invariants and records resolution warnings on the spec.
ExperimentSpec parse_config_text(const std::string& text, const std::string& filename);
ExperimentSpec parse_config_file(const std::string& path);

// Scalar fill ("0.5") or explicit d-component vector ("1,0,-2").
Vec parse_x_init(const std::string& text, int d);

std::unique_ptr<Problem> build_problem(const ProblemSpec& spec, std::uint64_t seed);
NoiseModel build_noise(const NoiseSpec& spec, int d);
NonlinearMap build_map(const NonlinSpec& spec);
EstimatorConfig build_estimator_config(const EstimatorSpec& spec);

}  // namespace nlsgd
