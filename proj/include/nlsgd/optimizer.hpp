#pragma once

#include <cstdint>
#include <vector>

#include "nlsgd/constants.hpp"
#include "nlsgd/estimator.hpp"
#include "nlsgd/noise.hpp"
#include "nlsgd/nonlinearity.hpp"
#include "nlsgd/problems.hpp"
#include "nlsgd/vec.hpp"

namespace nlsgd {

// alpha_t = a / (t+1)^eta
double step_size(double a, double eta, std::uint64_t t);

enum class Variant { NSGD, NSGE, NMSGE };

// Largest theorem-compliant step-size scale:
//   NSGD/NSGE:  min{1, c2/(8C^2), (1-eta)c1/(8C^2(LC+(1-eta)G))}
//   NMSGE:      min{1, c2/(1+8C^2), (1-eta)c1/((1+8C^2)(LC+(1-eta)G))}
// with C the map's uniform bound, G = ||grad F(x1)||.
double step_cap(const Problem& problem, const NonlinearMap& map, const TheoryConstants& consts,
                double eta, Variant variant);

struct RunConfig {
  double a = 0.1;
  double eta = 0.5;  // in [1/2,1) for theorem-compliant runs; eta=0 gives a fixed step
  std::uint64_t T = 1024;
  std::vector<std::uint64_t> checkpoints;  // default powers of two plus T
  std::uint64_t seed = 1;
  bool record_trajectory = false;
};

std::vector<std::uint64_t> default_checkpoints(std::uint64_t T);

struct CheckpointRow {
  std::uint64_t t;
  double avg_min_metric;  // A_t = (1/t) sum_{k<=t} min{||grad||, ||grad||^2}
  double min_grad_sq;     // M_t = min_{k<=t} ||grad F(x^k)||^2
  double f_value;         // F(x^t)
  std::uint64_t oracle_calls;  // through step t
};

struct TrialSummary {
  std::vector<CheckpointRow> rows;
  Vec final_x;
  double max_x_norm = 0.0;  // over all visited iterates
  // min over steps of C*sum_s alpha_s - ||x^k - x^1||; >= -1e-9 must hold for
  // bounded maps (displacement envelope). NaN for the identity baseline.
  double envelope_slack = 0.0;
  std::vector<Vec> trajectory;  // filled only when record_trajectory
};

// Algorithm loop x^{t+1} = x^t - alpha_t Psi(g^t), metrics recorded at x^t.
// Deterministic given cfg.seed. Throws if an iterate becomes non-finite
// (possible only with the identity baseline).
TrialSummary run(const Problem& problem, const NoiseModel& noise, const NonlinearMap& map,
                 const EstimatorConfig& est_cfg, const RunConfig& cfg);

}  // namespace nlsgd
