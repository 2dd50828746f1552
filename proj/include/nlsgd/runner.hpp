#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nlsgd/config.hpp"
#include "nlsgd/constants.hpp"
#include "nlsgd/optimizer.hpp"

namespace nlsgd {

inline constexpr const char* kVersion = "1.0.0";

struct QuantileRow {
  std::uint64_t t;
  double delta;
  std::string metric;  // "avg_min_metric" or "min_grad_sq"
  double quantile;
};

struct RateFitRow {
  std::string metric;
  double delta;
  std::uint64_t t_min;
  double slope, intercept, r2;
};

struct EnsembleResult {
  std::vector<TrialSummary> trials;  // index-ordered, trial i seeded from (seed, i)
  std::vector<QuantileRow> quantiles;
  std::vector<RateFitRow> fits;
  std::vector<std::uint64_t> checkpoints;
  std::uint64_t base_seed = 0;
  double a_used = 0.0;
  double cap = 0.0;
  bool cap_known = false;        // constants resolved and step_cap computable
  bool compliant_known = false;  // false leaves `compliant` meaningless
  bool compliant = false;
  TheoryConstants consts;
  bool consts_known = false;
  std::vector<std::string> warnings;
};

// Runs spec.run.trials independent trials (worker pool, schedule-independent
// reduction) and reduces quantiles and rate fits per (metric, delta).
EnsembleResult run_ensemble(const ExperimentSpec& spec, int workers);

// summaries.csv, quantiles.csv, ratefit.csv, per-figure plot-data files,
// run_meta.json, and any problem dataset, under out_dir. Doubles as %.12g.
void write_outputs(const ExperimentSpec& spec, const EnsembleResult& result,
                   const std::string& out_dir, int workers);

struct VerifyRow {
  std::string check;
  std::string probe;
  double lhs, rhs, se;
  bool pass;
};

struct VerifyResult {
  std::vector<VerifyRow> rows;
  std::vector<std::string> notes;  // checks skipped as not applicable
  bool all_pass() const;
};

// Denoised lower bound, batch-gap bound, effective-noise bound/centering,
// effective-law symmetry, and the quadrature/Monte-Carlo constants
// cross-check, as applicable to the configured (map, noise, estimator).
VerifyResult run_verify(const ExperimentSpec& spec, int workers);

void write_verify_csv(const VerifyResult& result, const std::string& out_dir);

// Subcommands: run, verify, constants, ratefit, report.
// Exit codes: 0 success, 1 config error, 2 verify-check failure.
int cli_main(int argc, char** argv);

}  // namespace nlsgd
