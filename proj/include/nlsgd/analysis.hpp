#pragma once

#include <cstdint>
#include <vector>

#include "nlsgd/constants.hpp"
#include "nlsgd/noise.hpp"
#include "nlsgd/nonlinearity.hpp"
#include "nlsgd/stats.hpp"
#include "nlsgd/vec.hpp"

namespace nlsgd {

struct DenoisedEstimate {
  Vec y;
  Vec phi_hat;
  Vec std_err;  // per component
  std::uint64_t n_samples;
};

// Monte-Carlo estimate of the denoised map Phi(y) = E[Psi(y + z)]; with
// batch B >= 1 the argument noise is z1 - z2 + mean of B fresh draws (the
// mini-batch estimator's effective noise). Samples are sharded with
// per-shard generators and reduced in shard order, so any worker count
// produces identical output. Requires a state-independent noise model.
DenoisedEstimate denoised_mc(const NonlinearMap& map, const NoiseModel& noise, const Vec& y,
                             std::uint64_t n_samples, std::uint64_t seed,
                             std::uint64_t batch = 0, int workers = 1);

// 20 log-spaced magnitudes on [lo, hi] x n_dirs seeded random unit directions.
std::vector<Vec> make_probe_grid(int d, std::uint64_t seed, int n_mags = 20, int n_dirs = 5,
                                 double lo = 1e-2, double hi = 10.0);

struct BoundProbeRow {
  Vec y;
  double y_norm;
  double lhs;   // <phi_hat, y>
  double rhs;   // min{c1*||y||, c2*||y||^2}
  double se;    // ||y|| * ||std_err||
  double margin;  // lhs + 3*se - rhs
  bool pass;
};

struct BoundReport {
  double c1, c2;
  std::vector<BoundProbeRow> rows;
  bool all_pass() const;
};

BoundReport verify_lower_bound(const NonlinearMap& map, const NoiseModel& noise,
                               const TheoryConstants& consts, const std::vector<Vec>& probes,
                               std::uint64_t n_samples, std::uint64_t seed, int workers = 1);

struct GapRow {
  std::uint64_t B;
  double r_hat;
  double bound;  // 2*sqrt(2)*sigma*K*B^{(1-p)/p}
  double se;
  bool pass;
};

struct GapReport {
  double sigma, K, p;
  double slope;  // log-log slope of r_hat vs B
  std::vector<GapRow> rows;
  bool all_pass() const;
};

// Distance between the mini-batch denoised map and the ideal symmetrized one,
// against the moment bound. noise is the raw oracle law; the reference uses
// its symmetrization. Map must carry smooth-class bounds (K).
GapReport gap_bound_check(const NonlinearMap& map, const NoiseModel& noise, double p,
                          const std::vector<std::uint64_t>& B_list, std::uint64_t n_samples,
                          const Vec& y, std::uint64_t seed, int workers = 1);

struct NoiseCheckReport {
  double C;
  double max_e_norm;       // over n_samples draws of e = Psi(y+z) - phi_hat
  Vec mean_e, se_e;        // per component; se combines both halves
  double worst_mean_ratio; // max_i |mean_e_i| / (3*se_i)
  std::uint64_t n_samples;
  bool pass_bound;  // max_e_norm <= 2C (exact, tiny fp slack)
  bool pass_mean;   // every |mean_e_i| <= 3*se_i
};

// Split-sample effective-noise check: phi_hat from one batch of draws, e
// statistics from an independent second batch (same-sample centering would
// make the mean-zero check vacuous).
NoiseCheckReport effective_noise_check(const NonlinearMap& map, const NoiseModel& noise,
                                       const Vec& y, std::uint64_t n_samples,
                                       std::uint64_t seed, int workers = 1);

struct SymReport {
  std::vector<double> skewness;  // per component
  std::vector<double> ks;        // per component, sample vs negated sample
  std::uint64_t n;
  double max_abs_skewness() const;
  double max_ks() const;
  double ks_critical(double alpha) const;  // two-sample threshold at size (n,n)
};

SymReport symmetry_test(const std::vector<Vec>& samples);
SymReport symmetry_test(const std::vector<double>& samples);

// Nearest-rank upper quantile (see stats.hpp); delta in (0,1).
double quantile(const std::vector<double>& values, double delta);

// OLS of log q on log t over checkpoints >= t_min; needs >= 4 points kept.
FitResult rate_fit(const std::vector<double>& checkpoints, const std::vector<double>& quantiles,
                   double t_min);

}  // namespace nlsgd
