// Compares the serial path (workers = 1) against the OpenMP worker pool on
// the two hot loops: denoised-map Monte-Carlo and the trial farm.
#include <chrono>
#include <cstdio>
#include <vector>

#include "nlsgd/analysis.hpp"
#include "nlsgd/config.hpp"
#include "nlsgd/runner.hpp"

using Clock = std::chrono::steady_clock;

static double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int main() {
  const std::vector<int> worker_counts{1, 2, 4, 8};

  {
    nlsgd::NonlinearMap map = nlsgd::make_smooth_sign(0.1);
    nlsgd::NoiseModel noise = nlsgd::make_poly_tail(3.0, 4);
    nlsgd::Vec y{0.5, -0.25, 1.0, 0.0};
    std::printf("denoised_mc, d=4, 4e6 samples\n");
    std::printf("%8s %10s %8s %16s\n", "workers", "time_s", "speedup", "phi_hat[0]");
    double base = 0.0;
    for (int w : worker_counts) {
      auto t0 = Clock::now();
      auto est = nlsgd::denoised_mc(map, noise, y, 4000000, 42, 0, w);
      double dt = seconds_since(t0);
      if (w == 1) base = dt;
      std::printf("%8d %10.3f %8.2f %16.9f\n", w, dt, base / dt, est.phi_hat[0]);
    }
  }

  {
    const char* cfg_text =
        "[problem]\nname = sine_quadratic\nd = 10\nx_init = 1\n"
        "[noise]\nfamily = poly_tail\nalpha = 3\n"
        "[nonlinearity]\nfamily = sign\n"
        "[estimator]\nkind = sgd\n"
        "[run]\na = 0.05\neta = 0.5\nT = 4096\ntrials = 100\nseed = 7\n"
        "[analysis]\ndeltas = 0.1\n";
    nlsgd::ExperimentSpec spec = nlsgd::parse_config_text(cfg_text, "<bench>");
    std::printf("\ntrial farm, sine_quadratic d=10, 100 trials, T=4096\n");
    std::printf("%8s %10s %8s %16s\n", "workers", "time_s", "speedup", "q(A_T)");
    double base = 0.0;
    for (int w : worker_counts) {
      auto t0 = Clock::now();
      auto res = nlsgd::run_ensemble(spec, w);
      double dt = seconds_since(t0);
      if (w == 1) base = dt;
      std::printf("%8d %10.3f %8.2f %16.9f\n", w, dt, base / dt,
                  res.quantiles.back().quantile);
    }
  }
  return 0;
}
