#include "nlsgd/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace nlsgd {

double step_size(double a, double eta, std::uint64_t t) {
  if (t < 1) throw std::invalid_argument("step_size: t >= 1 required");
  return a / std::pow(static_cast<double>(t) + 1.0, eta);
}

double step_cap(const Problem& problem, const NonlinearMap& map, const TheoryConstants& consts,
                double eta, Variant variant) {
  if (!map.has_uniform_bound())
    throw std::invalid_argument("step_cap: identity baseline is not theorem-governed");
  if (!(eta >= 0.5 && eta < 1.0))
    throw std::invalid_argument("step_cap: eta in [1/2,1) required");
  double C = map.uniform_bound(problem.d());
  double c1 = consts.c1();
  double c2 = consts.c2();
  if (!(c1 > 0.0 && c2 > 0.0)) throw std::invalid_argument("step_cap: constants must be positive");
  double denom = variant == Variant::NMSGE ? 1.0 + 8.0 * C * C : 8.0 * C * C;
  double g_init = problem.grad_init_norm();
  double term2 = c2 / denom;
  double term3 = (1.0 - eta) * c1 / (denom * (problem.L() * C + (1.0 - eta) * g_init));
  return std::min({1.0, term2, term3});
}

std::vector<std::uint64_t> default_checkpoints(std::uint64_t T) {
  std::vector<std::uint64_t> cps;
  for (std::uint64_t t = 1; t <= T && t != 0; t *= 2) cps.push_back(t);
  if (cps.empty() || cps.back() != T) cps.push_back(T);
  return cps;
}

TrialSummary run(const Problem& problem, const NoiseModel& noise, const NonlinearMap& map,
                 const EstimatorConfig& est_cfg, const RunConfig& cfg) {
  if (cfg.T < 1) throw std::invalid_argument("run: T >= 1 required");
  if (!(cfg.a > 0.0)) throw std::invalid_argument("run: a > 0 required");
  if (!(cfg.eta >= 0.0 && cfg.eta < 1.0)) throw std::invalid_argument("run: eta in [0,1) required");

  std::vector<std::uint64_t> cps =
      cfg.checkpoints.empty() ? default_checkpoints(cfg.T) : cfg.checkpoints;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    if (cps[i] < 1 || cps[i] > cfg.T)
      throw std::invalid_argument("run: checkpoint outside [1,T]");
    if (i > 0 && cps[i] <= cps[i - 1])
      throw std::invalid_argument("run: checkpoints must be strictly increasing");
  }

  const bool bounded = map.has_uniform_bound();
  const double C = bounded ? map.uniform_bound(problem.d()) : 0.0;
  // Gradient-growth envelope constant, valid whenever a <= 1.
  const bool check_growth = bounded && cfg.a <= 1.0;
  const double growth_c =
      check_growth ? problem.L() * C / (1.0 - cfg.eta) + problem.grad_init_norm() : 0.0;

  Estimator estimator(problem, noise, est_cfg);
  SplitMix64 g(cfg.seed);

  TrialSummary out;
  out.rows.reserve(cps.size());
  out.envelope_slack = bounded ? std::numeric_limits<double>::infinity()
                               : std::numeric_limits<double>::quiet_NaN();

  Vec x = problem.x_init();
  Vec grad, gvec, psi, dx(x.size());
  std::uint64_t calls = 0;
  double sum_min_metric = 0.0;
  double min_grad_sq = std::numeric_limits<double>::infinity();
  double alpha_sum = 0.0;  // sum of steps already applied
  out.max_x_norm = norm2(x);
  std::size_t next_cp = 0;
  if (cfg.record_trajectory) out.trajectory.push_back(x);

  for (std::uint64_t t = 1; t <= cfg.T; ++t) {
    problem.grad_into(x, grad);
    double gn = norm2(grad);
    sum_min_metric += std::min(gn, gn * gn);
    min_grad_sq = std::min(min_grad_sq, gn * gn);
    if (check_growth) {
      double envelope =
          growth_c * std::pow(static_cast<double>(t), 1.0 - cfg.eta) + 1e-9;
      if (gn > envelope) {
        std::ostringstream os;
        os << "run: gradient-growth envelope violated at t=" << t << " (" << gn << " > "
           << envelope << ")";
        throw std::runtime_error(os.str());
      }
    }
    double f_here = problem.value(x);

    calls += estimator.estimate(x, t, g, gvec);
    map.apply_into(gvec, psi);
    double alpha = step_size(cfg.a, cfg.eta, t);
    if (bounded) {
      double pn = norm2(psi);
      if (pn > C * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "run: displacement bound violated at t=" << t << " (||psi||=" << pn
           << " > C=" << C << ")";
        throw std::runtime_error(os.str());
      }
    }
    axpy(-alpha, psi, x);
    alpha_sum += alpha;
    if (!all_finite(x)) {
      std::ostringstream os;
      os << "run: non-finite iterate after step t=" << t << " (map=" << map.name() << ")";
      throw std::runtime_error(os.str());
    }
    out.max_x_norm = std::max(out.max_x_norm, norm2(x));
    if (bounded) {
      for (std::size_t i = 0; i < x.size(); ++i) dx[i] = x[i] - problem.x_init()[i];
      out.envelope_slack = std::min(out.envelope_slack, C * alpha_sum - norm2(dx));
    }
    if (cfg.record_trajectory) out.trajectory.push_back(x);

    if (next_cp < cps.size() && cps[next_cp] == t) {
      out.rows.push_back({t, sum_min_metric / static_cast<double>(t), min_grad_sq, f_here,
                          calls});
      ++next_cp;
    }
  }
  out.final_x = x;
  return out;
}

}  // namespace nlsgd
