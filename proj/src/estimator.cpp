#include "nlsgd/estimator.hpp"

#include <cmath>
#include <stdexcept>

namespace nlsgd {

std::uint64_t batch_size(std::uint64_t t, double p) {
  if (t < 1) throw std::invalid_argument("batch_size: t >= 1 required");
  if (!(p > 1.0 && p <= 2.0)) throw std::invalid_argument("batch_size: p in (1,2] required");
  double e = p / (2.0 * (p - 1.0));
  double v = std::pow(static_cast<double>(t), e);
  double r = std::round(v);
  double b = std::fabs(v - r) < 1e-9 ? r : std::ceil(v);
  return b < 1.0 ? 1 : static_cast<std::uint64_t>(b);
}

Estimator::Estimator(const Problem& problem, const NoiseModel& noise, EstimatorConfig cfg)
    : problem_(&problem), noise_(&noise), cfg_(cfg), y_(problem.x_init()) {
  if (noise.d != problem.d()) throw std::invalid_argument("estimator: noise/problem dim mismatch");
  if (cfg_.kind == EstimatorKind::MSGE && !(cfg_.p > 1.0 && cfg_.p <= 2.0))
    throw std::invalid_argument("estimator: MSGE requires p in (1,2]");
  problem_->grad_into(y_, grad_y_);
}

std::uint64_t Estimator::estimate(const Vec& x, std::uint64_t t, SplitMix64& g,
                                  Vec& out) const {
  if (t < 1) throw std::invalid_argument("estimate: t >= 1 required");
  const bool state_dep = noise_->state_dependence != StateDependence::None;
  const Vec* st_x = state_dep ? &x : nullptr;
  const Vec* st_y = state_dep ? &y_ : nullptr;

  problem_->grad_into(x, out);
  noise_->sample_into(st_x, g, z_);  // z1 at x
  axpy(1.0, z_, out);
  if (cfg_.kind == EstimatorKind::SGD) return 1;

  // - (grad F(y) + z2) + grad F(y); the exact reference gradient is cached.
  noise_->sample_into(st_y, g, z_);  // z2 at y
  axpy(-1.0, z_, out);
  if (cfg_.kind == EstimatorKind::SGE) return 2;

  // MSGE: mini-batch average of oracle draws at y replaces the exact term:
  // + (1/B) sum_j (grad F(y) + z_j) - grad F(y). grad F(y) is deterministic,
  // so it is computed once; each draw still counts as one oracle call.
  std::uint64_t B = batch_size(t, cfg_.p);
  double w = 1.0 / static_cast<double>(B);
  for (std::uint64_t j = 0; j < B; ++j) {
    noise_->sample_into(st_y, g, z_);
    axpy(w, z_, out);
  }
  return B + 2;
}

}  // namespace nlsgd
