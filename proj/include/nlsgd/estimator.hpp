#pragma once

#include <cstdint>

#include "nlsgd/noise.hpp"
#include "nlsgd/problems.hpp"
#include "nlsgd/rng.hpp"
#include "nlsgd/vec.hpp"

namespace nlsgd {

enum class EstimatorKind { SGD, SGE, MSGE };

struct EstimatorConfig {
  EstimatorKind kind = EstimatorKind::SGD;
  double p = 1.5;  // MSGE batch-schedule moment order, in (1,2]
};

// ceil(t^{p/(2(p-1))}) with a round-to-nearest guard so exact powers do not
// ceil up from floating-point noise.
std::uint64_t batch_size(std::uint64_t t, double p);

// Builds g^t from oracle calls; reference point y = x1 with exact grad F(y).
// Not thread-safe (scratch buffers); construct one per trial.
class Estimator {
 public:
  Estimator(const Problem& problem, const NoiseModel& noise, EstimatorConfig cfg);

  // Returns the number of oracle calls consumed.
  std::uint64_t estimate(const Vec& x, std::uint64_t t, SplitMix64& g, Vec& out) const;

  EstimatorKind kind() const { return cfg_.kind; }
  double p() const { return cfg_.p; }
  const Vec& reference_point() const { return y_; }
  const Vec& reference_grad() const { return grad_y_; }

 private:
  const Problem* problem_;
  const NoiseModel* noise_;
  EstimatorConfig cfg_;
  Vec y_;
  Vec grad_y_;
  mutable Vec z_;
};

}  // namespace nlsgd
