#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "nlsgd/noise.hpp"
#include "nlsgd/rng.hpp"
#include "nlsgd/vec.hpp"

namespace nlsgd {

// Smooth objective with exact gradient, known L and F*, and initial point x1.
class Problem {
 public:
  virtual ~Problem() = default;

  virtual double value(const Vec& x) const = 0;
  virtual void grad_into(const Vec& x, Vec& out) const = 0;
  Vec grad(const Vec& x) const {
    Vec g;
    grad_into(x, g);
    return g;
  }

  const std::string& name() const { return name_; }
  int d() const { return d_; }
  double L() const { return L_; }
  double f_star() const { return f_star_; }
  const Vec& x_init() const { return x_init_; }

  double delta() const { return value(x_init_) - f_star_; }
  double grad_init_norm() const { return norm2(grad(x_init_)); }

  // Persists any generated data needed to reproduce the objective (no-op for
  // closed-form problems).
  virtual void persist_dataset(const std::string& /*dir*/) const {}

 protected:
  Problem(std::string name, int d, double L, double f_star, Vec x_init);

  std::string name_;
  int d_;
  double L_;
  double f_star_;
  Vec x_init_;
};

std::unique_ptr<Problem> make_quadratic(int d, Vec x_init);
std::unique_ptr<Problem> make_sine_quadratic(int d, Vec x_init);
// Mean logistic loss with ridge on a seeded synthetic design; F* found by
// deterministic full-gradient minimization at construction.
std::unique_ptr<Problem> make_logistic_synthetic(int d, int n, std::uint64_t seed, Vec x_init,
                                                 double ridge = 0.01);

// One stochastic first-order oracle call: grad F(x) + noise draw; bumps counter.
void oracle_call(const Problem& problem, const NoiseModel& noise, const Vec& x,
                 SplitMix64& g, Vec& out, std::uint64_t& counter);

}  // namespace nlsgd
