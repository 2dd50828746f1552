#pragma once

#include <cstdint>
#include <string>

#include "nlsgd/rng.hpp"
#include "nlsgd/vec.hpp"

namespace nlsgd {

enum class NoiseFamily {
  PolyTail,             // rho(z) = (alpha-1)/(2(1+|z|)^alpha)
  Cauchy,               // scale
  StudentT,             // nu, scale
  CenteredExponential,  // Exp(lambda) - 1/lambda
  CenteredPareto,       // scale*U^{-1/shape} - shape*scale/(shape-1)
  Gaussian,             // sigma (sigma = 0 gives the degenerate zero-noise model)
};

enum class StateDependence { None, RadialScale };

// Components are i.i.d. per coordinate. `symmetrized` models the law of
// z1 - z2 of the base family (the SGE/MSGE effective noise); it is an
// analysis device with no closed-form density.
struct NoiseModel {
  NoiseFamily family;
  int d = 1;
  double par1 = 0.0;  // alpha / scale / nu / lambda / shape / sigma
  double par2 = 0.0;  // scale where the family has two parameters
  bool symmetric = false;
  double p_max = 0.0;  // supremum of finite moment orders (+inf where all finite)
  double E0 = 1.0;     // positivity-radius metadata
  StateDependence state_dependence = StateDependence::None;
  bool symmetrized = false;

  // One draw of the base per-component law.
  double draw1(SplitMix64& g) const;
  // One draw of the effective per-component law (base, or z1-z2 when symmetrized).
  double component_draw(SplitMix64& g) const;

  // Base per-component density / CDF (closed forms; throws when symmetrized).
  double pdf1(double z) const;
  double cdf1(double z) const;

  // state must be supplied iff state_dependence != None.
  void sample_into(const Vec* state, SplitMix64& g, Vec& out) const;
  Vec sample(const Vec* state, SplitMix64& g) const;

  // Product density; only for state-independent, non-symmetrized models.
  double pdf(const Vec& z) const;

  std::string name() const;
};

NoiseModel make_poly_tail(double alpha, int d);
NoiseModel make_cauchy(double scale, int d);
NoiseModel make_student_t(double nu, double scale, int d);
NoiseModel make_centered_exponential(double lambda, int d);
NoiseModel make_centered_pareto(double shape, double scale, int d);
NoiseModel make_gaussian(double sigma, int d);

// Law of z1 - z2 with z_i i.i.d. from base; requires state-independence.
NoiseModel symmetrize(const NoiseModel& base);
// Multiplies draws by s(x) = 1 + min(1, ||x||); requires a symmetric base.
NoiseModel with_radial_scale(NoiseModel base);

struct MomentResult {
  double value;
  double se;       // 0 for quadrature results
  bool infinite;   // p >= p_max
};

// E||z||^p: adaptive quadrature for d=1, Monte-Carlo (n_mc draws, reported SE)
// for d>1 or symmetrized models.
MomentResult p_moment(const NoiseModel& model, double p, std::uint64_t n_mc = 1000000,
                      std::uint64_t seed = 0x9E3779B9u);

}  // namespace nlsgd
