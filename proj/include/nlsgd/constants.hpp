#pragma once

#include <cstdint>
#include <string>

#include "nlsgd/estimator.hpp"
#include "nlsgd/noise.hpp"
#include "nlsgd/nonlinearity.hpp"

namespace nlsgd {

enum class Provenance { ClosedForm, Quadrature, MonteCarlo };

// Lower-bound constants of the denoised nonlinearity:
//   <Phi(y), y> >= min{c1*||y||, c2*||y||^2}.
// gamma* hold for i.i.d. noise, beta* for the unified/state-dependent case;
// c1()/c2() pick whichever set a resolution produced.
struct TheoryConstants {
  double gamma1 = 0.0, gamma2 = 0.0;
  double beta1 = 0.0, beta2 = 0.0;
  double j_alpha = 0.0;
  double phi_prime0 = 0.0;
  double xi = 0.0;
  Provenance provenance = Provenance::ClosedForm;

  bool has_gamma() const { return gamma1 > 0.0 && gamma2 > 0.0; }
  bool has_beta() const { return beta1 > 0.0 && beta2 > 0.0; }
  double c1() const;
  double c2() const;
  double gamma() const;  // min(gamma1, gamma2)
  double beta() const;   // min(beta1, beta2)
};

const char* provenance_name(Provenance p);

// Sign map + PolyTail(alpha) i.i.d. noise:
//   gamma1 = (alpha-1)/(2*alpha*sqrt(d)), gamma2 = (alpha-1)/(2d).
TheoryConstants constants_example1(double alpha, int d);

// tanh map + PolyTail(alpha) i.i.d. noise:
//   beta1 = 3*sqrt(3)*(alpha-1)^2*J^2/(16*sqrt(d)), beta2 = (alpha-1)*J/(2d).
TheoryConstants constants_example2(double alpha, int d);

// J = int_0^inf sech^2(x) (x+1)^{-alpha} dx by adaptive quadrature on [0, X]
// with X chosen so the 4e^{-2x} tail envelope is below 1e-12.
double j_alpha_quadrature(double alpha, double abs_tol = 1e-9);

// Resolves lower-bound constants for (map, estimator's effective noise law).
// Supported: component-wise sign-like and smooth maps over state-independent
// noise; closed forms where the pair matches Example 1/2, otherwise
// quadrature (sign) or seeded Monte-Carlo (smooth). Throws with an
// explanation when the pair is outside the supported set.
TheoryConstants resolve_constants(const NonlinearMap& map, const NoiseModel& oracle_noise,
                                  EstimatorKind kind, std::uint64_t seed);

}  // namespace nlsgd
