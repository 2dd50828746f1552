#include "nlsgd/constants.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "nlsgd/quadrature.hpp"

namespace nlsgd {

namespace {
double require_const(double v, const char* what) {
  if (!(v > 0.0)) throw std::invalid_argument(std::string(what) + ": no constants resolved");
  return v;
}
}  // namespace

double TheoryConstants::c1() const {
  return has_beta() ? beta1 : require_const(gamma1, "c1");
}
double TheoryConstants::c2() const {
  return has_beta() ? beta2 : require_const(gamma2, "c2");
}
double TheoryConstants::gamma() const {
  require_const(gamma1, "gamma");
  return std::min(gamma1, gamma2);
}
double TheoryConstants::beta() const {
  require_const(beta1, "beta");
  return std::min(beta1, beta2);
}

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::ClosedForm:
      return "closed_form";
    case Provenance::Quadrature:
      return "quadrature";
    case Provenance::MonteCarlo:
      return "monte_carlo";
  }
  return "?";
}

TheoryConstants constants_example1(double alpha, int d) {
  if (!(alpha > 2.0)) throw std::invalid_argument("constants_example1: alpha > 2 required");
  if (d < 1) throw std::invalid_argument("constants_example1: d >= 1 required");
  TheoryConstants c;
  c.phi_prime0 = alpha - 1.0;
  c.xi = 1.0 / alpha;
  c.gamma1 = (alpha - 1.0) / (2.0 * alpha * std::sqrt(static_cast<double>(d)));
  c.gamma2 = (alpha - 1.0) / (2.0 * static_cast<double>(d));
  c.provenance = Provenance::ClosedForm;
  return c;
}

double j_alpha_quadrature(double alpha, double abs_tol) {
  if (!(alpha > 2.0)) throw std::invalid_argument("j_alpha: alpha > 2 required");
  // Tail beyond X is below int_X^inf 4 e^{-2x} dx = 2 e^{-2X} < 1e-12 at X=16.
  const double X = 16.0;
  auto f = [alpha](double x) {
    double t = std::tanh(x);
    return (1.0 - t * t) * std::pow(x + 1.0, -alpha);
  };
  return integrate_finite(f, 0.0, X, abs_tol).value;
}

TheoryConstants constants_example2(double alpha, int d) {
  if (d < 1) throw std::invalid_argument("constants_example2: d >= 1 required");
  double J = j_alpha_quadrature(alpha);
  TheoryConstants c;
  c.j_alpha = J;
  c.phi_prime0 = (alpha - 1.0) * J;
  double a1 = alpha - 1.0;
  c.beta1 = 3.0 * std::sqrt(3.0) * a1 * a1 * J * J /
            (16.0 * std::sqrt(static_cast<double>(d)));
  c.beta2 = a1 * J / (2.0 * static_cast<double>(d));
  c.provenance = Provenance::Quadrature;
  return c;
}

namespace {

// Integrates f over [a, inf) (a may be -inf) split at the given interior
// breakpoints, so each quadrature piece sees a smooth integrand. The base
// densities have kinks at 0 and at their support edges; the exp_sinh rule
// does not converge across them.
template <typename F>
double integrate_with_breaks(const F& f, double a, std::vector<double> brk, double tol) {
  std::sort(brk.begin(), brk.end());
  std::vector<double> pts;
  for (double b : brk) {
    if (!std::isfinite(b)) continue;
    if (std::isfinite(a) && b <= a) continue;
    if (pts.empty() || b > pts.back()) pts.push_back(b);
  }
  double total = 0.0;
  double cur;
  if (std::isfinite(a)) {
    cur = a;
  } else {
    double b0 = pts.empty() ? 0.0 : pts.front();
    auto down = [&f, b0](double s) { return f(b0 - s); };
    total += integrate_halfline(down, 0.0, tol).value;
    cur = b0;
    if (!pts.empty()) pts.erase(pts.begin());
  }
  for (double b : pts) {
    total += integrate_finite(f, cur, b, tol).value;
    cur = b;
  }
  auto up = [&f, cur](double s) { return f(cur + s); };
  total += integrate_halfline(up, 0.0, tol).value;
  return total;
}

// Denoised scalar map of R*sign under the effective law: phi(u) = R*(1 - 2*F(-u)).
// `base` carries the raw closed-form pdf1/cdf1; `sym` selects the z1-z2 law,
// whose density and CDF are convolutions of the base forms.
struct SignPhi {
  const NoiseModel* base;
  bool sym;
  double R;

  double lo() const {
    switch (base->family) {
      case NoiseFamily::CenteredExponential:
        return -1.0 / base->par1;
      case NoiseFamily::CenteredPareto:
        return base->par2 - base->par1 * base->par2 / (base->par1 - 1.0);
      default:
        return -std::numeric_limits<double>::infinity();
    }
  }

  double cdf_eff(double t) const {
    if (!sym) return base->cdf1(t);
    // P(z1 - z2 <= t) = E_v[F(v + t)]; the factor F(v+t) vanishes below
    // lo - t, and both factors kink at 0 and -t respectively.
    auto f = [this, t](double v) { return base->pdf1(v) * base->cdf1(v + t); };
    double a = lo();
    if (std::isfinite(a)) a = std::max(a, a - t);
    return integrate_with_breaks(f, a, {0.0, -t}, 1e-10);
  }

  double density_eff0() const {
    if (!sym) return base->pdf1(0.0);
    auto f = [this](double v) {
      double p = base->pdf1(v);
      return p * p;
    };
    return integrate_with_breaks(f, lo(), {0.0}, 1e-10);
  }

  double phi(double u) const { return R * (1.0 - 2.0 * cdf_eff(-u)); }
  double phi_prime0() const { return 2.0 * R * density_eff0(); }
};

// Largest u with phi(u) >= phi'(0)*u/2; phi is concave for the supported
// unimodal laws so the crossing is unique.
double solve_xi(const SignPhi& sp, double phi_p0) {
  double r = phi_p0 / 2.0;
  auto h = [&](double u) { return sp.phi(u) - r * u; };
  double hi = 1.0;
  if (h(hi) >= 0.0) {
    while (h(hi) >= 0.0) {
      hi *= 2.0;
      if (hi > 1e12) throw std::runtime_error("solve_xi: no sign change found");
    }
  } else {
    while (h(hi) < 0.0) {
      hi /= 2.0;
      if (hi < 1e-12) throw std::runtime_error("solve_xi: crossing collapsed to zero");
    }
    hi *= 2.0;
  }
  double lo = hi / 2.0;
  for (int it = 0; it < 100; ++it) {
    double mid = 0.5 * (lo + hi);
    (h(mid) >= 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

TheoryConstants sign_like_generic(const NoiseModel& eff, double R, int d) {
  NoiseModel base = eff;
  base.symmetrized = false;
  SignPhi sp{&base, eff.symmetrized, R};
  TheoryConstants c;
  c.phi_prime0 = sp.phi_prime0();
  c.xi = solve_xi(sp, c.phi_prime0);
  c.gamma1 = c.phi_prime0 * c.xi / (2.0 * std::sqrt(static_cast<double>(d)));
  c.gamma2 = c.phi_prime0 / (2.0 * static_cast<double>(d));
  c.provenance = Provenance::Quadrature;
  return c;
}

TheoryConstants smooth_cw_generic(const NonlinearMap& map, const NoiseModel& eff, int d,
                                  std::uint64_t seed) {
  const std::uint64_t n = 10000000;
  SplitMix64 g(derive_seed(seed, 0xC0457A57ull));
  double sum = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) sum += map.psi_prime(eff.component_draw(g));
  double phi_p0 = sum / static_cast<double>(n);
  if (!(phi_p0 > 0.0)) throw std::runtime_error("constants: estimated phi'(0) not positive");
  TheoryConstants c;
  c.phi_prime0 = phi_p0;
  c.beta1 = phi_p0 * phi_p0 / (4.0 * *map.bounds.K2 * std::sqrt(static_cast<double>(d)));
  c.beta2 = phi_p0 / (2.0 * static_cast<double>(d));
  c.provenance = Provenance::MonteCarlo;
  return c;
}

}  // namespace

TheoryConstants resolve_constants(const NonlinearMap& map, const NoiseModel& oracle_noise,
                                  EstimatorKind kind, std::uint64_t seed) {
  if (map.family == MapFamily::Identity)
    throw std::invalid_argument("constants: identity baseline has no lower-bound constants");
  if (oracle_noise.state_dependence != StateDependence::None)
    throw std::invalid_argument(
        "constants: state-dependent noise has no closed-form constants here; set run.a "
        "explicitly");
  if (map.kind == MapKind::Joint)
    throw std::invalid_argument(
        "constants: joint-map constants are not resolvable here; set run.a explicitly");

  const bool sym_est = kind != EstimatorKind::SGD;
  if (!sym_est && !oracle_noise.symmetric)
    throw std::invalid_argument(
        "constants: SGD with non-symmetric noise violates the symmetry assumption; use "
        "sge/msge or set run.a explicitly");

  NoiseModel eff = sym_est ? symmetrize(oracle_noise) : oracle_noise;
  const int d = oracle_noise.d;

  if (!eff.symmetrized && eff.family == NoiseFamily::PolyTail) {
    if (map.family == MapFamily::Sign) return constants_example1(eff.par1, d);
    if (map.family == MapFamily::SmoothSign && map.param == 1.0)
      return constants_example2(eff.par1, d);
  }
  if (map.family == MapFamily::Sign) return sign_like_generic(eff, 1.0, d);
  if (map.family == MapFamily::Quantize) return sign_like_generic(eff, map.param, d);
  if (map.assumption_class & A7) return smooth_cw_generic(map, eff, d, seed);

  throw std::invalid_argument("constants: no resolution for map '" + map.name() +
                              "'; set run.a explicitly");
}

}  // namespace nlsgd
