#include "nlsgd/noise.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <stdexcept>

#include "nlsgd/quadrature.hpp"

namespace nlsgd {

namespace {

constexpr double kPi = 3.141592653589793238462643;
constexpr double kInf = std::numeric_limits<double>::infinity();

double pareto_mean(double shape, double scale) { return shape * scale / (shape - 1.0); }

// Finite lower end of the base support; -inf for whole-line families.
double support_lo(const NoiseModel& m) {
  switch (m.family) {
    case NoiseFamily::CenteredExponential:
      return -1.0 / m.par1;
    case NoiseFamily::CenteredPareto:
      return m.par2 - pareto_mean(m.par1, m.par2);
    default:
      return -kInf;
  }
}

}  // namespace

double NoiseModel::draw1(SplitMix64& g) const {
  switch (family) {
    case NoiseFamily::PolyTail: {
      double v = uniform_open01(g);
      double mag = (par1 == 3.0) ? 1.0 / std::sqrt(v) - 1.0
                                 : std::pow(v, 1.0 / (1.0 - par1)) - 1.0;
      return uniform01(g) < 0.5 ? -mag : mag;
    }
    case NoiseFamily::Cauchy:
      return par1 * std::tan(kPi * (uniform01(g) - 0.5));
    case NoiseFamily::StudentT: {
      double n = normal(g);
      std::gamma_distribution<double> chi2(par1 / 2.0, 2.0);
      double c = chi2(g);
      return par2 * n / std::sqrt(c / par1);
    }
    case NoiseFamily::CenteredExponential:
      return exponential(g, par1) - 1.0 / par1;
    case NoiseFamily::CenteredPareto: {
      double u = uniform_open01(g);
      double raw = (par1 == 2.0) ? par2 / std::sqrt(u) : par2 * std::pow(u, -1.0 / par1);
      return raw - pareto_mean(par1, par2);
    }
    case NoiseFamily::Gaussian:
      return par1 == 0.0 ? 0.0 : par1 * normal(g);
  }
  return 0.0;
}

double NoiseModel::component_draw(SplitMix64& g) const {
  if (!symmetrized) return draw1(g);
  double a = draw1(g);
  double b = draw1(g);
  return a - b;
}

double NoiseModel::pdf1(double z) const {
  if (symmetrized)
    throw std::invalid_argument("pdf1: symmetrized law has no closed-form density");
  switch (family) {
    case NoiseFamily::PolyTail:
      return 0.5 * (par1 - 1.0) * std::pow(1.0 + std::fabs(z), -par1);
    case NoiseFamily::Cauchy: {
      double u = z / par1;
      return 1.0 / (kPi * par1 * (1.0 + u * u));
    }
    case NoiseFamily::StudentT: {
      double u = z / par2;
      double lg = std::lgamma((par1 + 1.0) / 2.0) - std::lgamma(par1 / 2.0);
      double c = std::exp(lg) / (std::sqrt(par1 * kPi) * par2);
      return c * std::pow(1.0 + u * u / par1, -(par1 + 1.0) / 2.0);
    }
    case NoiseFamily::CenteredExponential:
      return z >= -1.0 / par1 ? par1 * std::exp(-par1 * z - 1.0) : 0.0;
    case NoiseFamily::CenteredPareto: {
      double x = z + pareto_mean(par1, par2);
      if (x < par2) return 0.0;
      return par1 * std::pow(par2, par1) * std::pow(x, -par1 - 1.0);
    }
    case NoiseFamily::Gaussian: {
      if (par1 == 0.0)
        throw std::invalid_argument("pdf1: zero-noise model has no density");
      double u = z / par1;
      return std::exp(-0.5 * u * u) / (par1 * std::sqrt(2.0 * kPi));
    }
  }
  return 0.0;
}

double NoiseModel::cdf1(double z) const {
  if (symmetrized)
    throw std::invalid_argument("cdf1: symmetrized law has no closed form");
  switch (family) {
    case NoiseFamily::PolyTail:
      return z >= 0.0 ? 1.0 - 0.5 * std::pow(1.0 + z, 1.0 - par1)
                      : 0.5 * std::pow(1.0 - z, 1.0 - par1);
    case NoiseFamily::Cauchy:
      return 0.5 + std::atan(z / par1) / kPi;
    case NoiseFamily::StudentT: {
      boost::math::students_t dist(par1);
      return boost::math::cdf(dist, z / par2);
    }
    case NoiseFamily::CenteredExponential:
      return z >= -1.0 / par1 ? 1.0 - std::exp(-par1 * z - 1.0) : 0.0;
    case NoiseFamily::CenteredPareto: {
      double x = z + pareto_mean(par1, par2);
      if (x < par2) return 0.0;
      return 1.0 - std::pow(par2 / x, par1);
    }
    case NoiseFamily::Gaussian:
      if (par1 == 0.0) return z >= 0.0 ? 1.0 : 0.0;
      return 0.5 * std::erfc(-z / (par1 * std::sqrt(2.0)));
  }
  return 0.0;
}

void NoiseModel::sample_into(const Vec* state, SplitMix64& g, Vec& out) const {
  if (state_dependence != StateDependence::None && state == nullptr)
    throw std::invalid_argument("sample: state-dependent model requires a state");
  if (state_dependence == StateDependence::None && state != nullptr)
    throw std::invalid_argument("sample: state supplied to a state-independent model");
  double s = 1.0;
  if (state_dependence == StateDependence::RadialScale)
    s = 1.0 + std::min(1.0, norm2(*state));
  out.resize(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) out[static_cast<std::size_t>(i)] = s * component_draw(g);
}

Vec NoiseModel::sample(const Vec* state, SplitMix64& g) const {
  Vec out;
  sample_into(state, g, out);
  return out;
}

double NoiseModel::pdf(const Vec& z) const {
  if (static_cast<int>(z.size()) != d) throw std::invalid_argument("pdf: dimension mismatch");
  if (state_dependence != StateDependence::None)
    throw std::invalid_argument("pdf: state-dependent law requires a state; not supported");
  double p = 1.0;
  for (double zi : z) p *= pdf1(zi);
  return p;
}

std::string NoiseModel::name() const {
  char buf[96];
  const char* pre = symmetrized ? "sym:" : "";
  switch (family) {
    case NoiseFamily::PolyTail:
      std::snprintf(buf, sizeof buf, "%spoly_tail(alpha=%g)", pre, par1);
      break;
    case NoiseFamily::Cauchy:
      std::snprintf(buf, sizeof buf, "%scauchy(scale=%g)", pre, par1);
      break;
    case NoiseFamily::StudentT:
      std::snprintf(buf, sizeof buf, "%sstudent_t(nu=%g,scale=%g)", pre, par1, par2);
      break;
    case NoiseFamily::CenteredExponential:
      std::snprintf(buf, sizeof buf, "%scentered_exponential(lambda=%g)", pre, par1);
      break;
    case NoiseFamily::CenteredPareto:
      std::snprintf(buf, sizeof buf, "%scentered_pareto(shape=%g,scale=%g)", pre, par1, par2);
      break;
    case NoiseFamily::Gaussian:
      std::snprintf(buf, sizeof buf, "%sgaussian(sigma=%g)", pre, par1);
      break;
  }
  std::string s(buf);
  if (state_dependence == StateDependence::RadialScale) s += "*radial_scale";
  return s;
}

namespace {
void require_dim(int d) {
  if (d < 1) throw std::invalid_argument("noise model: d >= 1 required");
}
}  // namespace

NoiseModel make_poly_tail(double alpha, int d) {
  require_dim(d);
  if (!(alpha > 2.0)) throw std::invalid_argument("poly_tail: alpha > 2 required");
  NoiseModel m;
  m.family = NoiseFamily::PolyTail;
  m.d = d;
  m.par1 = alpha;
  m.symmetric = true;
  m.p_max = alpha - 1.0;
  return m;
}

NoiseModel make_cauchy(double scale, int d) {
  require_dim(d);
  if (!(scale > 0.0)) throw std::invalid_argument("cauchy: scale > 0 required");
  NoiseModel m;
  m.family = NoiseFamily::Cauchy;
  m.d = d;
  m.par1 = scale;
  m.symmetric = true;
  m.p_max = 1.0;
  return m;
}

NoiseModel make_student_t(double nu, double scale, int d) {
  require_dim(d);
  if (!(nu > 0.0) || !(scale > 0.0))
    throw std::invalid_argument("student_t: nu > 0 and scale > 0 required");
  NoiseModel m;
  m.family = NoiseFamily::StudentT;
  m.d = d;
  m.par1 = nu;
  m.par2 = scale;
  m.symmetric = true;
  m.p_max = nu;
  return m;
}

NoiseModel make_centered_exponential(double lambda, int d) {
  require_dim(d);
  if (!(lambda > 0.0)) throw std::invalid_argument("centered_exponential: lambda > 0 required");
  NoiseModel m;
  m.family = NoiseFamily::CenteredExponential;
  m.d = d;
  m.par1 = lambda;
  m.symmetric = false;
  m.p_max = kInf;
  return m;
}

NoiseModel make_centered_pareto(double shape, double scale, int d) {
  require_dim(d);
  if (!(shape > 1.0))
    throw std::invalid_argument("centered_pareto: shape > 1 required for a finite mean");
  if (!(scale > 0.0)) throw std::invalid_argument("centered_pareto: scale > 0 required");
  NoiseModel m;
  m.family = NoiseFamily::CenteredPareto;
  m.d = d;
  m.par1 = shape;
  m.par2 = scale;
  m.symmetric = false;
  m.p_max = shape;
  return m;
}

NoiseModel make_gaussian(double sigma, int d) {
  require_dim(d);
  if (sigma < 0.0) throw std::invalid_argument("gaussian: sigma >= 0 required");
  NoiseModel m;
  m.family = NoiseFamily::Gaussian;
  m.d = d;
  m.par1 = sigma;
  m.symmetric = true;
  m.p_max = kInf;
  return m;
}

NoiseModel symmetrize(const NoiseModel& base) {
  if (base.state_dependence != StateDependence::None)
    throw std::invalid_argument("symmetrize: base must be state-independent");
  if (base.symmetrized) throw std::invalid_argument("symmetrize: already symmetrized");
  NoiseModel m = base;
  m.symmetrized = true;
  m.symmetric = true;
  return m;
}

NoiseModel with_radial_scale(NoiseModel base) {
  if (!base.symmetric)
    throw std::invalid_argument("radial_scale: base law must be symmetric");
  if (base.symmetrized)
    throw std::invalid_argument("radial_scale: not supported on the symmetrized device");
  base.state_dependence = StateDependence::RadialScale;
  return base;
}

MomentResult p_moment(const NoiseModel& model, double p, std::uint64_t n_mc,
                      std::uint64_t seed) {
  if (!(p > 0.0 && p <= 2.0)) throw std::invalid_argument("p_moment: p in (0,2] required");
  if (p >= model.p_max) return {kInf, 0.0, true};
  if (model.family == NoiseFamily::Gaussian && model.par1 == 0.0) return {0.0, 0.0, false};

  if (model.d == 1 && !model.symmetrized &&
      model.state_dependence == StateDependence::None) {
    const double tol = 1e-9;
    auto pos = integrate_halfline(
        [&](double s) { return std::pow(s, p) * model.pdf1(s); }, 0.0, tol / 2.0);
    double lo = support_lo(model);
    QuadResult neg{0.0, 0.0};
    if (std::isfinite(lo)) {
      if (lo < 0.0)
        neg = integrate_endpoint_singular(
            [&](double z) { return std::pow(-z, p) * model.pdf1(z); }, lo, 0.0, tol / 2.0);
    } else {
      neg = integrate_halfline(
          [&](double s) { return std::pow(s, p) * model.pdf1(-s); }, 0.0, tol / 2.0);
    }
    return {pos.value + neg.value, 0.0, false};
  }

  if (n_mc < 10000) throw std::invalid_argument("p_moment: n_mc >= 1e4 required");
  SplitMix64 g(seed);
  Vec z;
  double sum = 0.0, sumsq = 0.0;
  for (std::uint64_t i = 0; i < n_mc; ++i) {
    model.sample_into(nullptr, g, z);
    double v = std::pow(norm2(z), p);
    sum += v;
    sumsq += v * v;
  }
  double n = static_cast<double>(n_mc);
  double mean = sum / n;
  double var = std::max(0.0, sumsq / n - mean * mean) * n / (n - 1.0);
  return {mean, std::sqrt(var / n), false};
}

}  // namespace nlsgd
