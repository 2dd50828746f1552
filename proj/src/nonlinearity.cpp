#include "nlsgd/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace nlsgd {

namespace {

double require_positive(double v, const char* what) {
  if (!(v > 0.0)) throw std::invalid_argument(std::string(what) + " must be positive");
  return v;
}

// Non-negative monotone half-line profile; full map is copysign(profile(|x|), x)
// so oddness is exact at the bit level.
double psi_abs(const NonlinearMap& m, double ax) {
  switch (m.family) {
    case MapFamily::Sign:
      return ax > 0.0 ? 1.0 : 0.0;
    case MapFamily::CwClip:
      return std::min(ax, m.param);
    case MapFamily::Quantize:
      return ax > 0.0 ? m.param : 0.0;
    case MapFamily::SmoothSign:
      return std::tanh(ax / m.param);
    case MapFamily::SmoothCwClip: {
      double mm = m.param;
      if (ax >= mm) return mm;
      double q = (ax * ax) / (mm * mm);
      return 0.625 * ax * (3.0 - 2.0 * q + 0.6 * q * q);
    }
    case MapFamily::Identity:
      return ax;
    default:
      throw std::logic_error("psi_abs: joint family");
  }
}

}  // namespace

double NonlinearMap::psi(double x) const {
  if (kind != MapKind::ComponentWise)
    throw std::invalid_argument("psi: joint map has no scalar component function");
  if (!std::isfinite(x)) throw std::invalid_argument("psi: non-finite input");
  return std::copysign(psi_abs(*this, std::fabs(x)), x);
}

double NonlinearMap::psi_prime(double x) const {
  switch (family) {
    case MapFamily::SmoothSign: {
      double t = std::tanh(x / param);
      return (1.0 - t * t) / param;
    }
    case MapFamily::SmoothCwClip: {
      double ax = std::fabs(x);
      if (ax >= param) return 0.0;
      double u = 1.0 - (x * x) / (param * param);
      return 1.875 * u * u;
    }
    default:
      throw std::invalid_argument("psi_prime: closed form only for smooth component-wise maps");
  }
}

void NonlinearMap::apply_into(const Vec& v, Vec& out) const {
  if (!all_finite(v)) throw std::invalid_argument("apply: non-finite input vector");
  out.resize(v.size());
  if (kind == MapKind::ComponentWise) {
    for (std::size_t i = 0; i < v.size(); ++i)
      out[i] = std::copysign(psi_abs(*this, std::fabs(v[i])), v[i]);
    return;
  }
  double r = norm2(v);
  double s = 0.0;  // multiplier on v
  switch (family) {
    case MapFamily::Normalize:
      s = r > 0.0 ? 1.0 / r : 0.0;
      break;
    case MapFamily::JointClip:
      s = r > param ? param / r : 1.0;
      break;
    case MapFamily::SmoothNormalize:
      s = 1.0 / std::sqrt(r * r + param);
      break;
    case MapFamily::SmoothJointClip: {
      double M = param;
      s = r <= M ? 1.5 * (1.0 - r * r / (3.0 * M * M)) : M / r;
      break;
    }
    default:
      throw std::logic_error("apply: component-wise family in joint branch");
  }
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = s * v[i];
}

Vec NonlinearMap::apply(const Vec& v) const {
  Vec out;
  apply_into(v, out);
  return out;
}

double NonlinearMap::uniform_bound(int d) const {
  if (d < 1) throw std::invalid_argument("uniform_bound: d >= 1 required");
  if (family == MapFamily::Identity)
    throw std::invalid_argument("uniform_bound: identity map is unbounded");
  if (kind == MapKind::ComponentWise) return *bounds.C1 * std::sqrt(static_cast<double>(d));
  return *bounds.C2;
}

double NonlinearMap::smoothness_K() const {
  if (!(assumption_class & A7))
    throw std::invalid_argument("smoothness_K: map lacks smooth-class derivative bounds");
  return kind == MapKind::ComponentWise ? *bounds.K1 : *bounds.K3;
}

std::string NonlinearMap::name() const {
  char buf[64];
  switch (family) {
    case MapFamily::Sign:
      return "sign";
    case MapFamily::CwClip:
      std::snprintf(buf, sizeof buf, "cw_clip(M=%g)", param);
      return buf;
    case MapFamily::Quantize:
      std::snprintf(buf, sizeof buf, "quantize(R=%g)", param);
      return buf;
    case MapFamily::SmoothSign:
      std::snprintf(buf, sizeof buf, "smooth_sign(k=%g)", param);
      return buf;
    case MapFamily::SmoothCwClip:
      std::snprintf(buf, sizeof buf, "smooth_cw_clip(M=%g)", param);
      return buf;
    case MapFamily::Normalize:
      return "normalize";
    case MapFamily::JointClip:
      std::snprintf(buf, sizeof buf, "joint_clip(M=%g)", param);
      return buf;
    case MapFamily::SmoothNormalize:
      std::snprintf(buf, sizeof buf, "smooth_normalize(eps=%g)", param);
      return buf;
    case MapFamily::SmoothJointClip:
      std::snprintf(buf, sizeof buf, "smooth_joint_clip(M=%g)", param);
      return buf;
    case MapFamily::Identity:
      return "identity";
  }
  return "?";
}

NonlinearMap make_sign() {
  NonlinearMap m;
  m.kind = MapKind::ComponentWise;
  m.family = MapFamily::Sign;
  m.bounds.C1 = 1.0;
  m.assumption_class = A5;
  return m;
}

NonlinearMap make_cw_clip(double M) {
  require_positive(M, "cw_clip M");
  NonlinearMap m;
  m.kind = MapKind::ComponentWise;
  m.family = MapFamily::CwClip;
  m.param = M;
  m.bounds.C1 = M;
  m.assumption_class = A5;
  return m;
}

NonlinearMap make_quantize(double R) {
  require_positive(R, "quantize R");
  NonlinearMap m;
  m.kind = MapKind::ComponentWise;
  m.family = MapFamily::Quantize;
  m.param = R;
  m.bounds.C1 = R;
  m.assumption_class = A5;
  return m;
}

NonlinearMap make_smooth_sign(double k) {
  require_positive(k, "smooth_sign k");
  NonlinearMap m;
  m.kind = MapKind::ComponentWise;
  m.family = MapFamily::SmoothSign;
  m.param = k;
  m.bounds.C1 = 1.0;
  m.bounds.K1 = 1.0 / k;
  m.bounds.K2 = 4.0 * std::sqrt(3.0) / (9.0 * k * k);
  m.assumption_class = A5 | A6 | A7;
  return m;
}

NonlinearMap make_smooth_cw_clip(double M) {
  require_positive(M, "smooth_cw_clip M");
  NonlinearMap m;
  m.kind = MapKind::ComponentWise;
  m.family = MapFamily::SmoothCwClip;
  m.param = M;
  m.bounds.C1 = M;
  m.bounds.K1 = 1.875;
  m.bounds.K2 = 5.0 * std::sqrt(3.0) / (3.0 * M);
  m.assumption_class = A5 | A6 | A7;
  return m;
}

NonlinearMap make_normalize() {
  NonlinearMap m;
  m.kind = MapKind::Joint;
  m.family = MapFamily::Normalize;
  m.bounds.C2 = 1.0;
  m.assumption_class = A5 | A6;
  return m;
}

NonlinearMap make_joint_clip(double M) {
  require_positive(M, "joint_clip M");
  NonlinearMap m;
  m.kind = MapKind::Joint;
  m.family = MapFamily::JointClip;
  m.param = M;
  m.bounds.C2 = M;
  m.assumption_class = A5 | A6;
  return m;
}

NonlinearMap make_smooth_normalize(double eps) {
  require_positive(eps, "smooth_normalize eps");
  NonlinearMap m;
  m.kind = MapKind::Joint;
  m.family = MapFamily::SmoothNormalize;
  m.param = eps;
  m.bounds.C2 = 1.0;
  m.bounds.K3 = 1.0 / std::sqrt(eps);
  m.assumption_class = A5 | A6 | A7;
  return m;
}

NonlinearMap make_smooth_joint_clip(double M) {
  require_positive(M, "smooth_joint_clip M");
  NonlinearMap m;
  m.kind = MapKind::Joint;
  m.family = MapFamily::SmoothJointClip;
  m.param = M;
  m.bounds.C2 = M;
  m.bounds.K3 = 1.5;
  m.assumption_class = A5 | A6 | A7;
  return m;
}

NonlinearMap make_identity() {
  NonlinearMap m;
  m.kind = MapKind::ComponentWise;
  m.family = MapFamily::Identity;
  m.assumption_class = 0;
  return m;
}

NonlinearMap make_map(const std::string& family, std::optional<double> param) {
  auto val = [&](double dflt) { return param.value_or(dflt); };
  if (family == "sign") return make_sign();
  if (family == "cw_clip") return make_cw_clip(val(3.5));
  if (family == "quantize") return make_quantize(val(1.0));
  if (family == "smooth_sign") return make_smooth_sign(val(0.1));
  if (family == "smooth_cw_clip") return make_smooth_cw_clip(val(3.5));
  if (family == "normalize") return make_normalize();
  if (family == "joint_clip") return make_joint_clip(val(3.5));
  if (family == "smooth_normalize") return make_smooth_normalize(val(0.1));
  if (family == "smooth_joint_clip") return make_smooth_joint_clip(val(3.5));
  if (family == "identity") return make_identity();
  throw std::invalid_argument("unknown nonlinearity family '" + family + "'");
}

std::vector<NonlinearMap> all_builtin_maps() {
  return {make_sign(),          make_cw_clip(),         make_quantize(),
          make_smooth_sign(),   make_smooth_cw_clip(),  make_normalize(),
          make_joint_clip(),    make_smooth_normalize(), make_smooth_joint_clip(),
          make_identity()};
}

bool PropertyReport::all_pass() const {
  for (const auto& e : entries)
    if (!e.pass) return false;
  return true;
}

namespace {

double fd_step(double x) { return 1e-5 * std::max(1.0, std::fabs(x)); }

// Kink abscissae of non-smooth component-wise families (derivative checks
// skip their neighbourhoods).
std::vector<double> kink_points(const NonlinearMap& m) {
  switch (m.family) {
    case MapFamily::Sign:
    case MapFamily::Quantize:
      return {0.0};
    case MapFamily::CwClip:
      return {-m.param, m.param};
    default:
      return {};
  }
}

bool near_kink(const NonlinearMap& m, double x, double h) {
  for (double k : kink_points(m))
    if (std::fabs(x - k) <= 10.0 * h) return true;
  return false;
}

// Piecewise first-derivative bound checked by finite differences away from
// kinks; set for every component-wise family with a meaningful claim.
std::optional<double> fd_first_bound(const NonlinearMap& m) {
  switch (m.family) {
    case MapFamily::Sign:
    case MapFamily::Quantize:
      return 0.0;
    case MapFamily::CwClip:
      return 1.0;
    case MapFamily::SmoothSign:
    case MapFamily::SmoothCwClip:
      return m.bounds.K1;
    default:
      return std::nullopt;
  }
}

// Largest singular value of the finite-difference Jacobian at v.
double fd_jacobian_opnorm(const NonlinearMap& m, const Vec& v) {
  const std::size_t d = v.size();
  std::vector<Vec> cols(d);
  Vec vp = v, vm = v, fp, fm;
  for (std::size_t j = 0; j < d; ++j) {
    double h = fd_step(v[j]);
    vp[j] = v[j] + h;
    vm[j] = v[j] - h;
    m.apply_into(vp, fp);
    m.apply_into(vm, fm);
    cols[j].resize(d);
    for (std::size_t i = 0; i < d; ++i) cols[j][i] = (fp[i] - fm[i]) / (2.0 * h);
    vp[j] = v[j];
    vm[j] = v[j];
  }
  // power iteration on J^T J
  Vec x(d, 1.0 / std::sqrt(static_cast<double>(d))), jx(d), y(d);
  double s = 0.0;
  for (int it = 0; it < 60; ++it) {
    for (std::size_t i = 0; i < d; ++i) {
      jx[i] = 0.0;
      for (std::size_t j = 0; j < d; ++j) jx[i] += cols[j][i] * x[j];
    }
    for (std::size_t j = 0; j < d; ++j) y[j] = dot(cols[j], jx);
    double ny = norm2(y);
    if (ny == 0.0) return 0.0;
    for (std::size_t j = 0; j < d; ++j) x[j] = y[j] / ny;
    s = std::sqrt(ny);
  }
  return s;
}

}  // namespace

PropertyReport check_properties(const NonlinearMap& map, const std::vector<Vec>& grid,
                                double tol) {
  if (grid.empty()) throw std::invalid_argument("check_properties: empty grid");
  if (!(tol > 0.0)) throw std::invalid_argument("check_properties: tol > 0 required");
  for (const auto& v : grid)
    if (!all_finite(v)) throw std::invalid_argument("check_properties: non-finite grid point");

  PropertyReport rep;
  auto add = [&rep](const std::string& prop, double worst, double limit, std::string note = "") {
    rep.entries.push_back({prop, worst <= limit, worst, std::move(note)});
  };

  if (map.kind == MapKind::ComponentWise) {
    std::vector<double> xs;
    for (const auto& v : grid) xs.insert(xs.end(), v.begin(), v.end());
    std::sort(xs.begin(), xs.end());

    double odd_worst = 0.0;
    for (double x : xs) odd_worst = std::max(odd_worst, std::fabs(map.psi(-x) + map.psi(x)));
    add("oddness", odd_worst, 0.0);

    if (map.bounds.C1) {
      double worst = -1e300;
      for (double x : xs) worst = std::max(worst, std::fabs(map.psi(x)) - *map.bounds.C1);
      add("uniform_bound", worst, 1e-12);
    } else {
      rep.entries.push_back({"uniform_bound", true, 0.0, "no bound claimed"});
    }

    double mono_worst = -1e300;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
      mono_worst = std::max(mono_worst, map.psi(xs[i]) - map.psi(xs[i + 1]));
    add("monotone", mono_worst, 1e-12);

    if (auto k1 = fd_first_bound(map)) {
      double worst = -1e300;
      for (double x : xs) {
        double h = fd_step(x);
        if (near_kink(map, x, h)) {
          ++rep.skipped_points;
          continue;
        }
        double fd = (map.psi(x + h) - map.psi(x - h)) / (2.0 * h);
        worst = std::max(worst, std::fabs(fd) - *k1);
      }
      add("first_derivative_bound", worst, tol,
          rep.skipped_points ? "kink neighbourhoods skipped" : "");
    }

    if (map.bounds.K2) {
      double worst = -1e300;
      for (double x : xs) {
        double h = fd_step(x);
        double fd2 = (map.psi(x + h) - 2.0 * map.psi(x) + map.psi(x - h)) / (h * h);
        worst = std::max(worst, std::fabs(fd2) - *map.bounds.K2);
      }
      add("second_derivative_bound", worst, tol);
    }
    return rep;
  }

  // joint families
  double odd_worst = 0.0, bound_worst = -1e300, k3_worst = -1e300;
  Vec f, fneg;
  for (const auto& v : grid) {
    map.apply_into(v, f);
    map.apply_into(negated(v), fneg);
    for (std::size_t i = 0; i < v.size(); ++i)
      odd_worst = std::max(odd_worst, std::fabs(fneg[i] + f[i]));
    bound_worst = std::max(bound_worst, norm2(f) - *map.bounds.C2);
    if (map.bounds.K3) k3_worst = std::max(k3_worst, fd_jacobian_opnorm(map, v) - *map.bounds.K3);
  }
  add("oddness", odd_worst, 0.0);
  add("uniform_bound", bound_worst, 1e-12);
  if (map.bounds.K3) add("jacobian_norm_bound", k3_worst, tol);
  return rep;
}

}  // namespace nlsgd
