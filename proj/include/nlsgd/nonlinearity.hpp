#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nlsgd/vec.hpp"

namespace nlsgd {

enum class MapKind { ComponentWise, Joint };

enum class MapFamily {
  Sign,
  CwClip,
  Quantize,
  SmoothSign,
  SmoothCwClip,
  Normalize,
  JointClip,
  SmoothNormalize,
  SmoothJointClip,
  Identity,
};

// Assumption-class tags: A5 = odd/monotone/bounded catalog; A6 = the
// state-dependent-noise catalog (twice-differentiable component-wise maps and
// the joint maps); A7 = smooth catalog with derivative bounds (K1/K2
// component-wise, K3 joint).
enum AssumptionClass : unsigned { A5 = 1u << 0, A6 = 1u << 1, A7 = 1u << 2 };

struct MapBounds {
  std::optional<double> C1;  // per-component output bound
  std::optional<double> C2;  // joint output bound
  std::optional<double> K1;  // first-derivative bound (component-wise)
  std::optional<double> K2;  // second-derivative bound (component-wise)
  std::optional<double> K3;  // Jacobian operator-norm bound (joint)
};

struct NonlinearMap {
  MapKind kind = MapKind::ComponentWise;
  MapFamily family = MapFamily::Sign;
  double param = 0.0;  // M, k, eps, or R depending on family; unused otherwise
  MapBounds bounds;
  unsigned assumption_class = 0;

  // Component-wise scalar map; invalid for joint families.
  double psi(double x) const;
  // Closed-form psi' for smooth component-wise families (A7 only).
  double psi_prime(double x) const;

  void apply_into(const Vec& v, Vec& out) const;
  Vec apply(const Vec& v) const;

  bool has_uniform_bound() const { return family != MapFamily::Identity; }
  // C = C1*sqrt(d) (component-wise) or C2 (joint). Throws for Identity.
  double uniform_bound(int d) const;
  // K = K1 (component-wise) or K3 (joint); requires an A7 family.
  double smoothness_K() const;

  std::string name() const;
};

NonlinearMap make_sign();
NonlinearMap make_cw_clip(double M = 3.5);
NonlinearMap make_quantize(double R = 1.0);
NonlinearMap make_smooth_sign(double k = 0.1);
NonlinearMap make_smooth_cw_clip(double M = 3.5);
NonlinearMap make_normalize();
NonlinearMap make_joint_clip(double M = 3.5);
NonlinearMap make_smooth_normalize(double eps = 0.1);
NonlinearMap make_smooth_joint_clip(double M = 3.5);
NonlinearMap make_identity();

// Family by config spelling ("smooth_cw_clip", ...), optional parameter
// override (M/k/eps/R per family). Unknown family -> std::invalid_argument.
NonlinearMap make_map(const std::string& family, std::optional<double> param = std::nullopt);

std::vector<NonlinearMap> all_builtin_maps();

struct PropertyEntry {
  std::string property;
  bool pass;
  double worst;  // worst observed slack-relevant value (see note)
  std::string note;
};

struct PropertyReport {
  std::vector<PropertyEntry> entries;
  int skipped_points = 0;  // grid points skipped near kinks of non-smooth maps
  bool all_pass() const;
};

// Samples oddness/bound/monotonicity and finite-difference derivative bounds
// on the given grid. Component-wise families flatten the grid to scalars;
// joint families use the vectors as-is. Central differences with
// h = 1e-5*max(1,|x|); kink neighbourhoods of non-smooth families are skipped
// and counted, not failed.
PropertyReport check_properties(const NonlinearMap& map, const std::vector<Vec>& grid,
                                double tol);

}  // namespace nlsgd
