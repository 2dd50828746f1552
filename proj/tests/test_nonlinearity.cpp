#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "nlsgd/nonlinearity.hpp"
#include "nlsgd/rng.hpp"

using namespace nlsgd;

namespace {

// 1e3-point scalar grid packed as d=1 points, kinks and tails included.
std::vector<Vec> scalar_grid(double lo, double hi, int n) {
  std::vector<Vec> g;
  for (int i = 0; i < n; ++i)
    g.push_back({lo + (hi - lo) * static_cast<double>(i) / (n - 1)});
  return g;
}

std::vector<Vec> random_points(int d, int n, std::uint64_t seed) {
  SplitMix64 g(seed);
  std::vector<Vec> pts;
  for (int i = 0; i < n; ++i) {
    Vec v(static_cast<std::size_t>(d));
    for (double& c : v) c = 4.0 * (uniform01(g) - 0.5) * 3.0;
    pts.push_back(std::move(v));
  }
  pts.push_back(Vec(static_cast<std::size_t>(d), 0.0));
  return pts;
}

}  // namespace

TEST_SUITE("nonlinearity") {

TEST_CASE("sign map point values") {
  NonlinearMap m = make_sign();
  Vec out = m.apply({2.0, -3.0, 0.0});
  CHECK(out[0] == 1.0);
  CHECK(out[1] == -1.0);
  CHECK(out[2] == 0.0);
  CHECK(m.psi(0.0) == 0.0);
  CHECK(m.psi(1e-300) == 1.0);
}

TEST_CASE("component clip point values") {
  NonlinearMap m = make_cw_clip(3.5);
  CHECK(m.apply({5.0})[0] == doctest::Approx(3.5));
  CHECK(m.psi(-5.0) == doctest::Approx(-3.5));
  CHECK(m.psi(2.0) == doctest::Approx(2.0));
}

TEST_CASE("two-level quantize") {
  NonlinearMap m = make_quantize(1.0);
  CHECK(m.psi(0.3) == 1.0);
  CHECK(m.psi(-7.0) == -1.0);
  CHECK(m.psi(0.0) == 0.0);
  CHECK(make_quantize(2.5).psi(0.1) == 2.5);
}

TEST_CASE("smooth sign is tanh(x/k)") {
  NonlinearMap m = make_smooth_sign(0.5);
  CHECK(m.psi(1.0) == doctest::Approx(std::tanh(2.0)));
  CHECK(m.psi_prime(0.0) == doctest::Approx(2.0));  // 1/k
  CHECK(m.smoothness_K() == doctest::Approx(2.0));
  CHECK(*m.bounds.K2 == doctest::Approx(4.0 * std::sqrt(3.0) / (9.0 * 0.25)));
}

TEST_CASE("smooth clip boundary and derivative") {
  NonlinearMap m = make_smooth_cw_clip(3.5);
  CHECK(m.psi(3.5) == doctest::Approx(3.5).epsilon(1e-14));
  CHECK(m.psi(-3.5) == doctest::Approx(-3.5).epsilon(1e-14));
  CHECK(m.psi(100.0) == doctest::Approx(3.5));
  CHECK(m.psi_prime(0.0) == doctest::Approx(1.875));
  CHECK(m.psi_prime(3.5) == 0.0);
  CHECK(m.psi_prime(10.0) == 0.0);
  // interior value from the quintic profile at x = M/2
  double x = 1.75, q = 0.25;
  CHECK(m.psi(x) == doctest::Approx(0.625 * x * (3.0 - 2.0 * q + 0.6 * q * q)));
}

TEST_CASE("second-derivative bound is attained inside, not exceeded") {
  NonlinearMap m = make_smooth_cw_clip(2.0);
  double k2 = *m.bounds.K2;
  double worst = 0.0;
  for (int i = 0; i <= 4000; ++i) {
    double x = -2.5 + 5.0 * i / 4000.0;
    double h = 1e-5;
    double fd2 = std::fabs((m.psi(x + h) - 2.0 * m.psi(x) + m.psi(x - h)) / (h * h));
    worst = std::max(worst, fd2);
  }
  CHECK(worst <= k2 + 1e-4);
  CHECK(worst >= 0.9 * k2);  // the bound is tight
}

TEST_CASE("joint normalize") {
  NonlinearMap m = make_normalize();
  Vec out = m.apply({3.0, 4.0});
  CHECK(out[0] == doctest::Approx(0.6));
  CHECK(out[1] == doctest::Approx(0.8));
  out = m.apply({0.0, 0.0});
  CHECK(out[0] == 0.0);
  CHECK(out[1] == 0.0);
}

TEST_CASE("joint clip") {
  NonlinearMap m = make_joint_clip(3.5);
  Vec in{3.0, 4.0};  // norm 5 > 3.5
  Vec out = m.apply(in);
  CHECK(norm2(out) == doctest::Approx(3.5));
  CHECK(out[0] / out[1] == doctest::Approx(0.75));
  Vec small{0.3, 0.4};
  out = m.apply(small);
  CHECK(out[0] == doctest::Approx(0.3));
}

TEST_CASE("smooth normalize") {
  NonlinearMap m = make_smooth_normalize(0.1);
  Vec out = m.apply({3.0, 4.0});
  double s = 1.0 / std::sqrt(25.0 + 0.1);
  CHECK(out[0] == doctest::Approx(3.0 * s));
  CHECK(norm2(m.apply({1e8, 0.0})) <= 1.0 + 1e-12);
  CHECK(m.smoothness_K() == doctest::Approx(1.0 / std::sqrt(0.1)));
}

TEST_CASE("smooth joint clip branches agree at the junction") {
  NonlinearMap m = make_smooth_joint_clip(3.5);
  Vec on_sphere{3.5, 0.0};
  Vec out = m.apply(on_sphere);
  CHECK(out[0] == doctest::Approx(3.5).epsilon(1e-14));  // both branches give x
  Vec inside{1.0, 1.0};
  double r2 = 2.0;
  double s = 1.5 * (1.0 - r2 / (3.0 * 3.5 * 3.5));
  CHECK(m.apply(inside)[0] == doctest::Approx(s));
  Vec outside{30.0, 40.0};
  CHECK(norm2(m.apply(outside)) == doctest::Approx(3.5));
}

TEST_CASE("uniform bounds") {
  CHECK(make_sign().uniform_bound(4) == doctest::Approx(2.0));
  CHECK(make_normalize().uniform_bound(17) == doctest::Approx(1.0));
  CHECK(make_joint_clip(3.5).uniform_bound(3) == doctest::Approx(3.5));
  CHECK(make_cw_clip(2.0).uniform_bound(9) == doctest::Approx(6.0));
  CHECK_THROWS_AS(make_identity().uniform_bound(2), std::invalid_argument);
  CHECK_THROWS_AS(make_sign().uniform_bound(0), std::invalid_argument);
}

TEST_CASE("assumption classes") {
  CHECK(make_sign().assumption_class == A5);
  CHECK(make_cw_clip().assumption_class == A5);
  CHECK(make_quantize().assumption_class == A5);
  CHECK(make_normalize().assumption_class == (A5 | A6));
  CHECK(make_joint_clip().assumption_class == (A5 | A6));
  CHECK(make_smooth_sign().assumption_class == (A5 | A6 | A7));
  CHECK(make_smooth_cw_clip().assumption_class == (A5 | A6 | A7));
  CHECK(make_smooth_normalize().assumption_class == (A5 | A6 | A7));
  CHECK(make_smooth_joint_clip().assumption_class == (A5 | A6 | A7));
  CHECK(make_identity().assumption_class == 0u);
  CHECK_THROWS_AS(make_sign().smoothness_K(), std::invalid_argument);
}

TEST_CASE("factory by family name") {
  CHECK(make_map("smooth_sign", 0.25).name() == "smooth_sign(k=0.25)");
  CHECK(make_map("sign").name() == "sign");
  CHECK(make_map("joint_clip").param == doctest::Approx(3.5));
  CHECK_THROWS_AS(make_map("toto"), std::invalid_argument);
  CHECK_THROWS_AS(make_map("smooth_sign", -1.0), std::invalid_argument);
}

TEST_CASE("oddness is exact at the bit level") {
  for (const auto& m : all_builtin_maps()) {
    if (m.kind != MapKind::ComponentWise) continue;
    for (double x : {0.0, 1e-30, 0.37, 1.0, 3.5, 1e10}) {
      CHECK(m.psi(-x) == -m.psi(x));
    }
  }
}

TEST_CASE("property suite passes for every built-in family") {
  auto cw_grid = scalar_grid(-8.0, 8.0, 1001);
  auto joint_grid = random_points(3, 200, 99);
  for (const auto& m : all_builtin_maps()) {
    const auto& grid = m.kind == MapKind::ComponentWise ? cw_grid : joint_grid;
    PropertyReport rep = check_properties(m, grid, 1e-4);
    INFO("map: ", m.name());
    for (const auto& e : rep.entries) {
      INFO("property: ", e.property, " worst: ", e.worst);
      CHECK(e.pass);
    }
    CHECK(rep.all_pass());
  }
}

TEST_CASE("property suite rejects a wrong claimed bound") {
  NonlinearMap m = make_cw_clip(3.5);
  m.bounds.C1 = 3.0;  // claim tighter than the actual output
  PropertyReport rep = check_properties(m, scalar_grid(-8.0, 8.0, 101), 1e-4);
  CHECK(!rep.all_pass());
}

TEST_CASE("non-finite input is rejected") {
  CHECK_THROWS_AS(make_sign().psi(std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS(make_normalize().apply({1.0, std::numeric_limits<double>::infinity()}),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_normalize().psi(1.0), std::invalid_argument);
}

}
