#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "nlsgd/analysis.hpp"

using namespace nlsgd;

TEST_SUITE("analysis") {

TEST_CASE("denoised map with zero noise is the map itself") {
  NonlinearMap m = make_smooth_sign(0.1);
  NoiseModel zero = make_gaussian(0.0, 2);
  Vec y{0.3, -0.4};
  DenoisedEstimate e = denoised_mc(m, zero, y, 20000, 1);
  CHECK(e.phi_hat[0] == doctest::Approx(std::tanh(3.0)).epsilon(1e-12));
  CHECK(e.phi_hat[1] == doctest::Approx(std::tanh(-4.0)).epsilon(1e-12));
  CHECK(e.std_err[0] < 1e-8);  // cancellation noise only
  CHECK(e.n_samples == 20000);

  DenoisedEstimate b = denoised_mc(m, zero, y, 20000, 1, 8);
  CHECK(b.phi_hat[0] == e.phi_hat[0]);
}

TEST_CASE("denoised map is worker-count invariant") {
  NonlinearMap m = make_smooth_sign(0.1);
  NoiseModel pt = make_poly_tail(3.0, 2);
  Vec y{0.5, -1.0};
  DenoisedEstimate w1 = denoised_mc(m, pt, y, 200000, 42, 0, 1);
  DenoisedEstimate w4 = denoised_mc(m, pt, y, 200000, 42, 0, 4);
  CHECK(w1.phi_hat == w4.phi_hat);
  CHECK(w1.std_err == w4.std_err);

  DenoisedEstimate b1 = denoised_mc(m, pt, y, 100000, 42, 16, 1);
  DenoisedEstimate b4 = denoised_mc(m, pt, y, 100000, 42, 16, 4);
  CHECK(b1.phi_hat == b4.phi_hat);
}

TEST_CASE("standard error shrinks like 1/sqrt(n)") {
  NonlinearMap m = make_smooth_sign(0.5);
  NoiseModel pt = make_poly_tail(3.0, 1);
  Vec y{0.2};
  double se1 = denoised_mc(m, pt, y, 100000, 5).std_err[0];
  double se4 = denoised_mc(m, pt, y, 400000, 5).std_err[0];
  CHECK(se1 / se4 == doctest::Approx(2.0).epsilon(0.2));
  CHECK(se1 > 0.0);
}

TEST_CASE("denoised sign recovers the known tail value") {
  // For the heavy-tail law with index 3, E[sign(1+z)] = 2F(1) - 1 = 3/4.
  NoiseModel pt = make_poly_tail(3.0, 1);
  DenoisedEstimate e = denoised_mc(make_sign(), pt, {1.0}, 400000, 9);
  CHECK(e.phi_hat[0] == doctest::Approx(0.75).epsilon(0.01));
  CHECK(std::fabs(e.phi_hat[0] - 0.75) < 4.0 * e.std_err[0] + 1e-3);
}

TEST_CASE("denoised input validation") {
  NonlinearMap m = make_sign();
  NoiseModel pt = make_poly_tail(3.0, 2);
  CHECK_THROWS_AS(denoised_mc(m, pt, {1.0, 1.0}, 5000, 1), std::invalid_argument);
  CHECK_THROWS_AS(denoised_mc(m, pt, {1.0}, 20000, 1), std::invalid_argument);
  NoiseModel rad = with_radial_scale(make_gaussian(1.0, 2));
  CHECK_THROWS_AS(denoised_mc(m, rad, {1.0, 1.0}, 20000, 1), std::invalid_argument);
}

TEST_CASE("probe grid shape") {
  auto grid = make_probe_grid(3, 11);
  REQUIRE(grid.size() == 100);
  for (const Vec& y : grid) {
    REQUIRE(y.size() == 3);
    CHECK(norm2(y) >= 1e-2 * (1.0 - 1e-9));
    CHECK(norm2(y) <= 10.0 * (1.0 + 1e-9));
  }
  // Magnitude-major: the first n_dirs entries share the smallest magnitude.
  for (int j = 0; j < 5; ++j) CHECK(norm2(grid[j]) == doctest::Approx(1e-2));
  CHECK(make_probe_grid(3, 11) == grid);
  CHECK_THROWS_AS(make_probe_grid(0, 1), std::invalid_argument);
}

TEST_CASE("lower bound verification passes for the closed-form pair") {
  NoiseModel pt = make_poly_tail(3.0, 2);
  TheoryConstants c = constants_example1(3.0, 2);
  auto probes = make_probe_grid(2, 21, 10, 2);
  BoundReport r = verify_lower_bound(make_sign(), pt, c, probes, 100000, 33);
  CHECK(r.c1 == doctest::Approx(c.gamma1));
  CHECK(r.c2 == doctest::Approx(c.gamma2));
  REQUIRE(r.rows.size() == 20);
  CHECK(r.all_pass());
  for (const auto& row : r.rows) {
    CHECK(row.rhs == doctest::Approx(std::min(r.c1 * row.y_norm, r.c2 * row.y_norm * row.y_norm)));
    CHECK(row.margin == doctest::Approx(row.lhs + 3.0 * row.se - row.rhs));
  }
}

TEST_CASE("lower bound verification flags inflated constants") {
  NoiseModel pt = make_poly_tail(3.0, 1);
  TheoryConstants c = constants_example1(3.0, 1);
  c.gamma1 *= 40.0;  // far beyond the true curve
  c.gamma2 *= 40.0;
  auto probes = make_probe_grid(1, 5, 8, 1);
  BoundReport r = verify_lower_bound(make_sign(), pt, c, probes, 50000, 13);
  CHECK(!r.all_pass());
}

TEST_CASE("mini-batch gap obeys the moment bound and decays") {
  NonlinearMap m = make_smooth_sign(0.1);
  NoiseModel ce = make_centered_exponential(1.0, 1);
  GapReport r = gap_bound_check(m, ce, 1.5, {4, 16, 64, 256}, 200000, {0.5}, 17);
  CHECK(r.K == doctest::Approx(10.0));
  CHECK(r.sigma > 0.0);
  CHECK(r.p == 1.5);
  REQUIRE(r.rows.size() == 4);
  CHECK(r.all_pass());
  CHECK(r.slope < 0.0);
  for (const auto& row : r.rows)
    CHECK(row.bound == doctest::Approx(2.0 * std::sqrt(2.0) * r.sigma * r.K *
                                       std::pow(double(row.B), (1.0 - r.p) / r.p)));
}

TEST_CASE("gap check validation") {
  NonlinearMap m = make_smooth_sign(0.1);
  NoiseModel cauchy = make_cauchy(1.0, 1);
  CHECK_THROWS_WITH_AS(gap_bound_check(m, cauchy, 1.5, {4}, 20000, {0.5}, 1),
                       doctest::Contains("finite p-th moment"), std::invalid_argument);
  NoiseModel ce = make_centered_exponential(1.0, 1);
  CHECK_THROWS_AS(gap_bound_check(m, ce, 1.0, {4}, 20000, {0.5}, 1), std::invalid_argument);
  CHECK_THROWS_AS(gap_bound_check(m, ce, 1.5, {}, 20000, {0.5}, 1), std::invalid_argument);
  NonlinearMap clip = make_cw_clip(3.5);  // no smoothness constant
  CHECK_THROWS_AS(gap_bound_check(clip, ce, 1.5, {4}, 20000, {0.5}, 1), std::invalid_argument);
}

TEST_CASE("effective noise is bounded by 2C and centered") {
  NonlinearMap m = make_sign();
  NoiseModel pt = make_poly_tail(3.0, 3);
  Vec y{0.4, -0.2, 1.0};
  NoiseCheckReport r = effective_noise_check(m, pt, y, 50000, 23);
  CHECK(r.C == doctest::Approx(std::sqrt(3.0)));
  CHECK(r.pass_bound);
  CHECK(r.pass_mean);
  CHECK(r.max_e_norm <= 2.0 * r.C * (1.0 + 1e-9));
  CHECK(r.worst_mean_ratio < 1.0);
  CHECK(r.n_samples == 50000);
}

TEST_CASE("symmetry diagnostics") {
  SplitMix64 g(3);
  std::vector<double> sym(20000), skewed(20000);
  for (std::size_t i = 0; i < sym.size(); ++i) {
    sym[i] = normal(g);
    skewed[i] = std::exp(normal(g));
  }
  SymReport rs = symmetry_test(sym);
  CHECK(rs.max_abs_skewness() < 0.05);
  CHECK(rs.max_ks() < rs.ks_critical(0.01));

  SymReport rk = symmetry_test(skewed);
  CHECK(rk.max_abs_skewness() > 1.0);
  CHECK(rk.max_ks() > rk.ks_critical(0.01));

  std::vector<Vec> vecs(5000, Vec(2));
  for (auto& v : vecs) {
    v[0] = normal(g);
    v[1] = std::exp(normal(g));
  }
  SymReport rv = symmetry_test(vecs);
  REQUIRE(rv.ks.size() == 2);
  CHECK(rv.ks[0] < rv.ks_critical(0.01));
  CHECK(rv.ks[1] > rv.ks_critical(0.01));
}

TEST_CASE("quantile and rate fit delegate to the shared routines") {
  std::vector<double> v;
  for (int i = 1; i <= 100; ++i) v.push_back(double(i));
  CHECK(quantile(v, 0.1) == 90.0);

  std::vector<double> ts, qs;
  for (int k = 2; k <= 12; ++k) {
    double t = std::pow(2.0, k);
    ts.push_back(t);
    qs.push_back(3.0 / std::sqrt(t));
  }
  FitResult f = rate_fit(ts, qs, 16.0);
  CHECK(f.slope == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(rate_fit({1.0, 2.0, 4.0}, {1.0, 0.5, 0.25}, 1.0), std::invalid_argument);
}

}
