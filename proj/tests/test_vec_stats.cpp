#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "nlsgd/stats.hpp"
#include "nlsgd/vec.hpp"

using namespace nlsgd;

TEST_SUITE("vec_stats") {

TEST_CASE("vector helpers") {
  Vec x{3.0, 4.0}, y{1.0, -2.0};
  CHECK(dot(x, y) == doctest::Approx(-5.0));
  CHECK(norm2(x) == doctest::Approx(5.0));
  axpy(2.0, x, y);  // y += 2x
  CHECK(y[0] == doctest::Approx(7.0));
  CHECK(y[1] == doctest::Approx(6.0));
  scale(y, 0.5);
  CHECK(y[0] == doctest::Approx(3.5));
  Vec n = negated(x);
  CHECK(n[0] == -3.0);
  CHECK(n[1] == -4.0);
  CHECK(all_finite(x));
  Vec bad{1.0, std::nan("")};
  CHECK(!all_finite(bad));
}

TEST_CASE("moments on a known dataset") {
  Moments m = moments({1.0, 2.0, 3.0, 4.0});
  CHECK(m.mean == doctest::Approx(2.5));
  CHECK(m.var == doctest::Approx(5.0 / 3.0));
  CHECK(m.skewness == doctest::Approx(0.0));
  CHECK_THROWS_AS(moments({1.0}), std::invalid_argument);
}

TEST_CASE("skewness sign for an asymmetric dataset") {
  CHECK(moments({0.0, 0.0, 0.0, 10.0}).skewness > 1.0);
  CHECK(moments({0.0, 0.0, 0.0, -10.0}).skewness < -1.0);
  CHECK(moments({5.0, 5.0, 5.0}).skewness == 0.0);
}

TEST_CASE("nearest-rank quantile") {
  std::vector<double> v;
  for (int i = 1; i <= 100; ++i) v.push_back(i);
  CHECK(quantile_nearest_rank(v, 0.1) == 90.0);
  CHECK(quantile_nearest_rank(v, 0.5) == 50.0);
  CHECK(quantile_nearest_rank(v, 0.999) == 1.0);
  CHECK(quantile_nearest_rank(v, 0.001) == 100.0);

  std::vector<double> shuffled{v.rbegin(), v.rend()};
  CHECK(quantile_nearest_rank(shuffled, 0.1) == 90.0);

  CHECK(quantile_nearest_rank({7.0}, 0.3) == 7.0);
  CHECK_THROWS_AS(quantile_nearest_rank({}, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(quantile_nearest_rank({1.0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(quantile_nearest_rank({1.0}, 1.0), std::invalid_argument);
}

TEST_CASE("quantile is monotone in the tail level") {
  std::vector<double> v;
  for (int i = 1; i <= 1000; ++i) v.push_back(std::sqrt(i));
  double last = 1e300;
  for (double delta : {0.02, 0.05, 0.1, 0.2, 0.5}) {
    double q = quantile_nearest_rank(v, delta);
    CHECK(q <= last);
    last = q;
  }
}

TEST_CASE("two-sample KS statistic") {
  CHECK(ks_two_sample({1, 2, 3}, {1, 2, 3}) == doctest::Approx(0.0));
  CHECK(ks_two_sample({1, 2, 3}, {10, 11, 12}) == doctest::Approx(1.0));
  CHECK(ks_two_sample({1, 2}, {1.5, 2.5}) == doctest::Approx(0.5));
  CHECK(ks_two_sample({1, 2}, {1.5, 2.5}) ==
        doctest::Approx(ks_two_sample({1.5, 2.5}, {1, 2})));
  CHECK_THROWS_AS(ks_two_sample({}, {1.0}), std::invalid_argument);
}

TEST_CASE("KS threshold closed form") {
  double c = std::sqrt(-0.5 * std::log(0.005));
  CHECK(ks_threshold(1000000, 1000000, 0.01) ==
        doctest::Approx(c * std::sqrt(2.0 / 1000000.0)).epsilon(1e-12));
  CHECK(ks_threshold(100, 200, 0.05) ==
        doctest::Approx(std::sqrt(-0.5 * std::log(0.025)) * std::sqrt(300.0 / 20000.0)));
}

TEST_CASE("linear fit recovers an exact line") {
  FitResult f = fit_linear({1, 2, 3, 4}, {3, 5, 7, 9});
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.r2 == doctest::Approx(1.0));
  CHECK(f.n_points == 4);
  CHECK_THROWS_AS(fit_linear({1, 1}, {2, 3}), std::invalid_argument);
}

TEST_CASE("log-log fit recovers a power law") {
  std::vector<double> xs, ys;
  for (double t : {4.0, 16.0, 64.0, 256.0, 1024.0}) {
    xs.push_back(t);
    ys.push_back(3.0 / std::sqrt(t));
  }
  FitResult f = fit_loglog(xs, ys, 0.0);
  CHECK(f.slope == doctest::Approx(-0.5).epsilon(1e-9));
  CHECK(f.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-9));
  CHECK(f.r2 == doctest::Approx(1.0));

  FitResult g = fit_loglog(xs, ys, 16.0);
  CHECK(g.n_points == 4);
  CHECK(g.slope == doctest::Approx(-0.5).epsilon(1e-9));

  CHECK_THROWS_AS(fit_loglog(xs, ys, 100.0), std::invalid_argument);
}

}
