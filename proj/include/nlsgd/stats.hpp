#pragma once

#include <cstddef>
#include <vector>

namespace nlsgd {

struct Moments {
  double mean;
  double var;       // sample variance, n-1 denominator
  double skewness;  // g1 = m3 / m2^{3/2}
};

Moments moments(const std::vector<double>& xs);

// Two-sample Kolmogorov-Smirnov statistic sup|F_a - F_b|.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

// Critical value c(alpha)*sqrt((n+m)/(n*m)) of the two-sample KS test.
double ks_threshold(std::size_t n, std::size_t m, double alpha);

// Nearest-rank upper quantile: r = ceil((1-delta)*n) on the ascending sort.
double quantile_nearest_rank(std::vector<double> values, double delta);

struct FitResult {
  double slope;
  double intercept;
  double r2;
  std::size_t n_points;
};

FitResult fit_linear(const std::vector<double>& xs, const std::vector<double>& ys);

// OLS on (log x, log y) restricted to x >= x_min; requires >= min_points kept.
FitResult fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys,
                     double x_min, std::size_t min_points = 4);

}  // namespace nlsgd
