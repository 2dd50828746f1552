#include "nlsgd/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nlsgd {

Moments moments(const std::vector<double>& xs) {
  const std::size_t n = xs.size();
  if (n < 2) throw std::invalid_argument("moments: need at least 2 values");
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(n);
  double m2 = 0.0, m3 = 0.0;
  for (double x : xs) {
    double d = x - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  double var = m2 / static_cast<double>(n - 1);
  m2 /= static_cast<double>(n);
  m3 /= static_cast<double>(n);
  double skew = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
  return {mean, var, skew};
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_threshold(std::size_t n, std::size_t m, double alpha) {
  if (alpha <= 0.0 || alpha >= 1.0) throw std::invalid_argument("ks_threshold: alpha in (0,1)");
  double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
  double nm = static_cast<double>(n) * static_cast<double>(m);
  return c * std::sqrt(static_cast<double>(n + m) / nm);
}

double quantile_nearest_rank(std::vector<double> values, double delta) {
  if (values.empty()) throw std::invalid_argument("quantile: empty values");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("quantile: delta in (0,1)");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  double rd = std::ceil((1.0 - delta) * static_cast<double>(n));
  std::size_t r = rd < 1.0 ? 1 : static_cast<std::size_t>(rd);
  if (r > n) r = n;
  return values[r - 1];
}

FitResult fit_linear(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  if (n != ys.size() || n < 2) throw std::invalid_argument("fit_linear: need >= 2 paired points");
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  double mx = sx / static_cast<double>(n), my = sy / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = xs[i] - mx, dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_linear: degenerate abscissae");
  double slope = sxy / sxx;
  double intercept = my - slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = ys[i] - (intercept + slope * xs[i]);
    ss_res += r * r;
  }
  double r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return {slope, intercept, r2, n};
}

FitResult fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys,
                     double x_min, std::size_t min_points) {
  if (xs.size() != ys.size()) throw std::invalid_argument("fit_loglog: length mismatch");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] >= x_min && xs[i] > 0.0 && ys[i] > 0.0) {
      lx.push_back(std::log(xs[i]));
      ly.push_back(std::log(ys[i]));
    }
  }
  if (lx.size() < min_points)
    throw std::invalid_argument("fit_loglog: fewer than required points at x >= x_min");
  return fit_linear(lx, ly);
}

}  // namespace nlsgd
