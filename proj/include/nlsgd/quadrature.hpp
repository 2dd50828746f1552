#pragma once

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

namespace nlsgd {

struct QuadResult {
  double value;
  double error;  // achieved absolute-error estimate
};

namespace detail {
inline void require_converged(const QuadResult& r, double abs_tol, const char* what) {
  if (std::isfinite(r.value) && r.error <= abs_tol) return;
  std::ostringstream os;
  os << what << ": quadrature did not converge to abs_tol=" << abs_tol
     << " (value=" << r.value << ", error estimate=" << r.error << ")";
  throw std::runtime_error(os.str());
}
}  // namespace detail

// Finite interval, smooth integrand: adaptive Gauss-Kronrod 15.
template <class F>
QuadResult integrate_finite(F&& f, double a, double b, double abs_tol = 1e-10) {
  double err = 0.0, l1 = 0.0;
  double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      std::forward<F>(f), a, b, 15, abs_tol / 100.0, &err, &l1);
  QuadResult r{v, err};
  detail::require_converged(r, abs_tol, "integrate_finite");
  return r;
}

// Finite interval tolerating integrable endpoint singularities: tanh-sinh.
template <class F>
QuadResult integrate_endpoint_singular(F&& f, double a, double b, double abs_tol = 1e-10) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  double err = 0.0, l1 = 0.0;
  double v = integrator.integrate(std::forward<F>(f), a, b, abs_tol / 100.0, &err, &l1);
  QuadResult r{v, err};
  detail::require_converged(r, abs_tol, "integrate_endpoint_singular");
  return r;
}

// [a, +inf) with exponential or polynomial (integrable) decay: exp-sinh.
template <class F>
QuadResult integrate_halfline(F&& f, double a, double abs_tol = 1e-10) {
  boost::math::quadrature::exp_sinh<double> integrator;
  double err = 0.0, l1 = 0.0;
  double v = integrator.integrate(std::forward<F>(f), a,
                                  std::numeric_limits<double>::infinity(),
                                  abs_tol / 100.0, &err, &l1, nullptr);
  QuadResult r{v, err};
  detail::require_converged(r, abs_tol, "integrate_halfline");
  return r;
}

// Whole real line, split at 0 so |.|-type kinks at the origin are harmless.
template <class F>
QuadResult integrate_realline(F&& f, double abs_tol = 1e-10) {
  QuadResult pos = integrate_halfline(f, 0.0, abs_tol / 2.0);
  QuadResult neg = integrate_halfline([&f](double s) { return f(-s); }, 0.0, abs_tol / 2.0);
  return {pos.value + neg.value, pos.error + neg.error};
}

}  // namespace nlsgd
