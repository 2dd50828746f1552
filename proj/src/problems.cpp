#include "nlsgd/problems.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace nlsgd {

Problem::Problem(std::string name, int d, double L, double f_star, Vec x_init)
    : name_(std::move(name)), d_(d), L_(L), f_star_(f_star), x_init_(std::move(x_init)) {
  if (d_ < 1) throw std::invalid_argument("problem: d >= 1 required");
  if (static_cast<int>(x_init_.size()) != d_)
    throw std::invalid_argument("problem: x_init dimension mismatch");
  if (!all_finite(x_init_)) throw std::invalid_argument("problem: non-finite x_init");
}

namespace {

class Quadratic final : public Problem {
 public:
  Quadratic(int d, Vec x_init) : Problem("quadratic", d, 1.0, 0.0, std::move(x_init)) {}

  double value(const Vec& x) const override { return 0.5 * dot(x, x); }
  void grad_into(const Vec& x, Vec& out) const override { out = x; }
};

class SineQuadratic final : public Problem {
 public:
  SineQuadratic(int d, Vec x_init)
      : Problem("sine_quadratic", d, 8.0, 0.0, std::move(x_init)) {}

  double value(const Vec& x) const override {
    double v = 0.0;
    for (double xi : x) {
      double s = std::sin(xi);
      v += xi * xi + 3.0 * s * s;
    }
    return v;
  }
  void grad_into(const Vec& x, Vec& out) const override {
    out.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      out[i] = 2.0 * x[i] + 3.0 * std::sin(2.0 * x[i]);
  }
};

class LogisticSynthetic final : public Problem {
 public:
  LogisticSynthetic(int d, int n, std::uint64_t seed, Vec x_init, double ridge)
      : Problem("logistic_synthetic", d, 0.0, 0.0, std::move(x_init)),
        n_(n),
        seed_(seed),
        ridge_(ridge) {
    if (n_ < 1) throw std::invalid_argument("logistic_synthetic: n >= 1 required");
    if (!(ridge_ > 0.0)) throw std::invalid_argument("logistic_synthetic: ridge > 0 required");
    SplitMix64 g(derive_seed(seed_, 0));
    rows_.resize(static_cast<std::size_t>(n_), Vec(static_cast<std::size_t>(d)));
    labels_.resize(static_cast<std::size_t>(n_));
    Vec w_true(static_cast<std::size_t>(d));
    for (double& w : w_true) w = normal(g);
    double max_row_sq = 0.0;
    for (int i = 0; i < n_; ++i) {
      auto& row = rows_[static_cast<std::size_t>(i)];
      for (double& a : row) a = normal(g);
      max_row_sq = std::max(max_row_sq, dot(row, row));
      double margin = dot(row, w_true);
      double p_pos = 1.0 / (1.0 + std::exp(-margin));
      labels_[static_cast<std::size_t>(i)] = uniform01(g) < p_pos ? 1.0 : -1.0;
    }
    L_ = 0.25 * max_row_sq + ridge_;
    f_star_ = minimize();
  }

  double value(const Vec& x) const override {
    double v = 0.0;
    for (int i = 0; i < n_; ++i) {
      double m = labels_[static_cast<std::size_t>(i)] * dot(rows_[static_cast<std::size_t>(i)], x);
      // log(1+exp(-m)) evaluated stably
      v += m > 0.0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
    }
    return v / static_cast<double>(n_) + 0.5 * ridge_ * dot(x, x);
  }

  void grad_into(const Vec& x, Vec& out) const override {
    out.assign(x.size(), 0.0);
    for (int i = 0; i < n_; ++i) {
      const auto& row = rows_[static_cast<std::size_t>(i)];
      double b = labels_[static_cast<std::size_t>(i)];
      double m = b * dot(row, x);
      double sig = 1.0 / (1.0 + std::exp(m));  // sigmoid(-m)
      axpy(-b * sig / static_cast<double>(n_), row, out);
    }
    axpy(ridge_, x, out);
  }

  void persist_dataset(const std::string& dir) const override {
    std::string path = dir + "/logistic_dataset.csv";
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot write " + path);
    std::fprintf(f, "label");
    for (int j = 0; j < d_; ++j) std::fprintf(f, ",x%d", j);
    std::fprintf(f, "\n");
    for (int i = 0; i < n_; ++i) {
      std::fprintf(f, "%g", labels_[static_cast<std::size_t>(i)]);
      for (double a : rows_[static_cast<std::size_t>(i)]) std::fprintf(f, ",%.17g", a);
      std::fprintf(f, "\n");
    }
    std::fclose(f);
  }

 private:
  // Ridge term makes the objective strongly convex; plain gradient descent
  // with step 1/L converges linearly to the unique minimum.
  double minimize() {
    Vec x(static_cast<std::size_t>(d_), 0.0), g;
    for (int it = 0; it < 2000000; ++it) {
      grad_into(x, g);
      if (norm2(g) <= 1e-11) break;
      axpy(-1.0 / L_, g, x);
    }
    grad_into(x, g);
    if (norm2(g) > 1e-9)
      throw std::runtime_error("logistic_synthetic: minimization did not converge");
    return value(x);
  }

  int n_;
  std::uint64_t seed_;
  double ridge_;
  std::vector<Vec> rows_;
  std::vector<double> labels_;
};

}  // namespace

std::unique_ptr<Problem> make_quadratic(int d, Vec x_init) {
  return std::make_unique<Quadratic>(d, std::move(x_init));
}

std::unique_ptr<Problem> make_sine_quadratic(int d, Vec x_init) {
  return std::make_unique<SineQuadratic>(d, std::move(x_init));
}

std::unique_ptr<Problem> make_logistic_synthetic(int d, int n, std::uint64_t seed, Vec x_init,
                                                 double ridge) {
  return std::make_unique<LogisticSynthetic>(d, n, seed, std::move(x_init), ridge);
}

void oracle_call(const Problem& problem, const NoiseModel& noise, const Vec& x,
                 SplitMix64& g, Vec& out, std::uint64_t& counter) {
  problem.grad_into(x, out);
  const Vec* state =
      noise.state_dependence == StateDependence::None ? nullptr : &x;
  thread_local Vec z;
  noise.sample_into(state, g, z);
  axpy(1.0, z, out);
  ++counter;
}

}  // namespace nlsgd
