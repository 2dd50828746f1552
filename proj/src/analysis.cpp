#include "nlsgd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nlsgd/parallel.hpp"
#include "nlsgd/rng.hpp"

namespace nlsgd {

namespace {
constexpr std::uint64_t kShardSize = 65536;

struct ShardMoments {
  Vec sum, sumsq;
};
}  // namespace

DenoisedEstimate denoised_mc(const NonlinearMap& map, const NoiseModel& noise, const Vec& y,
                             std::uint64_t n_samples, std::uint64_t seed, std::uint64_t batch,
                             int workers) {
  if (n_samples < 10000) throw std::invalid_argument("denoised_mc: n_samples >= 1e4 required");
  if (noise.state_dependence != StateDependence::None)
    throw std::invalid_argument("denoised_mc: state-dependent noise not supported");
  if (static_cast<int>(y.size()) != noise.d)
    throw std::invalid_argument("denoised_mc: probe dimension mismatch");

  const std::size_t d = y.size();
  const std::uint64_t n_shards = (n_samples + kShardSize - 1) / kShardSize;
  std::vector<ShardMoments> parts(n_shards);

  parallel_for(n_shards, workers, [&](std::uint64_t s) {
    SplitMix64 g(derive_seed(seed, s));
    const std::uint64_t count = std::min(kShardSize, n_samples - s * kShardSize);
    Vec arg(d), psi, zbar(d);
    ShardMoments m{Vec(d, 0.0), Vec(d, 0.0)};
    for (std::uint64_t i = 0; i < count; ++i) {
      if (batch == 0) {
        for (std::size_t j = 0; j < d; ++j) arg[j] = y[j] + noise.component_draw(g);
      } else {
        for (std::size_t j = 0; j < d; ++j)
          arg[j] = y[j] + noise.component_draw(g) - noise.component_draw(g);
        std::fill(zbar.begin(), zbar.end(), 0.0);
        for (std::uint64_t b = 0; b < batch; ++b)
          for (std::size_t j = 0; j < d; ++j) zbar[j] += noise.component_draw(g);
        for (std::size_t j = 0; j < d; ++j) arg[j] += zbar[j] / static_cast<double>(batch);
      }
      map.apply_into(arg, psi);
      for (std::size_t j = 0; j < d; ++j) {
        m.sum[j] += psi[j];
        m.sumsq[j] += psi[j] * psi[j];
      }
    }
    parts[s] = std::move(m);
  });

  DenoisedEstimate est;
  est.y = y;
  est.n_samples = n_samples;
  est.phi_hat.assign(d, 0.0);
  est.std_err.assign(d, 0.0);
  for (const auto& m : parts) {
    for (std::size_t j = 0; j < d; ++j) {
      est.phi_hat[j] += m.sum[j];
      est.std_err[j] += m.sumsq[j];
    }
  }
  const double n = static_cast<double>(n_samples);
  for (std::size_t j = 0; j < d; ++j) {
    double mean = est.phi_hat[j] / n;
    double var = std::max(0.0, est.std_err[j] / n - mean * mean) * n / (n - 1.0);
    est.phi_hat[j] = mean;
    est.std_err[j] = std::sqrt(var / n);
  }
  return est;
}

std::vector<Vec> make_probe_grid(int d, std::uint64_t seed, int n_mags, int n_dirs, double lo,
                                 double hi) {
  if (d < 1 || n_mags < 2 || n_dirs < 1 || !(lo > 0.0) || !(hi > lo))
    throw std::invalid_argument("make_probe_grid: bad arguments");
  SplitMix64 g(derive_seed(seed, 0xD1C5ull));
  std::vector<Vec> dirs;
  dirs.reserve(static_cast<std::size_t>(n_dirs));
  for (int j = 0; j < n_dirs; ++j) {
    Vec v(static_cast<std::size_t>(d));
    double nv = 0.0;
    while (nv == 0.0) {
      for (double& c : v) c = normal(g);
      nv = norm2(v);
    }
    scale(v, 1.0 / nv);
    dirs.push_back(std::move(v));
  }
  std::vector<Vec> probes;
  probes.reserve(static_cast<std::size_t>(n_mags * n_dirs));
  for (int i = 0; i < n_mags; ++i) {
    double mag = lo * std::pow(hi / lo, static_cast<double>(i) / (n_mags - 1));
    for (const auto& dir : dirs) {
      Vec p = dir;
      scale(p, mag);
      probes.push_back(std::move(p));
    }
  }
  return probes;
}

bool BoundReport::all_pass() const {
  for (const auto& r : rows)
    if (!r.pass) return false;
  return true;
}

BoundReport verify_lower_bound(const NonlinearMap& map, const NoiseModel& noise,
                               const TheoryConstants& consts, const std::vector<Vec>& probes,
                               std::uint64_t n_samples, std::uint64_t seed, int workers) {
  BoundReport rep;
  rep.c1 = consts.c1();
  rep.c2 = consts.c2();
  rep.rows.reserve(probes.size());
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const Vec& y = probes[i];
    DenoisedEstimate est = denoised_mc(map, noise, y, n_samples, derive_seed(seed, i), 0, workers);
    double yn = norm2(y);
    double lhs = dot(est.phi_hat, y);
    double se = yn * norm2(est.std_err);
    double rhs = std::min(rep.c1 * yn, rep.c2 * yn * yn);
    double margin = lhs + 3.0 * se - rhs;
    rep.rows.push_back({y, yn, lhs, rhs, se, margin, margin >= 0.0});
  }
  return rep;
}

bool GapReport::all_pass() const {
  for (const auto& r : rows)
    if (!r.pass) return false;
  return true;
}

GapReport gap_bound_check(const NonlinearMap& map, const NoiseModel& noise, double p,
                          const std::vector<std::uint64_t>& B_list, std::uint64_t n_samples,
                          const Vec& y, std::uint64_t seed, int workers) {
  if (!(p > 1.0 && p <= 2.0)) throw std::invalid_argument("gap_bound_check: p in (1,2] required");
  if (B_list.empty()) throw std::invalid_argument("gap_bound_check: empty B list");
  GapReport rep;
  rep.p = p;
  rep.K = map.smoothness_K();
  MomentResult mom = p_moment(noise, p, 1000000, derive_seed(seed, 0x5167ull));
  if (mom.infinite)
    throw std::invalid_argument("gap_bound_check: noise lacks a finite p-th moment");
  rep.sigma = std::pow(mom.value, 1.0 / p);

  DenoisedEstimate ref =
      denoised_mc(map, symmetrize(noise), y, n_samples, derive_seed(seed, 1), 0, workers);
  std::vector<double> bs, rs;
  for (std::size_t i = 0; i < B_list.size(); ++i) {
    std::uint64_t B = B_list[i];
    if (B < 1) throw std::invalid_argument("gap_bound_check: B >= 1 required");
    DenoisedEstimate est =
        denoised_mc(map, noise, y, n_samples, derive_seed(seed, 100 + i), B, workers);
    Vec diff = est.phi_hat;
    axpy(-1.0, ref.phi_hat, diff);
    double r_hat = norm2(diff);
    double se = std::sqrt(dot(est.std_err, est.std_err) + dot(ref.std_err, ref.std_err));
    double bound = 2.0 * std::sqrt(2.0) * rep.sigma * rep.K *
                   std::pow(static_cast<double>(B), (1.0 - p) / p);
    rep.rows.push_back({B, r_hat, bound, se, r_hat <= bound + 3.0 * se});
    bs.push_back(static_cast<double>(B));
    rs.push_back(r_hat);
  }
  rep.slope = bs.size() >= 2 ? fit_loglog(bs, rs, 0.0, 2).slope : 0.0;
  return rep;
}

NoiseCheckReport effective_noise_check(const NonlinearMap& map, const NoiseModel& noise,
                                       const Vec& y, std::uint64_t n_samples,
                                       std::uint64_t seed, int workers) {
  if (n_samples < 10000)
    throw std::invalid_argument("effective_noise_check: n_samples >= 1e4 required");
  DenoisedEstimate phi =
      denoised_mc(map, noise, y, n_samples, derive_seed(seed, 1), 0, workers);

  const std::size_t d = y.size();
  const std::uint64_t n_shards = (n_samples + kShardSize - 1) / kShardSize;
  std::vector<ShardMoments> parts(n_shards);
  std::vector<double> maxes(n_shards, 0.0);
  const std::uint64_t base2 = derive_seed(seed, 2);

  parallel_for(n_shards, workers, [&](std::uint64_t s) {
    SplitMix64 g(derive_seed(base2, s));
    const std::uint64_t count = std::min(kShardSize, n_samples - s * kShardSize);
    Vec arg(d), psi, e(d);
    ShardMoments m{Vec(d, 0.0), Vec(d, 0.0)};
    double mx = 0.0;
    for (std::uint64_t i = 0; i < count; ++i) {
      for (std::size_t j = 0; j < d; ++j) arg[j] = y[j] + noise.component_draw(g);
      map.apply_into(arg, psi);
      for (std::size_t j = 0; j < d; ++j) {
        e[j] = psi[j] - phi.phi_hat[j];
        m.sum[j] += e[j];
        m.sumsq[j] += e[j] * e[j];
      }
      mx = std::max(mx, norm2(e));
    }
    parts[s] = std::move(m);
    maxes[s] = mx;
  });

  NoiseCheckReport rep;
  rep.C = map.uniform_bound(static_cast<int>(d));
  rep.n_samples = n_samples;
  rep.mean_e.assign(d, 0.0);
  rep.se_e.assign(d, 0.0);
  rep.max_e_norm = 0.0;
  for (std::uint64_t s = 0; s < n_shards; ++s) {
    rep.max_e_norm = std::max(rep.max_e_norm, maxes[s]);
    for (std::size_t j = 0; j < d; ++j) {
      rep.mean_e[j] += parts[s].sum[j];
      rep.se_e[j] += parts[s].sumsq[j];
    }
  }
  const double n = static_cast<double>(n_samples);
  rep.worst_mean_ratio = 0.0;
  bool mean_ok = true;
  for (std::size_t j = 0; j < d; ++j) {
    double mean = rep.mean_e[j] / n;
    double var = std::max(0.0, rep.se_e[j] / n - mean * mean) * n / (n - 1.0);
    double se = std::sqrt(var / n + phi.std_err[j] * phi.std_err[j]);
    rep.mean_e[j] = mean;
    rep.se_e[j] = se;
    double ratio = se > 0.0 ? std::fabs(mean) / (3.0 * se) : (mean == 0.0 ? 0.0 : 1e300);
    rep.worst_mean_ratio = std::max(rep.worst_mean_ratio, ratio);
    if (ratio > 1.0) mean_ok = false;
  }
  rep.pass_bound = rep.max_e_norm <= 2.0 * rep.C * (1.0 + 1e-12) + 1e-12;
  rep.pass_mean = mean_ok;
  return rep;
}

double SymReport::max_abs_skewness() const {
  double m = 0.0;
  for (double s : skewness) m = std::max(m, std::fabs(s));
  return m;
}

double SymReport::max_ks() const {
  double m = 0.0;
  for (double k : ks) m = std::max(m, k);
  return m;
}

double SymReport::ks_critical(double alpha) const { return ks_threshold(n, n, alpha); }

SymReport symmetry_test(const std::vector<Vec>& samples) {
  if (samples.size() < 2) throw std::invalid_argument("symmetry_test: need >= 2 samples");
  const std::size_t d = samples.front().size();
  SymReport rep;
  rep.n = samples.size();
  std::vector<double> col(samples.size()), neg(samples.size());
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      col[i] = samples[i][j];
      neg[i] = -samples[i][j];
    }
    rep.skewness.push_back(moments(col).skewness);
    rep.ks.push_back(ks_two_sample(col, neg));
  }
  return rep;
}

SymReport symmetry_test(const std::vector<double>& samples) {
  std::vector<Vec> vs(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) vs[i] = Vec{samples[i]};
  return symmetry_test(vs);
}

double quantile(const std::vector<double>& values, double delta) {
  return quantile_nearest_rank(values, delta);
}

FitResult rate_fit(const std::vector<double>& checkpoints, const std::vector<double>& quantiles,
                   double t_min) {
  return fit_loglog(checkpoints, quantiles, t_min, 4);
}

}  // namespace nlsgd
