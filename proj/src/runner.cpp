#include "nlsgd/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "nlsgd/analysis.hpp"
#include "nlsgd/parallel.hpp"
#include "nlsgd/rng.hpp"
#include "nlsgd/stats.hpp"

namespace nlsgd {

namespace {

std::string fmt_g(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

Variant variant_for(EstimatorKind k) {
  switch (k) {
    case EstimatorKind::SGD: return Variant::NSGD;
    case EstimatorKind::SGE: return Variant::NSGE;
    default: return Variant::NMSGE;
  }
}

double metric_value(const CheckpointRow& row, const std::string& metric) {
  if (metric == "avg_min_metric") return row.avg_min_metric;
  if (metric == "min_grad_sq") return row.min_grad_sq;
  throw std::invalid_argument("unknown metric '" + metric + "'");
}

const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> names{"avg_min_metric", "min_grad_sq"};
  return names;
}

void open_out(std::ofstream& f, const std::string& path) {
  f.open(path, std::ios::binary);  // LF line endings on every platform
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
}

}  // namespace

EnsembleResult run_ensemble(const ExperimentSpec& spec, int workers) {
  auto problem = build_problem(spec.problem, spec.run.seed);
  NoiseModel noise = build_noise(spec.noise, spec.problem.d);
  NonlinearMap map = build_map(spec.nonlinearity);
  EstimatorConfig est_cfg = build_estimator_config(spec.estimator);

  EnsembleResult res;
  res.base_seed = spec.run.seed;
  res.warnings = spec.warnings;
  res.checkpoints =
      spec.run.checkpoints.empty() ? default_checkpoints(spec.run.T) : spec.run.checkpoints;

  try {
    res.consts = resolve_constants(map, noise, est_cfg.kind, spec.run.seed);
    res.consts_known = true;
  } catch (const std::exception& e) {
    res.warnings.push_back(std::string("constants not resolved: ") + e.what());
  }
  if (res.consts_known) {
    try {
      res.cap = step_cap(*problem, map, res.consts, spec.run.eta, variant_for(est_cfg.kind));
      res.cap_known = true;
    } catch (const std::exception& e) {
      res.warnings.push_back(std::string("step cap not computed: ") + e.what());
    }
  }

  if (spec.run.a == "auto") {
    if (!res.cap_known)
      throw ConfigError("run.a = \"auto\" requires a computable step cap; " +
                        res.warnings.back());
    res.a_used = res.cap;
  } else {
    res.a_used = std::stod(spec.run.a);
  }
  if (res.cap_known) {
    res.compliant_known = true;
    res.compliant = res.a_used <= res.cap * (1.0 + 1e-12) && spec.run.eta >= 0.5 &&
                    spec.run.eta < 1.0;
    if (!res.compliant)
      res.warnings.push_back("step size outside the theorem regime (a > cap or eta < 1/2); "
                             "run proceeds, compliance flag false");
  }

  const int n = spec.run.trials;
  res.trials.resize(static_cast<std::size_t>(n));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
  parallel_for(static_cast<std::uint64_t>(n), workers, [&](std::uint64_t i) {
    try {
      RunConfig rc;
      rc.a = res.a_used;
      rc.eta = spec.run.eta;
      rc.T = spec.run.T;
      rc.checkpoints = res.checkpoints;
      rc.seed = derive_seed(spec.run.seed, i);
      rc.record_trajectory = spec.run.record_trajectory;
      res.trials[i] = run(*problem, noise, map, est_cfg, rc);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::vector<double> values(static_cast<std::size_t>(n));
  for (const auto& metric : metric_names()) {
    for (double delta : spec.analysis.deltas) {
      for (std::size_t ci = 0; ci < res.checkpoints.size(); ++ci) {
        for (int i = 0; i < n; ++i)
          values[static_cast<std::size_t>(i)] =
              metric_value(res.trials[static_cast<std::size_t>(i)].rows[ci], metric);
        res.quantiles.push_back(
            {res.checkpoints[ci], delta, metric, quantile(values, delta)});
      }
      std::vector<double> ts, qs;
      for (std::size_t ci = 0; ci < res.checkpoints.size(); ++ci) {
        ts.push_back(static_cast<double>(res.checkpoints[ci]));
        qs.push_back(res.quantiles[res.quantiles.size() - res.checkpoints.size() + ci].quantile);
      }
      try {
        FitResult fit = rate_fit(ts, qs, static_cast<double>(spec.analysis.t_min));
        res.fits.push_back(
            {metric, delta, spec.analysis.t_min, fit.slope, fit.intercept, fit.r2});
      } catch (const std::exception& e) {
        res.warnings.push_back("rate fit skipped for metric=" + metric +
                               ", delta=" + fmt_g(delta) + ": " + e.what());
      }
    }
  }
  return res;
}

void write_outputs(const ExperimentSpec& spec, const EnsembleResult& res,
                   const std::string& out_dir, int workers) {
  std::filesystem::create_directories(out_dir);
  const std::string sep = "/";

  {
    std::ofstream f;
    open_out(f, out_dir + sep + "summaries.csv");
    f << "trial_id,t,avg_min_metric,min_grad_sq,f_value,oracle_calls\n";
    for (std::size_t i = 0; i < res.trials.size(); ++i)
      for (const auto& row : res.trials[i].rows)
        f << i << ',' << row.t << ',' << fmt_g(row.avg_min_metric) << ','
          << fmt_g(row.min_grad_sq) << ',' << fmt_g(row.f_value) << ',' << row.oracle_calls
          << '\n';
  }
  {
    std::ofstream f;
    open_out(f, out_dir + sep + "quantiles.csv");
    f << "t,delta,metric,quantile\n";
    for (const auto& q : res.quantiles)
      f << q.t << ',' << fmt_g(q.delta) << ',' << q.metric << ',' << fmt_g(q.quantile) << '\n';
  }
  {
    std::ofstream f;
    open_out(f, out_dir + sep + "ratefit.csv");
    f << "metric,delta,t_min,slope,intercept,r2\n";
    for (const auto& r : res.fits)
      f << r.metric << ',' << fmt_g(r.delta) << ',' << r.t_min << ',' << fmt_g(r.slope) << ','
        << fmt_g(r.intercept) << ',' << fmt_g(r.r2) << '\n';
  }
  for (const auto& metric : metric_names()) {
    for (double delta : spec.analysis.deltas) {
      std::ofstream f;
      open_out(f, out_dir + sep + "plot_" + metric + "_delta_" + fmt_g(delta) + ".dat");
      for (const auto& q : res.quantiles)
        if (q.metric == metric && q.delta == delta)
          f << q.t << ' ' << fmt_g(q.quantile) << '\n';
    }
  }

  nlohmann::json meta;
  meta["version"] = kVersion;
  meta["problem"] = spec.problem.name;
  meta["d"] = spec.problem.d;
  {
    NoiseModel noise = build_noise(spec.noise, spec.problem.d);
    NonlinearMap map = build_map(spec.nonlinearity);
    meta["noise"] = noise.name();
    meta["nonlinearity"] = map.name();
  }
  meta["estimator"] = spec.estimator.kind;
  meta["p"] = spec.estimator.p;
  meta["eta"] = spec.run.eta;
  meta["T"] = spec.run.T;
  meta["trials"] = spec.run.trials;
  meta["a_requested"] = spec.run.a;
  meta["a_used"] = res.a_used;
  meta["step_cap"] = res.cap_known ? nlohmann::json(res.cap) : nlohmann::json(nullptr);
  meta["compliant"] =
      res.compliant_known ? nlohmann::json(res.compliant) : nlohmann::json(nullptr);
  if (res.consts_known) {
    nlohmann::json c;
    c["gamma1"] = res.consts.gamma1;
    c["gamma2"] = res.consts.gamma2;
    c["beta1"] = res.consts.beta1;
    c["beta2"] = res.consts.beta2;
    c["j_alpha"] = res.consts.j_alpha;
    c["phi_prime0"] = res.consts.phi_prime0;
    c["xi"] = res.consts.xi;
    c["provenance"] = provenance_name(res.consts.provenance);
    meta["constants"] = c;
  } else {
    meta["constants"] = nullptr;
  }
  meta["base_seed"] = res.base_seed;
  meta["trial_seed_rule"] = "seed_i = splitmix64(base_seed ^ 0x9E3779B97F4A7C15*(i+1))";
  std::vector<std::uint64_t> trial_seeds;
  for (int i = 0; i < spec.run.trials; ++i)
    trial_seeds.push_back(derive_seed(res.base_seed, static_cast<std::uint64_t>(i)));
  meta["trial_seeds"] = trial_seeds;
  meta["checkpoints"] = res.checkpoints;
  meta["workers"] = workers;
  meta["warnings"] = res.warnings;
  {
    std::ofstream f;
    open_out(f, out_dir + sep + "run_meta.json");
    f << meta.dump(2) << '\n';
  }

  build_problem(spec.problem, spec.run.seed)->persist_dataset(out_dir);
}

bool VerifyResult::all_pass() const {
  for (const auto& r : rows)
    if (!r.pass) return false;
  return true;
}

VerifyResult run_verify(const ExperimentSpec& spec, int workers) {
  auto problem = build_problem(spec.problem, spec.run.seed);
  NoiseModel noise = build_noise(spec.noise, spec.problem.d);
  NonlinearMap map = build_map(spec.nonlinearity);
  EstimatorConfig est_cfg = build_estimator_config(spec.estimator);
  const std::uint64_t seed = spec.run.seed;
  const std::uint64_t n_samples = spec.analysis.n_samples;
  const int d = spec.problem.d;

  VerifyResult out;
  const bool state_free = noise.state_dependence == StateDependence::None;
  const bool bounded = map.has_uniform_bound();
  const bool smooth = (map.assumption_class & A7) != 0;

  // Effective per-component law seen by the map: raw for SGD, symmetrized
  // difference for the two-point estimators.
  NoiseModel eff = noise;
  bool eff_ok = true;
  if (est_cfg.kind != EstimatorKind::SGD) {
    if (state_free) {
      eff = symmetrize(noise);
    } else {
      eff_ok = false;
      out.notes.push_back("effective law of a state-dependent model is not samplable in "
                          "isolation; symmetry checked on the base law");
    }
  }

  TheoryConstants consts;
  bool consts_known = false;
  if (state_free) {
    try {
      consts = resolve_constants(map, noise, est_cfg.kind, seed);
      consts_known = true;
    } catch (const std::exception& e) {
      out.notes.push_back(std::string("lower-bound check skipped: ") + e.what());
    }
  } else {
    out.notes.push_back("lower-bound check skipped: state-dependent noise has no "
                        "resolvable constants");
  }

  if (consts_known && bounded) {
    int n_dirs = std::max(1, (spec.analysis.probes + 19) / 20);
    std::vector<Vec> probes = make_probe_grid(d, derive_seed(seed, 0x10B5ull), 20, n_dirs);
    probes.resize(std::min<std::size_t>(probes.size(),
                                        static_cast<std::size_t>(spec.analysis.probes)));
    NoiseModel probe_noise = est_cfg.kind == EstimatorKind::SGD ? noise : eff;
    BoundReport rep =
        verify_lower_bound(map, probe_noise, consts, probes, n_samples,
                           derive_seed(seed, 0x10B6ull), workers);
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
      const auto& r = rep.rows[i];
      out.rows.push_back({"lower_bound", std::to_string(i), r.lhs, r.rhs, r.se, r.pass});
    }
  }

  // Quadrature-vs-sampling cross-check; meaningless when the constants were
  // themselves Monte-Carlo.
  if (consts_known && smooth && map.kind == MapKind::ComponentWise &&
      consts.phi_prime0 > 0.0 && consts.provenance != Provenance::MonteCarlo && state_free &&
      eff_ok) {
    const std::uint64_t n_mc = std::max<std::uint64_t>(n_samples, 1000000);
    SplitMix64 g(derive_seed(seed, 0xC2C2ull));
    double sum = 0.0, sumsq = 0.0;
    for (std::uint64_t i = 0; i < n_mc; ++i) {
      double v = map.psi_prime(eff.component_draw(g));
      sum += v;
      sumsq += v * v;
    }
    double mean = sum / static_cast<double>(n_mc);
    double var = std::max(0.0, sumsq / static_cast<double>(n_mc) - mean * mean);
    double se = std::sqrt(var / static_cast<double>(n_mc));
    bool pass = std::fabs(consts.phi_prime0 - mean) <=
                std::max(3.0 * se, 0.01 * std::fabs(consts.phi_prime0));
    out.rows.push_back({"phi_prime0", "quad_vs_mc", consts.phi_prime0, mean, se, pass});
  }

  if (smooth && state_free) {
    MomentResult mom = p_moment(noise, est_cfg.p, 1000000, derive_seed(seed, 0x5167ull));
    if (mom.infinite) {
      out.notes.push_back("gap-bound check skipped: estimator.p moment is infinite for "
                          "this noise");
    } else {
      Vec y = problem->x_init();
      double yn = norm2(y);
      if (yn == 0.0) {
        y.assign(static_cast<std::size_t>(d), 0.0);
        y[0] = 1.0;
      } else {
        scale(y, 1.0 / yn);
      }
      GapReport rep = gap_bound_check(map, noise, est_cfg.p, spec.analysis.batches, n_samples,
                                      y, derive_seed(seed, 0x6A9Bull), workers);
      for (const auto& r : rep.rows)
        out.rows.push_back({"gap_bound", std::to_string(r.B), r.r_hat, r.bound, r.se, r.pass});
      double slope_cap = (1.0 - est_cfg.p) / est_cfg.p + 0.15;
      out.rows.push_back(
          {"gap_slope", "loglog", rep.slope, slope_cap, 0.0, rep.slope <= slope_cap});
    }
  } else if (!smooth) {
    out.notes.push_back("gap-bound check skipped: nonlinearity has no smoothness constant");
  }

  if (bounded && state_free && eff_ok) {
    Vec y = problem->grad(problem->x_init());
    NoiseCheckReport rep =
        effective_noise_check(map, eff, y, n_samples, derive_seed(seed, 0xE44Eull), workers);
    out.rows.push_back({"effective_noise_bound", "max_norm", rep.max_e_norm,
                        2.0 * rep.C * (1.0 + 1e-12) + 1e-12, 0.0, rep.pass_bound});
    for (std::size_t j = 0; j < rep.mean_e.size(); ++j)
      out.rows.push_back({"effective_noise_mean", std::to_string(j), rep.mean_e[j],
                          3.0 * rep.se_e[j], rep.se_e[j],
                          std::fabs(rep.mean_e[j]) <= 3.0 * rep.se_e[j]});
  } else if (!bounded) {
    out.notes.push_back("effective-noise check skipped: identity baseline has no uniform "
                        "bound");
  }

  {
    const NoiseModel& sym_target = eff_ok ? eff : noise;
    const std::uint64_t n_sym = std::min<std::uint64_t>(n_samples, 1000000);
    SplitMix64 g(derive_seed(seed, 0x57AAull));
    std::vector<double> s1(n_sym), s2(n_sym);
    for (auto& v : s1) v = sym_target.component_draw(g);
    for (auto& v : s2) v = -sym_target.component_draw(g);
    double dstat = ks_two_sample(s1, s2);
    double thr = ks_threshold(n_sym, n_sym, 0.01);
    out.rows.push_back({"symmetry_ks", "split_sample", dstat, thr, 0.0, dstat <= thr});
    if (sym_target.p_max > 3.0) {
      double skew = moments(s1).skewness;
      double thr_skew = std::max(0.02, 3.0 * std::sqrt(6.0 / static_cast<double>(n_sym)));
      out.rows.push_back(
          {"symmetry_skew", "component", skew, thr_skew, std::sqrt(6.0 / n_sym),
           std::fabs(skew) <= thr_skew});
    } else {
      out.notes.push_back("skewness check skipped: third moment not finite for this law");
    }
  }

  if (out.rows.empty())
    throw ConfigError("no verification check applies to this configuration");
  return out;
}

void write_verify_csv(const VerifyResult& res, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::ofstream f;
  open_out(f, out_dir + "/verify.csv");
  f << "check,probe,lhs,rhs,se,pass\n";
  for (const auto& r : res.rows)
    f << r.check << ',' << r.probe << ',' << fmt_g(r.lhs) << ',' << fmt_g(r.rhs) << ','
      << fmt_g(r.se) << ',' << (r.pass ? "true" : "false") << '\n';
}

namespace {

int cmd_run(const std::string& config, const std::string& out_dir, bool seed_set,
            std::uint64_t seed, int workers) {
  ExperimentSpec spec = parse_config_file(config);
  if (seed_set) spec.run.seed = seed;
  EnsembleResult res = run_ensemble(spec, workers);
  write_outputs(spec, res, out_dir, workers);
  std::cout << "trials: " << res.trials.size() << "  T: " << spec.run.T
            << "  a: " << fmt_g(res.a_used);
  if (res.cap_known) std::cout << "  step_cap: " << fmt_g(res.cap);
  if (res.compliant_known)
    std::cout << "  compliant: " << (res.compliant ? "true" : "false");
  std::cout << '\n';
  for (const auto& fit : res.fits)
    std::cout << "fit " << fit.metric << " delta=" << fmt_g(fit.delta)
              << ": slope=" << fmt_g(fit.slope) << " r2=" << fmt_g(fit.r2) << '\n';
  for (const auto& w : res.warnings) std::cout << "warning: " << w << '\n';
  std::cout << "wrote " << out_dir << "/{summaries,quantiles,ratefit}.csv, run_meta.json\n";
  return 0;
}

int cmd_verify(const std::string& config, const std::string& out_dir, bool seed_set,
               std::uint64_t seed, int workers) {
  ExperimentSpec spec = parse_config_file(config);
  if (seed_set) spec.run.seed = seed;
  VerifyResult res = run_verify(spec, workers);
  write_verify_csv(res, out_dir);
  std::size_t fails = 0;
  std::map<std::string, std::pair<int, int>> tally;
  for (const auto& r : res.rows) {
    auto& t = tally[r.check];
    ++t.second;
    if (r.pass) ++t.first;
    else ++fails;
  }
  for (const auto& [check, t] : tally)
    std::cout << check << ": " << t.first << "/" << t.second << " pass\n";
  for (const auto& n : res.notes) std::cout << "note: " << n << '\n';
  std::cout << "wrote " << out_dir << "/verify.csv\n";
  std::cout << (fails == 0 ? "VERIFY PASS" : "VERIFY FAIL") << '\n';
  return fails == 0 ? 0 : 2;
}

int cmd_constants(double alpha, int d) {
  TheoryConstants e1 = constants_example1(alpha, d);
  TheoryConstants e2 = constants_example2(alpha, d);
  char buf[256];
  std::printf("constants for alpha=%g, d=%d\n", alpha, d);
  std::snprintf(buf, sizeof buf,
                "sign + poly_tail:          gamma1=%.6g gamma2=%.6g phi_prime0=%.6g xi=%.6g",
                e1.gamma1, e1.gamma2, e1.phi_prime0, e1.xi);
  std::printf("%s\n", buf);
  std::snprintf(buf, sizeof buf,
                "smooth_sign(1) + poly_tail: beta1=%.6g beta2=%.6g J_alpha=%.6g phi_prime0=%.6g",
                e2.beta1, e2.beta2, e2.j_alpha, e2.phi_prime0);
  std::printf("%s\n", buf);
  return 0;
}

int cmd_ratefit(const std::string& results, std::uint64_t t_min, double delta,
                const std::string& metric) {
  std::string path = results;
  if (path.size() < 4 || path.substr(path.size() - 4) != ".csv")
    path += "/quantiles.csv";
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(f, line) || line != "t,delta,metric,quantile")
    throw ConfigError("'" + path + "' is not a quantiles.csv file");
  std::vector<double> ts, qs;
  int lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream in(line);
    std::string t_s, delta_s, metric_s, q_s;
    if (!std::getline(in, t_s, ',') || !std::getline(in, delta_s, ',') ||
        !std::getline(in, metric_s, ',') || !std::getline(in, q_s))
      throw ConfigError(path + ":" + std::to_string(lineno) + ": malformed row");
    if (metric_s != metric || std::fabs(std::stod(delta_s) - delta) > 1e-12) continue;
    ts.push_back(std::stod(t_s));
    qs.push_back(std::stod(q_s));
  }
  FitResult fit = rate_fit(ts, qs, static_cast<double>(t_min));
  std::cout << "metric=" << metric << " delta=" << fmt_g(delta) << " t_min=" << t_min
            << " slope=" << fmt_g(fit.slope) << " intercept=" << fmt_g(fit.intercept)
            << " r2=" << fmt_g(fit.r2) << '\n';
  return 0;
}

int cmd_report(const std::string& out_dir) {
  std::ifstream mf(out_dir + "/run_meta.json");
  if (!mf) throw ConfigError("cannot open '" + out_dir + "/run_meta.json'");
  nlohmann::json meta = nlohmann::json::parse(mf);
  std::cout << "run report (library " << meta.value("version", "?") << ")\n";
  std::cout << "  problem:      " << meta.value("problem", "?") << " (d="
            << meta.value("d", 0) << ")\n";
  std::cout << "  noise:        " << meta.value("noise", "?") << '\n';
  std::cout << "  nonlinearity: " << meta.value("nonlinearity", "?") << '\n';
  std::cout << "  estimator:    " << meta.value("estimator", "?") << '\n';
  std::cout << "  trials:       " << meta.value("trials", 0) << "  T: " << meta.value("T", 0)
            << "  eta: " << meta.value("eta", 0.0) << '\n';
  std::cout << "  a_used:       " << meta.value("a_used", 0.0);
  if (meta.contains("step_cap") && !meta["step_cap"].is_null())
    std::cout << "  step_cap: " << meta["step_cap"].get<double>();
  if (meta.contains("compliant") && !meta["compliant"].is_null())
    std::cout << "  compliant: " << (meta["compliant"].get<bool>() ? "true" : "false");
  std::cout << '\n';
  for (const auto& w : meta.value("warnings", std::vector<std::string>{}))
    std::cout << "  warning: " << w << '\n';

  std::ifstream rf(out_dir + "/ratefit.csv");
  if (rf) {
    std::string line;
    std::getline(rf, line);
    std::cout << "rate fits (metric delta t_min slope intercept r2):\n";
    while (std::getline(rf, line)) {
      if (line.empty()) continue;
      std::replace(line.begin(), line.end(), ',', ' ');
      std::cout << "  " << line << '\n';
    }
  }
  std::ifstream vf(out_dir + "/verify.csv");
  if (vf) {
    std::string line;
    std::getline(vf, line);
    int pass = 0, total = 0;
    while (std::getline(vf, line)) {
      if (line.empty()) continue;
      ++total;
      if (line.size() >= 4 && line.substr(line.size() - 4) == "true") ++pass;
    }
    std::cout << "verification: " << pass << "/" << total << " checks pass\n";
  }
  return 0;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"nonlinear SGD under heavy-tailed gradient noise: experiment harness"};
  app.require_subcommand(1);

  std::string config, out_dir = "out";
  std::uint64_t seed = 0;
  int workers = 1;
  double alpha = 3.0, delta = 0.1;
  int d = 1;
  std::uint64_t t_min = 64;
  std::string metric = "avg_min_metric";

  auto* c_run = app.add_subcommand("run", "run a trial ensemble and write CSV outputs");
  c_run->add_option("--config", config, "experiment config file")->required();
  c_run->add_option("--out", out_dir, "output directory");
  auto* run_seed = c_run->add_option("--seed", seed, "override run.seed");
  c_run->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);

  auto* c_verify = app.add_subcommand("verify", "run statistical checks for the configured "
                                                "map/noise/estimator");
  c_verify->add_option("--config", config, "experiment config file")->required();
  c_verify->add_option("--out", out_dir, "output directory");
  auto* verify_seed = c_verify->add_option("--seed", seed, "override run.seed");
  c_verify->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);

  auto* c_consts = app.add_subcommand("constants", "print closed-form lower-bound constants");
  c_consts->add_option("--alpha", alpha, "polynomial tail exponent")->required();
  c_consts->add_option("--d", d, "dimension")->required();

  auto* c_ratefit =
      app.add_subcommand("ratefit", "fit a log-log rate to a quantiles.csv file");
  c_ratefit->add_option("--out", out_dir, "results directory (or quantiles.csv path)")
      ->required();
  c_ratefit->add_option("--t-min", t_min, "smallest checkpoint used in the fit");
  c_ratefit->add_option("--delta", delta, "quantile level to fit");
  c_ratefit->add_option("--metric", metric, "avg_min_metric or min_grad_sq")
      ->check(CLI::IsMember({"avg_min_metric", "min_grad_sq"}));

  auto* c_report = app.add_subcommand("report", "summarize an output directory");
  c_report->add_option("--out", out_dir, "results directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (c_run->parsed())
      return cmd_run(config, out_dir, run_seed->count() > 0, seed, workers);
    if (c_verify->parsed())
      return cmd_verify(config, out_dir, verify_seed->count() > 0, seed, workers);
    if (c_consts->parsed()) return cmd_constants(alpha, d);
    if (c_ratefit->parsed()) return cmd_ratefit(out_dir, t_min, delta, metric);
    if (c_report->parsed()) return cmd_report(out_dir);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace nlsgd
