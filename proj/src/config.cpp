#include "nlsgd/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "nlsgd/rng.hpp"

namespace nlsgd {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string strip_quotes(const std::string& s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                        (s.front() == '\'' && s.back() == '\'')))
    return s.substr(1, s.size() - 2);
  return s;
}

[[noreturn]] void fail(const std::string& file, int line, const std::string& msg) {
  throw ConfigError(file + ":" + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& file, int line, const std::string& key,
                 const std::string& v) {
  try {
    std::size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    fail(file, line, "key '" + key + "': expected a number, got '" + v + "'");
  }
}

long long to_ll(const std::string& file, int line, const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    fail(file, line, "key '" + key + "': expected an integer, got '" + v + "'");
  }
}

std::uint64_t to_u64(const std::string& file, int line, const std::string& key,
                     const std::string& v) {
  try {
    std::size_t pos = 0;
    unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    fail(file, line, "key '" + key + "': expected a non-negative integer, got '" + v + "'");
  }
}

bool to_bool(const std::string& file, int line, const std::string& key, const std::string& v) {
  std::string s;
  for (char c : v) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  fail(file, line, "key '" + key + "': expected a boolean, got '" + v + "'");
}

std::vector<std::string> split_csv(const std::string& v) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(v);
  while (std::getline(in, item, ',')) out.push_back(trim(item));
  if (!v.empty() && v.back() == ',') out.push_back("");
  return out;
}

std::vector<double> to_double_list(const std::string& file, int line, const std::string& key,
                                   const std::string& v) {
  std::vector<double> out;
  for (const auto& item : split_csv(v)) out.push_back(to_double(file, line, key, item));
  if (out.empty()) fail(file, line, "key '" + key + "': expected a comma-separated list");
  return out;
}

std::vector<std::uint64_t> to_u64_list(const std::string& file, int line, const std::string& key,
                                       const std::string& v) {
  std::vector<std::uint64_t> out;
  for (const auto& item : split_csv(v)) out.push_back(to_u64(file, line, key, item));
  if (out.empty()) fail(file, line, "key '" + key + "': expected a comma-separated list");
  return out;
}

void validate(ExperimentSpec& spec) {
  const std::set<std::string> problems{"quadratic", "sine_quadratic", "logistic_synthetic"};
  if (!problems.count(spec.problem.name))
    throw ConfigError("problem.name '" + spec.problem.name + "' is not a known problem");
  if (spec.problem.d < 1) throw ConfigError("problem.d must be >= 1");
  if (spec.problem.n < 1) throw ConfigError("problem.n must be >= 1");
  if (spec.problem.ridge < 0.0) throw ConfigError("problem.ridge must be >= 0");
  parse_x_init(spec.problem.x_init, spec.problem.d);

  const std::set<std::string> noises{"poly_tail",            "cauchy", "student_t",
                                     "centered_exponential", "centered_pareto", "gaussian"};
  if (!noises.count(spec.noise.family))
    throw ConfigError("noise.family '" + spec.noise.family + "' is not a known family");
  if (spec.noise.state_dependence != "none" && spec.noise.state_dependence != "radial_scale")
    throw ConfigError("noise.state_dependence must be 'none' or 'radial_scale'");

  const std::set<std::string> kinds{"sgd", "sge", "msge"};
  if (!kinds.count(spec.estimator.kind))
    throw ConfigError("estimator.kind '" + spec.estimator.kind + "' is not a known estimator");
  if (!(spec.estimator.p > 1.0 && spec.estimator.p <= 2.0))
    throw ConfigError("estimator.p must lie in (1, 2]");
  if (spec.estimator.reference != "x_init")
    throw ConfigError("estimator.reference supports only 'x_init'");

  if (spec.run.a != "auto") {
    double a = 0.0;
    try {
      std::size_t pos = 0;
      a = std::stod(spec.run.a, &pos);
      if (pos != spec.run.a.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw ConfigError("run.a must be 'auto' or a positive number, got '" + spec.run.a + "'");
    }
    if (!(a > 0.0)) throw ConfigError("run.a must be positive");
  }
  if (!(spec.run.eta >= 0.0 && spec.run.eta < 1.0)) throw ConfigError("run.eta must lie in [0, 1)");
  if (spec.run.T < 1) throw ConfigError("run.T must be >= 1");
  if (spec.run.trials < 1) throw ConfigError("run.trials must be >= 1");
  for (std::size_t i = 0; i < spec.run.checkpoints.size(); ++i) {
    std::uint64_t c = spec.run.checkpoints[i];
    if (c < 1 || c > spec.run.T) throw ConfigError("run.checkpoints must lie in [1, T]");
    if (i > 0 && spec.run.checkpoints[i - 1] >= c)
      throw ConfigError("run.checkpoints must be strictly increasing");
  }

  if (spec.analysis.deltas.empty()) throw ConfigError("analysis.deltas must be non-empty");
  double min_delta = 1.0;
  for (double dl : spec.analysis.deltas) {
    if (!(dl > 0.0 && dl < 1.0)) throw ConfigError("analysis.deltas entries must lie in (0, 1)");
    min_delta = std::min(min_delta, dl);
  }
  if (spec.analysis.t_min < 1) throw ConfigError("analysis.t_min must be >= 1");
  if (spec.analysis.probes < 1) throw ConfigError("analysis.probes must be >= 1");
  if (spec.analysis.batches.empty()) throw ConfigError("analysis.batches must be non-empty");
  for (std::uint64_t b : spec.analysis.batches)
    if (b < 1) throw ConfigError("analysis.batches entries must be >= 1");

  double needed = 10.0 / min_delta;
  if (static_cast<double>(spec.run.trials) < needed) {
    std::ostringstream w;
    w << "run.trials = " << spec.run.trials << " is below 10/min(deltas) = " << needed
      << "; the delta = " << min_delta << " quantile will be coarse";
    spec.warnings.push_back(w.str());
  }

  build_map(spec.nonlinearity);  // surfaces family/parameter mismatches early
  build_noise(spec.noise, spec.problem.d);
}

}  // namespace

ExperimentSpec parse_config_text(const std::string& text, const std::string& filename) {
  ExperimentSpec spec;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int lineno = 0;
  const std::set<std::string> sections{"problem", "noise", "nonlinearity", "estimator", "run",
                                       "analysis"};
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    std::size_t hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(filename, lineno, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!sections.count(section)) fail(filename, lineno, "unknown section [" + section + "]");
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail(filename, lineno, "expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = strip_quotes(trim(line.substr(eq + 1)));
    if (key.empty()) fail(filename, lineno, "empty key");
    if (section.empty()) fail(filename, lineno, "key '" + key + "' appears before any section");

    if (section == "problem") {
      if (key == "name") spec.problem.name = value;
      else if (key == "d") spec.problem.d = static_cast<int>(to_ll(filename, lineno, key, value));
      else if (key == "x_init") spec.problem.x_init = value;
      else if (key == "n") spec.problem.n = static_cast<int>(to_ll(filename, lineno, key, value));
      else if (key == "ridge") spec.problem.ridge = to_double(filename, lineno, key, value);
      else fail(filename, lineno, "unknown key '" + key + "' in section [problem]");
    } else if (section == "noise") {
      if (key == "family") spec.noise.family = value;
      else if (key == "alpha") spec.noise.alpha = to_double(filename, lineno, key, value);
      else if (key == "scale") spec.noise.scale = to_double(filename, lineno, key, value);
      else if (key == "nu") spec.noise.nu = to_double(filename, lineno, key, value);
      else if (key == "lambda") spec.noise.lambda = to_double(filename, lineno, key, value);
      else if (key == "shape") spec.noise.shape = to_double(filename, lineno, key, value);
      else if (key == "sigma") spec.noise.sigma = to_double(filename, lineno, key, value);
      else if (key == "state_dependence") spec.noise.state_dependence = value;
      else fail(filename, lineno, "unknown key '" + key + "' in section [noise]");
    } else if (section == "nonlinearity") {
      if (key == "family" || key == "nonlinearity") spec.nonlinearity.family = value;
      else if (key == "M") spec.nonlinearity.M = to_double(filename, lineno, key, value);
      else if (key == "k") spec.nonlinearity.k = to_double(filename, lineno, key, value);
      else if (key == "eps") spec.nonlinearity.eps = to_double(filename, lineno, key, value);
      else if (key == "R") spec.nonlinearity.R = to_double(filename, lineno, key, value);
      else fail(filename, lineno, "unknown key '" + key + "' in section [nonlinearity]");
    } else if (section == "estimator") {
      if (key == "kind") spec.estimator.kind = value;
      else if (key == "p") spec.estimator.p = to_double(filename, lineno, key, value);
      else if (key == "reference") spec.estimator.reference = value;
      else fail(filename, lineno, "unknown key '" + key + "' in section [estimator]");
    } else if (section == "run") {
      if (key == "a") spec.run.a = value;
      else if (key == "eta") spec.run.eta = to_double(filename, lineno, key, value);
      else if (key == "T") spec.run.T = to_u64(filename, lineno, key, value);
      else if (key == "trials")
        spec.run.trials = static_cast<int>(to_ll(filename, lineno, key, value));
      else if (key == "seed") spec.run.seed = to_u64(filename, lineno, key, value);
      else if (key == "record_trajectory")
        spec.run.record_trajectory = to_bool(filename, lineno, key, value);
      else if (key == "checkpoints") spec.run.checkpoints = to_u64_list(filename, lineno, key, value);
      else fail(filename, lineno, "unknown key '" + key + "' in section [run]");
    } else if (section == "analysis") {
      if (key == "deltas") spec.analysis.deltas = to_double_list(filename, lineno, key, value);
      else if (key == "t_min") spec.analysis.t_min = to_u64(filename, lineno, key, value);
      else if (key == "n_samples") spec.analysis.n_samples = to_u64(filename, lineno, key, value);
      else if (key == "probes")
        spec.analysis.probes = static_cast<int>(to_ll(filename, lineno, key, value));
      else if (key == "batches") spec.analysis.batches = to_u64_list(filename, lineno, key, value);
      else fail(filename, lineno, "unknown key '" + key + "' in section [analysis]");
    }
  }
  try {
    validate(spec);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(filename + ": " + e.what());
  }
  return spec;
}

ExperimentSpec parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

Vec parse_x_init(const std::string& text, int d) {
  if (d < 1) throw ConfigError("problem.d must be >= 1");
  std::vector<std::string> items = split_csv(trim(text));
  std::vector<double> vals;
  for (const auto& item : items) {
    try {
      std::size_t pos = 0;
      double x = std::stod(item, &pos);
      if (pos != item.size()) throw std::invalid_argument("trailing characters");
      vals.push_back(x);
    } catch (const std::exception&) {
      throw ConfigError("problem.x_init: expected a number, got '" + item + "'");
    }
  }
  if (vals.size() == 1) return Vec(static_cast<std::size_t>(d), vals[0]);
  if (vals.size() != static_cast<std::size_t>(d))
    throw ConfigError("problem.x_init has " + std::to_string(vals.size()) +
                      " components but problem.d = " + std::to_string(d));
  return vals;
}

std::unique_ptr<Problem> build_problem(const ProblemSpec& spec, std::uint64_t seed) {
  Vec x0 = parse_x_init(spec.x_init, spec.d);
  if (spec.name == "quadratic") return make_quadratic(spec.d, std::move(x0));
  if (spec.name == "sine_quadratic") return make_sine_quadratic(spec.d, std::move(x0));
  if (spec.name == "logistic_synthetic")
    return make_logistic_synthetic(spec.d, spec.n, derive_seed(seed, 0xDA7Aull), std::move(x0),
                                   spec.ridge);
  throw ConfigError("problem.name '" + spec.name + "' is not a known problem");
}

NoiseModel build_noise(const NoiseSpec& spec, int d) {
  NoiseModel m = [&] {
    if (spec.family == "poly_tail") return make_poly_tail(spec.alpha, d);
    if (spec.family == "cauchy") return make_cauchy(spec.scale, d);
    if (spec.family == "student_t") return make_student_t(spec.nu, spec.scale, d);
    if (spec.family == "centered_exponential") return make_centered_exponential(spec.lambda, d);
    if (spec.family == "centered_pareto") return make_centered_pareto(spec.shape, spec.scale, d);
    if (spec.family == "gaussian") return make_gaussian(spec.sigma, d);
    throw ConfigError("noise.family '" + spec.family + "' is not a known family");
  }();
  if (spec.state_dependence == "radial_scale") m = with_radial_scale(std::move(m));
  return m;
}

NonlinearMap build_map(const NonlinSpec& spec) {
  struct Slot {
    const char* key;
    const std::optional<double>* val;
  };
  const Slot slots[] = {{"M", &spec.M}, {"k", &spec.k}, {"eps", &spec.eps}, {"R", &spec.R}};
  const char* wanted = nullptr;
  if (spec.family == "cw_clip" || spec.family == "smooth_cw_clip" || spec.family == "joint_clip" ||
      spec.family == "smooth_joint_clip")
    wanted = "M";
  else if (spec.family == "smooth_sign")
    wanted = "k";
  else if (spec.family == "smooth_normalize")
    wanted = "eps";
  else if (spec.family == "quantize")
    wanted = "R";

  std::optional<double> param;
  for (const Slot& s : slots) {
    if (!s.val->has_value()) continue;
    if (wanted == nullptr || std::string(s.key) != wanted)
      throw ConfigError("nonlinearity parameter '" + std::string(s.key) +
                        "' is not used by family '" + spec.family + "'");
    param = **s.val;
  }
  return make_map(spec.family, param);
}

EstimatorConfig build_estimator_config(const EstimatorSpec& spec) {
  EstimatorConfig cfg;
  if (spec.kind == "sgd") cfg.kind = EstimatorKind::SGD;
  else if (spec.kind == "sge") cfg.kind = EstimatorKind::SGE;
  else if (spec.kind == "msge") cfg.kind = EstimatorKind::MSGE;
  else throw ConfigError("estimator.kind '" + spec.kind + "' is not a known estimator");
  cfg.p = spec.p;
  return cfg;
}

}  // namespace nlsgd
