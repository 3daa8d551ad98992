#include "curselab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include <omp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "curselab/bounds.hpp"
#include "curselab/config.hpp"
#include "curselab/errors.hpp"
#include "curselab/experiments.hpp"
#include "curselab/schur.hpp"

namespace curselab {

using json = nlohmann::json;

namespace {

enum class Format { kCsv, kJson };

struct Common {
  std::string config_path;
  std::string points_path;
  std::string out_path;
  std::string format = "csv";
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> trials;
  // schur-check
  std::optional<std::string> theorem;
  std::optional<std::string> constant;
  std::optional<int> n;
};

Format format_of(const Common& c) { return c.format == "json" ? Format::kJson : Format::kCsv; }

// FNV-1a over the 17-digit text of each weight, so equal digests mean
// bit-equal weights.
std::string weights_digest(const Eigen::VectorXd& w) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    for (const char ch : format_double(w(i)) + ";") {
      h ^= static_cast<unsigned char>(ch);
      h *= 0x100000001b3ULL;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ProblemConfig require_config(const Common& c) {
  if (c.config_path.empty()) throw ConfigError("--config is required for this command");
  return load_problem_config(c.config_path);
}

std::string join_params(const std::vector<double>& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ";" : "") + format_double(p[i]);
  return s;
}

int cmd_error(const Common& c, std::ostream& out) {
  const ProblemConfig cfg = require_config(c);
  const TensorProblem problem = cfg.problem();
  if (c.points_path.empty()) throw ConfigError("--points is required for error");
  const auto sets = load_point_sets(c.points_path, problem.dimension());

  json rows = json::array();
  if (format_of(c) == Format::kCsv) out << "n,e2,e2_raw,weights_sum,weights_digest\n";
  for (const auto& pts : sets) {
    const WorstCaseError e = worst_case_error_sq(problem, pts);
    const double wsum = e.weights.sum();
    if (format_of(c) == Format::kCsv) {
      out << pts.size() << ',' << format_double(e.error_sq) << ',' << format_double(e.raw_error_sq) << ','
          << format_double(wsum) << ',' << weights_digest(e.weights) << '\n';
    } else {
      rows.push_back({{"n", pts.size()},
                      {"e2", e.error_sq},
                      {"e2_raw", e.raw_error_sq},
                      {"weights", std::vector<double>(e.weights.begin(), e.weights.end())},
                      {"weights_digest", weights_digest(e.weights)}});
    }
  }
  if (format_of(c) == Format::kJson) out << rows.dump(2) << '\n';
  return kExitOk;
}

std::vector<double> factor_alphas(const TensorProblem& problem) {
  std::vector<double> a;
  for (const auto& f : problem.factors()) {
    if (!f.has_hfg()) throw NotApplicable("factor " + f.label() + " has no (h, f, g) structure");
    a.push_back(*f.alpha());
  }
  return a;
}

std::vector<int> korobov_r(const TensorProblem& problem) {
  std::vector<int> r;
  for (const auto& f : problem.factors()) {
    if (f.family() != Family::kKorobovSmooth) {
      throw UnsupportedFactor("KOROBOV_VARYING needs KOROBOV_SMOOTH factors, got " + f.label());
    }
    r.push_back(f.smoothness_r());
  }
  for (std::size_t i = 1; i < r.size(); ++i) {
    if (r[i] < r[i - 1]) {
      throw InvalidParameter("factors[" + std::to_string(i) + "].params.r: r must be nondecreasing");
    }
  }
  return r;
}

int cmd_bound(const Common& c, std::ostream& out) {
  const ProblemConfig cfg = require_config(c);
  const BoundBlock b = cfg.bound.value_or(BoundBlock{});
  const std::vector<std::int64_t> ns = b.n.empty() ? std::vector<std::int64_t>{1} : b.n;
  const std::string& f = b.formula;
  const Format fmt = format_of(c);

  std::vector<int> ds = b.d;
  if (ds.empty()) {
    if (!cfg.has_problem()) throw ConfigError("bound.d: required when no factors are given");
    ds.push_back(static_cast<int>(cfg.factors.size()));
  }

  if (!b.epsilon.empty()) {
    // Tractability rows: minimal n for each (d, epsilon).
    json rows = json::array();
    if (fmt == Format::kCsv) out << "formula,d,epsilon,n_lower\n";
    std::vector<double> all_alphas;
    if (f == "WEIGHTED" || f == "APPLICABLE") all_alphas = factor_alphas(cfg.problem());
    if (f == "KOROBOV_VARYING") {
      for (const int r : korobov_r(cfg.problem())) all_alphas.push_back(std::sqrt(2.0) * std::pow(2.0 * std::numbers::pi, -r));
    }
    if (f != "HOMOGENEOUS" && all_alphas.empty()) throw InvalidParameter("bound.formula: " + f + " has no epsilon form");
    for (const int d : ds) {
      std::vector<double> alphas;
      if (f == "HOMOGENEOUS") {
        alphas.assign(static_cast<std::size_t>(d), 1.0);
      } else {
        if (d > static_cast<int>(all_alphas.size())) throw InvalidParameter("bound.d: " + std::to_string(d) + " exceeds the number of factors");
        alphas.assign(all_alphas.begin(), all_alphas.begin() + d);
      }
      for (const double eps : b.epsilon) {
        const double nl = min_nodes_for_eps(alphas, eps);
        if (fmt == Format::kCsv) {
          out << f << ',' << d << ',' << format_double(eps) << ',' << format_double(nl) << '\n';
        } else {
          rows.push_back({{"formula", f}, {"d", d}, {"epsilon", eps}, {"n_lower", nl}});
        }
      }
    }
    if (fmt == Format::kJson) out << rows.dump(2) << '\n';
    return kExitOk;
  }

  std::vector<LowerBoundReport> reports;
  for (const auto n : ns) {
    if (f == "HOMOGENEOUS") {
      for (const int d : ds) reports.push_back(curse_bound_homogeneous(d, n));
    } else if (f == "WEIGHTED") {
      reports.push_back(curse_bound_weighted(factor_alphas(cfg.problem()), n));
    } else if (f == "UNIFIED") {
      if (!b.g_norm_sq) throw ConfigError("bound.g_norm_sq: required for UNIFIED");
      reports.push_back(unified_bound(*b.g_norm_sq, n));
    } else if (f == "ROTATED") {
      reports.push_back(rotated_problem_bound(cfg.problem(), n));
    } else if (f == "RANDOM_INFO") {
      if (!b.c2) throw ConfigError("bound.c2: required for RANDOM_INFO");
      for (const int d : ds) reports.push_back(random_info_bound(*b.c2, d, n));
    } else if (f == "KOROBOV_VARYING") {
      const auto r = korobov_r(cfg.problem());
      for (const int d : ds) reports.push_back(korobov_varying_bound(r, d, n));
    } else if (f == "APPLICABLE") {
      for (auto& rep : applicable_bounds(cfg.problem(), n)) reports.push_back(std::move(rep));
    } else {
      throw ConfigError("bound.formula: unknown formula \"" + f + "\"");
    }
  }

  if (fmt == Format::kCsv) {
    out << "formula,d,n,bound_value,parameters\n";
    for (const auto& r : reports) {
      out << to_string(r.formula) << ',' << r.d << ',' << r.n << ',' << format_double(r.bound_value) << ','
          << join_params(r.parameters) << '\n';
    }
  } else {
    json rows = json::array();
    for (const auto& r : reports) {
      rows.push_back({{"formula", std::string(to_string(r.formula))},
                      {"d", r.d},
                      {"n", r.n},
                      {"bound_value", r.bound_value},
                      {"parameters", r.parameters}});
    }
    out << rows.dump(2) << '\n';
  }
  return kExitOk;
}

int cmd_korobov_table(const Common& c, std::ostream& out) {
  const ProblemConfig cfg = require_config(c);
  if (!cfg.korobov) throw ConfigError("korobov: block required for korobov-table");
  const KorobovBlock& k = *cfg.korobov;
  const auto rows = k.r.empty() ? korobov_weighted_diagnostics(*k.s, k.gamma, k.epsilon)
                                : korobov_varying_table(k.r, k.epsilon);
  if (format_of(c) == Format::kCsv) {
    out << "d,epsilon,n_lower,regime,prefix_length,sum_gamma,sum_gamma_over_log,mean_gamma\n";
    for (const auto& r : rows) {
      out << r.d << ',' << format_double(r.epsilon) << ',' << format_double(r.n_lower) << ',' << r.regime << ','
          << r.prefix_length << ',' << format_double(r.sum_gamma) << ',' << format_double(r.sum_gamma_over_log)
          << ',' << format_double(r.mean_gamma) << '\n';
    }
  } else {
    json arr = json::array();
    for (const auto& r : rows) {
      arr.push_back({{"d", r.d},
                     {"epsilon", r.epsilon},
                     {"n_lower", r.n_lower},
                     {"regime", r.regime},
                     {"prefix_length", r.prefix_length},
                     {"sum_gamma", r.sum_gamma},
                     {"sum_gamma_over_log", r.sum_gamma_over_log},
                     {"mean_gamma", r.mean_gamma}});
    }
    out << arr.dump(2) << '\n';
  }
  return kExitOk;
}

int cmd_schur_check(const Common& c, std::ostream& out) {
  SchurBlock b;
  if (!c.config_path.empty()) {
    const ProblemConfig cfg = load_problem_config(c.config_path);
    if (cfg.schur) b = *cfg.schur;
  }
  if (c.theorem) {
    const auto t = parse_schur_theorem(*c.theorem);
    if (!t) throw ConfigError("--theorem: unknown theorem \"" + *c.theorem + "\"");
    b.theorem = *t;
  }
  if (c.constant) {
    if (*c.constant == "PROVEN") b.constant = CombinedConstant::kProven;
    else if (*c.constant == "CONJECTURED") b.constant = CombinedConstant::kConjectured;
    else throw ConfigError("--constant: expected PROVEN or CONJECTURED");
  }
  if (c.n) b.n = *c.n;
  if (c.trials) b.trials = static_cast<int>(*c.trials);
  if (c.seed) b.seed = *c.seed;
  if (b.n < 1 || b.n > 64) throw InvalidParameter("n: must lie in [1, 64], got " + std::to_string(b.n));
  if (b.trials < 1) throw InvalidParameter("trials: must be >= 1");

  SchurSuiteOptions opt;
  opt.theorem = b.theorem;
  opt.constant = b.constant;
  opt.n = b.n;
  opt.trials = b.trials;
  opt.seed = b.seed;
  opt.parallel_degree = parallel_degree_from_env();
  const SchurSuiteSummary s = run_schur_suite(opt);

  const bool exploratory = b.constant == CombinedConstant::kConjectured;
  if (format_of(c) == Format::kCsv) {
    out << "theorem,constant,n,trials,seed,worst_normalized_margin,worst_trial,violations\n"
        << to_string(s.theorem) << ',' << (exploratory ? "CONJECTURED" : "PROVEN") << ',' << s.n << ','
        << s.trials << ',' << b.seed << ',' << format_double(s.worst_normalized_margin) << ',' << s.worst_trial
        << ',' << s.violations << '\n';
  } else {
    const json j = {{"theorem", std::string(to_string(s.theorem))},
                    {"constant", exploratory ? "CONJECTURED" : "PROVEN"},
                    {"n", s.n},
                    {"trials", s.trials},
                    {"seed", b.seed},
                    {"worst_normalized_margin", s.worst_normalized_margin},
                    {"worst_trial", s.worst_trial},
                    {"violations", s.violations}};
    out << j.dump(2) << '\n';
  }
  if (exploratory) return kExitOk;
  return s.violations == 0 ? kExitOk : kExitInvalid;
}

int cmd_random_exp(const Common& c, std::ostream& out, std::ostream& err) {
  const ProblemConfig cfg = require_config(c);
  const ExperimentBlock b = cfg.experiment.value_or(ExperimentBlock{});
  ExperimentConfig ec{.problem = cfg.problem(), .dominance_threshold = std::nullopt};
  ec.n = b.n;
  ec.trials = b.trials;
  ec.seed = c.seed.value_or(b.seed);
  if (c.trials) {
    if (*c.trials < 1 || *c.trials > std::numeric_limits<int>::max()) {
      throw InvalidParameter("--trials: must be >= 1, got " + std::to_string(*c.trials));
    }
    ec.trials = static_cast<int>(*c.trials);
  }
  ec.threshold = b.threshold;
  ec.dominance_threshold = b.dominance_threshold;
  ec.parallel_degree = parallel_degree_from_env();
  const ExperimentResult r = random_info_experiment(ec);

  if (format_of(c) == Format::kCsv) {
    out << "trial,n,e2" << (r.dominance_rate ? ",dominant" : "") << '\n';
    for (std::size_t t = 0; t < r.error_sq.size(); ++t) {
      out << t << ',' << ec.n << ',' << format_double(r.error_sq[t]);
      if (r.dominance_rate) out << ',' << static_cast<int>(r.dominant[t]);
      out << '\n';
    }
    err << "mean=" << format_double(r.mean) << " min=" << format_double(r.min) << " max=" << format_double(r.max)
        << " fraction_above_" << format_double(r.threshold) << '=' << format_double(r.fraction_above);
    if (r.dominance_rate) err << " dominance_rate=" << format_double(*r.dominance_rate);
    err << '\n';
  } else {
    json j = {{"n", ec.n},
              {"trials", ec.trials},
              {"seed", ec.seed},
              {"error_sq", r.error_sq},
              {"mean", r.mean},
              {"min", r.min},
              {"max", r.max},
              {"threshold", r.threshold},
              {"fraction_above", r.fraction_above}};
    if (r.dominance_rate) j["dominance_rate"] = *r.dominance_rate;
    out << j.dump(2) << '\n';
  }
  return kExitOk;
}

int cmd_optimize(const Common& c, std::ostream& out) {
  const ProblemConfig cfg = require_config(c);
  const TensorProblem problem = cfg.problem();
  OptimizeBlock b = cfg.optimize.value_or(OptimizeBlock{});
  if (b.n.empty()) b.n = {1};
  if (c.seed) b.options.seed = *c.seed;
  b.options.parallel_degree = parallel_degree_from_env();

  json rows = json::array();
  if (format_of(c) == Format::kCsv) out << "n,e2,lower_bound,budget_exhausted,best_restart,evaluations\n";
  for (const int n : b.n) {
    const NodeOptimizationResult r = optimize_nodes(problem, n, b.options);
    std::optional<double> lb;
    for (const auto& rep : applicable_bounds(problem, n)) lb = std::max(lb.value_or(rep.bound_value), rep.bound_value);
    if (format_of(c) == Format::kCsv) {
      out << n << ',' << format_double(r.error_sq) << ',' << (lb ? format_double(*lb) : "") << ','
          << (r.budget_exhausted ? 1 : 0) << ',' << r.best_restart << ',' << r.evaluations << '\n';
    } else {
      json pts = json::array();
      for (int j = 0; j < r.points.size(); ++j) {
        const auto p = r.points.point(j);
        pts.push_back(std::vector<double>(p.begin(), p.end()));
      }
      json row = {{"n", n},
                  {"e2", r.error_sq},
                  {"budget_exhausted", r.budget_exhausted},
                  {"best_restart", r.best_restart},
                  {"evaluations", r.evaluations},
                  {"points", pts}};
      if (lb) row["lower_bound"] = *lb;
      rows.push_back(row);
    }
  }
  if (format_of(c) == Format::kJson) out << rows.dump(2) << '\n';
  return kExitOk;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config_path, "Problem configuration (JSON)");
  sub->add_option("--out", c.out_path, "Write results here instead of stdout");
  sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--seed", c.seed, "Master seed");
}

}  // namespace

int parallel_degree_from_env() {
  int degree = std::max(1, omp_get_max_threads());
  if (const char* env = std::getenv("CURSE_LAB_THREADS"); env && *env) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (*end != '\0' || cap < 1) throw InvalidParameter("CURSE_LAB_THREADS must be a positive integer");
    degree = static_cast<int>(std::min<long>(degree, cap));
  }
  return degree;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Worst-case quadrature errors and lower bounds in tensor-product RKHS"};
  app.require_subcommand(1);
  Common c;

  auto* error = app.add_subcommand("error", "Radius of information for point sets");
  add_common(error, c);
  error->add_option("--points", c.points_path, "Point sets (JSON)");

  auto* bound = app.add_subcommand("bound", "Closed-form lower bounds");
  add_common(bound, c);

  auto* schur = app.add_subcommand("schur-check", "Randomized Schur-product inequality suite");
  add_common(schur, c);
  schur->add_option("--trials", c.trials, "Number of random instances");
  schur->add_option("--theorem", c.theorem, "SELF_N | RANK_R | TWO_MATRIX | COMBINED_2R");
  schur->add_option("--constant", c.constant, "PROVEN | CONJECTURED");
  schur->add_option("--n", c.n, "Matrix order");

  auto* rexp = app.add_subcommand("random-exp", "Monte Carlo over uniform random points");
  add_common(rexp, c);
  rexp->add_option("--trials", c.trials, "Number of trials");

  auto* opt = app.add_subcommand("optimize", "Multistart node optimization");
  add_common(opt, c);

  auto* kor = app.add_subcommand("korobov-table", "Tractability table for Korobov spaces");
  add_common(kor, c);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  }

  try {
    std::ofstream file;
    std::ostringstream buffer;
    int code = kExitOk;
    if (error->parsed()) code = cmd_error(c, buffer);
    else if (bound->parsed()) code = cmd_bound(c, buffer);
    else if (schur->parsed()) code = cmd_schur_check(c, buffer);
    else if (rexp->parsed()) code = cmd_random_exp(c, buffer, err);
    else if (opt->parsed()) code = cmd_optimize(c, buffer);
    else if (kor->parsed()) code = cmd_korobov_table(c, buffer);

    if (c.out_path.empty()) {
      out << buffer.str();
    } else {
      file.open(c.out_path, std::ios::binary);
      if (!file) throw Error("cannot write " + c.out_path);
      file << buffer.str();
    }
    return code;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const InvalidParameter& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const NotApplicable& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const UnsupportedFactor& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const SingularMomentMatrix& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace curselab
