#include "curselab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "curselab/errors.hpp"
#include "curselab/nelder_mead.hpp"

namespace curselab {

PointSet sample_uniform_points(int n, std::span<const Domain> domains, CounterStream& stream) {
  if (n < 0) throw InvalidParameter("n must be nonnegative");
  for (const auto& dom : domains) {
    if (dom.unbounded) throw UnboundedDomain("uniform sampling needs bounded domains");
  }
  const int d = static_cast<int>(domains.size());
  PointSet points(n, d);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < d; ++i) {
      const Domain& dom = domains[static_cast<std::size_t>(i)];
      points(j, i) = std::min(dom.upper, stream.uniform(dom.lower, dom.upper));
    }
  return points;
}

PointSet sample_uniform_points(int d, int n, std::uint64_t seed, std::span<const Domain> domains) {
  if (static_cast<int>(domains.size()) != d) throw DimensionMismatch("need one domain per coordinate");
  CounterStream stream(seed, 0);
  return sample_uniform_points(n, domains, stream);
}

std::vector<Domain> problem_domains(const TensorProblem& problem) {
  std::vector<Domain> out;
  for (const auto& f : problem.factors()) out.push_back(f.domain());
  return out;
}

DominanceReport diagonal_dominance_probe(const SymMatrix& gram, double threshold) {
  const Eigen::Index n = gram.order();
  DominanceReport rep;
  rep.min_margin = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    double off = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) off += std::abs(gram(i, j) - threshold);
    }
    rep.min_margin = std::min(rep.min_margin, (gram(i, i) - threshold) - off);
  }
  rep.dominant = n > 0 && rep.min_margin > 0.0;
  if (n == 0) rep.min_margin = 0.0;
  return rep;
}

DominanceReport diagonal_dominance_probe(const TensorProblem& problem, const PointSet& points,
                                         double threshold) {
  return diagonal_dominance_probe(gram_assemble(problem, points).gram, threshold);
}

double diagonal_level_fraction(const UnivariateFactor& factor, double level, int grid) {
  const Domain& dom = factor.domain();
  if (dom.unbounded) throw UnboundedDomain("level-set fraction needs a bounded domain");
  if (grid < 1) throw InvalidParameter("grid must have at least one cell");
  int hits = 0;
  for (int k = 0; k < grid; ++k) {
    const double x = dom.lower + (dom.upper - dom.lower) * (k + 0.5) / grid;
    if (factor.kernel_unchecked(x, x) >= level) ++hits;
  }
  return static_cast<double>(hits) / grid;
}

ExperimentResult random_info_experiment(const ExperimentConfig& config) {
  if (config.trials < 1) throw InvalidParameter("trials must be >= 1");
  if (config.n < 0) throw InvalidParameter("n must be nonnegative");
  const std::vector<Domain> domains = problem_domains(config.problem);
  for (const auto& dom : domains) {
    if (dom.unbounded) throw UnboundedDomain("random-information experiments need bounded domains");
  }

  const auto trials = static_cast<std::size_t>(config.trials);
  ExperimentResult res;
  res.error_sq.resize(trials);
  if (config.dominance_threshold) res.dominant.resize(trials);
  const int threads = std::max(1, config.parallel_degree);

  // Trials run serially inside; the Gram kernel's own parallel region is
  // suppressed by the nested-parallel default.
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (int t = 0; t < config.trials; ++t) {
    CounterStream stream(config.seed, static_cast<std::uint64_t>(t));
    const PointSet pts = sample_uniform_points(config.n, domains, stream);
    const GramSystem sys = gram_assemble_serial(config.problem, pts);
    res.error_sq[static_cast<std::size_t>(t)] = worst_case_error_sq(sys).error_sq;
    if (config.dominance_threshold) {
      res.dominant[static_cast<std::size_t>(t)] =
          diagonal_dominance_probe(sys.gram, *config.dominance_threshold).dominant ? 1 : 0;
    }
  }

  std::vector<double> sorted = res.error_sq;
  std::sort(sorted.begin(), sorted.end());
  res.min = sorted.front();
  res.max = sorted.back();
  res.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(trials);
  res.mean = std::clamp(res.mean, res.min, res.max);
  res.threshold = config.threshold;
  res.fraction_above =
      static_cast<double>(std::count_if(sorted.begin(), sorted.end(),
                                        [&](double v) { return v >= config.threshold; })) /
      static_cast<double>(trials);
  if (config.dominance_threshold) {
    res.dominance_rate = static_cast<double>(std::count(res.dominant.begin(), res.dominant.end(), 1)) /
                         static_cast<double>(trials);
  }
  return res;
}

NodeOptimizationResult optimize_nodes(const TensorProblem& problem, int n,
                                      const OptimizeOptions& options) {
  if (n < 0) throw InvalidParameter("n must be nonnegative");
  if (options.restarts < 1) throw InvalidParameter("restarts must be >= 1");
  if (options.evaluations < 1) throw InvalidParameter("evaluations must be >= 1");

  const int d = problem.dimension();
  NodeOptimizationResult best;
  if (n == 0) {
    best.points = PointSet(0, d);
    best.error_sq = problem.initial_error_sq();
    best.best_restart = 0;
    return best;
  }

  std::vector<double> lower, upper;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < d; ++i) {
      lower.push_back(problem.factor(i).domain().search_lower());
      upper.push_back(problem.factor(i).domain().search_upper());
    }

  auto objective = [&](std::span<const double> x) {
    const PointSet pts(n, d, std::vector<double>(x.begin(), x.end()));
    return worst_case_error_sq(gram_assemble_serial(problem, pts)).error_sq;
  };

  NelderMeadOptions nm;
  nm.max_evaluations = options.evaluations;
  std::vector<NelderMeadResult> runs(static_cast<std::size_t>(options.restarts));
  const int threads = std::max(1, options.parallel_degree);

#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (int r = 0; r < options.restarts; ++r) {
    CounterStream stream(options.seed, static_cast<std::uint64_t>(r));
    std::vector<double> start(lower.size());
    for (std::size_t k = 0; k < start.size(); ++k) start[k] = stream.uniform(lower[k], upper[k]);
    runs[static_cast<std::size_t>(r)] = nelder_mead(objective, std::move(start), lower, upper, nm);
  }

  std::size_t arg = 0;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    best.evaluations += runs[r].evaluations;
    if (runs[r].value < runs[arg].value) arg = r;
  }
  best.best_restart = static_cast<int>(arg);
  best.error_sq = runs[arg].value;
  best.budget_exhausted = !runs[arg].converged;
  best.points = PointSet(n, d, runs[arg].x);
  return best;
}

bool exactness_check(const TensorProblem& problem, const QuadratureRule& rule) {
  return error_of_rule(problem, rule) <= kExactnessTolerance;
}

}  // namespace curselab
