#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "curselab/factors.hpp"
#include "curselab/random.hpp"
#include "curselab/tensor.hpp"

namespace curselab {

/// n points, coordinate i uniform on domains[i]. Draws are point-major from
/// the given stream. Throws UnboundedDomain for real-line factors.
PointSet sample_uniform_points(int n, std::span<const Domain> domains, CounterStream& stream);
PointSet sample_uniform_points(int d, int n, std::uint64_t seed, std::span<const Domain> domains);

std::vector<Domain> problem_domains(const TensorProblem& problem);

struct ExperimentConfig {
  TensorProblem problem;
  int n = 1;
  int trials = 1;
  std::uint64_t seed = 0;
  int parallel_degree = 1;
  double threshold = 0.5;                     // report fraction of trials with e^2 >= threshold
  std::optional<double> dominance_threshold;  // run the diagonal-dominance probe per trial
};

struct ExperimentResult {
  std::vector<double> error_sq;  // per trial, in trial order
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double threshold = 0.5;
  double fraction_above = 0.0;
  std::vector<char> dominant;            // per trial, when probed
  std::optional<double> dominance_rate;  // fraction of dominant trials
};

/// Random-information Monte Carlo: trial t samples its points from the
/// stream (seed, t) and records e(X_n, S_d)^2. Results are bit-identical for
/// any parallel_degree.
ExperimentResult random_info_experiment(const ExperimentConfig& config);

struct DominanceReport {
  bool dominant = false;
  double min_margin = 0.0;  // min_i a_ii - sum_{j != i} |a_ij| for a = K - threshold
};

DominanceReport diagonal_dominance_probe(const TensorProblem& problem, const PointSet& points,
                                         double threshold);
DominanceReport diagonal_dominance_probe(const SymMatrix& gram, double threshold);

/// Lebesgue fraction of the factor's domain where K(x,x) >= level, on a
/// uniform grid.
double diagonal_level_fraction(const UnivariateFactor& factor, double level, int grid = kKappaGridPoints);

struct OptimizeOptions {
  int restarts = 32;
  int evaluations = 2000;  // per restart
  std::uint64_t seed = 0;
  int parallel_degree = 1;
};

struct NodeOptimizationResult {
  PointSet points;
  double error_sq = 0.0;
  bool budget_exhausted = false;
  int best_restart = -1;
  long evaluations = 0;
};

/// Multistart Nelder-Mead over the flattened n*d coordinates. Heuristic: the
/// result is an upper bound on e(n, S_d)^2, never a certificate of optimality.
NodeOptimizationResult optimize_nodes(const TensorProblem& problem, int n,
                                      const OptimizeOptions& options = {});

inline constexpr double kExactnessTolerance = 1e-8;

bool exactness_check(const TensorProblem& problem, const QuadratureRule& rule);

}  // namespace curselab
