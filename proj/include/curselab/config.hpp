#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "curselab/bounds.hpp"
#include "curselab/experiments.hpp"
#include "curselab/schur.hpp"
#include "curselab/tensor.hpp"

namespace curselab {

// Declarative problem description read by the CLI. Schema violations
// (malformed JSON, unknown keys, wrong types) raise ConfigError; values out
// of range raise InvalidParameter naming the offending field.

struct ExperimentBlock {
  int n = 1;
  int trials = 1;
  std::uint64_t seed = 0;
  double threshold = 0.5;
  std::optional<double> dominance_threshold;
};

struct BoundBlock {
  std::string formula = "APPLICABLE";
  std::vector<std::int64_t> n;
  std::vector<int> d;
  std::vector<double> epsilon;
  std::optional<double> g_norm_sq;
  std::optional<double> c2;
};

struct OptimizeBlock {
  std::vector<int> n;
  OptimizeOptions options;
};

struct KorobovBlock {
  std::vector<int> r;                     // KOROBOV_SMOOTH smoothness sequence
  std::optional<double> s;                // KOROBOV_WEIGHTED smoothness
  std::vector<std::vector<double>> gamma;  // row d holds gamma_{d,1..d}
  double epsilon = 0.5;
};

struct SchurBlock {
  SchurTheorem theorem = SchurTheorem::kSelfN;
  CombinedConstant constant = CombinedConstant::kProven;
  int n = 10;
  int trials = 1000;
  std::uint64_t seed = 0;
};

struct ProblemConfig {
  std::vector<UnivariateFactor> factors;
  std::optional<ExperimentBlock> experiment;
  std::optional<BoundBlock> bound;
  std::optional<OptimizeBlock> optimize;
  std::optional<KorobovBlock> korobov;
  std::optional<SchurBlock> schur;

  bool has_problem() const { return !factors.empty(); }
  TensorProblem problem() const;
};

ProblemConfig parse_problem_config(std::string_view text);
ProblemConfig load_problem_config(const std::string& path);

/// Point file: a JSON array of point sets, each an array of points, each an
/// array of d coordinates. An empty point set is written [].
std::vector<PointSet> parse_point_sets(std::string_view text, int d);
std::vector<PointSet> load_point_sets(const std::string& path, int d);

/// Shortest round-trip formatting (17 significant digits).
std::string format_double(double v);

}  // namespace curselab
