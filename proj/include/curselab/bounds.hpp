#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "curselab/linalg.hpp"
#include "curselab/tensor.hpp"

namespace curselab {

// Closed-form lower bounds on e(n, S_d)^2 for normalized tensor problems.
// Values are returned verbatim from the formulas; a negative bound carries
// no information but is not an error.

enum class BoundFormula { kHomogeneous, kWeighted, kUnified, kRotated, kRandomInfo };

std::string_view to_string(BoundFormula f);

struct LowerBoundReport {
  BoundFormula formula = BoundFormula::kHomogeneous;
  double bound_value = 1.0;
  int d = 0;
  std::int64_t n = 0;
  std::vector<double> parameters;  // alphas, ||g||^2, r_i, ... depending on formula
  bool certified = false;
};

/// 1 - n 2^{-d}
LowerBoundReport curse_bound_homogeneous(int d, std::int64_t n);
/// 1 - n prod (1 + alpha_i^2)^{-1}; alphas in (0, 1].
LowerBoundReport curse_bound_weighted(std::span<const double> alphas, std::int64_t n);
/// 1 - 2n / ||g||^2
LowerBoundReport unified_bound(double g_norm_sq, std::int64_t n);
/// 1 - n 2^{-d+1} for products of TRIG1 and PHASE_TRIG factors.
LowerBoundReport rotated_problem_bound(const TensorProblem& problem, std::int64_t n);
/// 1 - 2n / c2^d, the event bound behind random-point lower bounds.
LowerBoundReport random_info_bound(double c2, int d, std::int64_t n);

/// 1 - n prod_{i<=d} (1 + 2 (2 pi)^{-2 r_i})^{-1}; r positive and nondecreasing.
LowerBoundReport korobov_varying_bound(std::span<const int> r, int d, std::int64_t n);

struct PsdBoundCertificate {
  PsdCertificate certificate;
  double implied_bound = 0.0;  // ||h||^2 - 1/alpha, valid when certificate is PSD
};

/// PSD test of (K_d(x_j,x_k) - alpha h_d(x_j) h_d(x_k)).
PsdBoundCertificate psd_certificate(const TensorProblem& problem, const PointSet& points,
                                    double alpha, double tol = kDefaultPsdTolerance);

/// (1 - eps^2) prod (1 + alpha_i^2)
double min_nodes_for_eps(std::span<const double> alphas, double eps);

struct TractabilityRow {
  int d = 0;
  double epsilon = 0.0;
  double n_lower = 0.0;
  std::string regime;
  int prefix_length = 0;
  // Weighted-Korobov diagnostics (NaN for other tables).
  double sum_gamma = 0.0;
  double sum_gamma_over_log = 0.0;
  double mean_gamma = 0.0;
};

/// gamma[d-1] holds (gamma_{d,1}, ..., gamma_{d,d}).
std::vector<TractabilityRow> korobov_weighted_diagnostics(
    double s, const std::vector<std::vector<double>>& gamma, double eps);

/// One row per d = 1..r.size() with n_lower = (1 - eps^2) prod (1 + 2 (2 pi)^{-2 r_i})
/// and an advisory regime tag computed from the prefix r_1..r_d.
std::vector<TractabilityRow> korobov_varying_table(std::span<const int> r, double eps);

struct ExactnessStatement {
  int d = 0;
  std::int64_t n = 0;          // 2^d - 1
  double bound_value = 0.0;    // 2^{-d}, relative to ||h||^2
  bool positive = false;       // e(2^d - 1, S_d) > 0
  std::optional<QuadratureRule> witness;  // 2^d-point product rule when known
  double witness_error_sq = 0.0;
};

ExactnessStatement exact_integration_threshold(const TensorProblem& problem);

/// All formulas that apply to the problem, scaled by ||h||^2 so they bound
/// e(n, S_d)^2 directly.
std::vector<LowerBoundReport> applicable_bounds(const TensorProblem& problem, std::int64_t n);

}  // namespace curselab
