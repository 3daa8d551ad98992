#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include <Eigen/Dense>

#include "curselab/linalg.hpp"

namespace curselab {

// Uniform lower bounds for Schur (Hadamard) products of PSD matrices.
//
//   kSelfN       M o M  >=  (1/n)  diag(M) diag(M)^T
//   kRankR       M o M  >=  (1/r)  diag(M) diag(M)^T,   r = rank M
//   kTwoMatrix   sum c_j c_k M_jk N_jk >= (1/D) (sum c_j <A^j, B^j>)^2,  M = AA^T, N = BB^T
//   kCombined2R  sum c_j c_k M_jk^2    >= (1/2r)(sum c_j <A^j, B^j>)^2,  M = AA^T = BB^T
//
// The first two are matrix inequalities and are certified by a PSD test of
// the difference. The last two are per-vector and are checked on given c.
enum class SchurTheorem { kSelfN, kRankR, kTwoMatrix, kCombined2R };

std::string_view to_string(SchurTheorem t);
std::optional<SchurTheorem> parse_schur_theorem(std::string_view s);

/// Which constant check_combined uses. kConjectured swaps 1/(2r) for 1/r;
/// violations in that mode are recorded, never raised.
enum class CombinedConstant { kProven, kConjectured };

struct SchurCheckReport {
  SchurTheorem theorem = SchurTheorem::kSelfN;
  double constant_used = 0.0;
  // Matrix-form checks.
  std::optional<PsdCertificate> certificate;
  double difference_max_abs = 0.0;
  // Scalar-form checks.
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double scale = 1.0;
  std::optional<Eigen::VectorXd> witness;

  bool holds() const;
  /// margin / scale for scalar forms, min_eigenvalue / scale for matrix forms.
  double normalized_margin() const;
};

inline constexpr double kSchurMarginTolerance = 1e-9;
inline constexpr double kFactorizationTolerance = 1e-8;

SchurCheckReport check_self_product(const SymMatrix& m, double tol = kDefaultPsdTolerance);
SchurCheckReport check_rank_bound(const SymMatrix& m, double tol = kDefaultPsdTolerance);
SchurCheckReport check_two_matrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                  const Eigen::VectorXd& c);
SchurCheckReport check_combined(const SymMatrix& m, const Eigen::MatrixXd& a,
                                const Eigen::MatrixXd& b, const Eigen::VectorXd& c,
                                CombinedConstant constant = CombinedConstant::kProven);

/// Randomized suite driver shared by the CLI and the tests. Trial t uses the
/// stream (seed, t); the summary does not depend on thread count.
struct SchurSuiteOptions {
  SchurTheorem theorem = SchurTheorem::kSelfN;
  CombinedConstant constant = CombinedConstant::kProven;
  int n = 10;
  int trials = 1000;
  std::uint64_t seed = 0;
  int parallel_degree = 1;
};

struct SchurSuiteSummary {
  SchurTheorem theorem = SchurTheorem::kSelfN;
  CombinedConstant constant = CombinedConstant::kProven;
  int n = 0;
  int trials = 0;
  double worst_normalized_margin = 0.0;
  int worst_trial = -1;
  int violations = 0;
};

SchurSuiteSummary run_schur_suite(const SchurSuiteOptions& options);

}  // namespace curselab
