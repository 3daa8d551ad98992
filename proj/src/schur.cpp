#include "curselab/schur.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <omp.h>

#include "curselab/errors.hpp"
#include "curselab/random.hpp"

namespace curselab {

std::string_view to_string(SchurTheorem t) {
  switch (t) {
    case SchurTheorem::kSelfN: return "SELF_N";
    case SchurTheorem::kRankR: return "RANK_R";
    case SchurTheorem::kTwoMatrix: return "TWO_MATRIX";
    case SchurTheorem::kCombined2R: return "COMBINED_2R";
  }
  return "?";
}

std::optional<SchurTheorem> parse_schur_theorem(std::string_view s) {
  if (s == "SELF_N") return SchurTheorem::kSelfN;
  if (s == "RANK_R") return SchurTheorem::kRankR;
  if (s == "TWO_MATRIX") return SchurTheorem::kTwoMatrix;
  if (s == "COMBINED_2R" || s == "COMBINED") return SchurTheorem::kCombined2R;
  return std::nullopt;
}

bool SchurCheckReport::holds() const {
  if (certificate) return certificate->psd();
  return margin >= -kSchurMarginTolerance * scale;
}

double SchurCheckReport::normalized_margin() const {
  if (certificate) return certificate->min_eigenvalue / certificate->scale;
  return margin / scale;
}

namespace {

SchurCheckReport diag_outer_check(const SymMatrix& m, SchurTheorem theorem, double constant,
                                  double tol) {
  const Eigen::VectorXd d = m.diag();
  const Eigen::MatrixXd diff = m.entries().cwiseProduct(m.entries()) - constant * d * d.transpose();
  const SymMatrix difference = SymMatrix::from_upper(diff);

  SchurCheckReport report;
  report.theorem = theorem;
  report.constant_used = constant;
  report.certificate = is_psd(difference, tol);
  report.difference_max_abs = max_abs(difference.entries());
  report.scale = difference.scale();
  report.margin = report.certificate->min_eigenvalue;
  return report;
}

void require_psd_input(const SymMatrix& m, double tol) {
  const PsdCertificate cert = is_psd(m, tol);
  if (!cert.psd()) {
    throw NotPsd("input matrix is not positive semi-definite (min eigenvalue " +
                 std::to_string(cert.min_eigenvalue) + ")");
  }
}

// (sum_j c_j <A^j, B^j>)^2
double row_inner_sum_sq(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                        const Eigen::VectorXd& c) {
  const Eigen::VectorXd rows = a.cwiseProduct(b).rowwise().sum();
  const double s = c.dot(rows);
  return s * s;
}

}  // namespace

SchurCheckReport check_self_product(const SymMatrix& m, double tol) {
  require_psd_input(m, tol);
  if (m.order() == 0) throw InvalidParameter("check_self_product needs n >= 1");
  return diag_outer_check(m, SchurTheorem::kSelfN, 1.0 / static_cast<double>(m.order()), tol);
}

SchurCheckReport check_rank_bound(const SymMatrix& m, double tol) {
  require_psd_input(m, tol);
  const Eigen::Index r = psd_rank(m, tol);
  if (r == 0) throw InvalidParameter("check_rank_bound needs a nonzero matrix");
  return diag_outer_check(m, SchurTheorem::kRankR, 1.0 / static_cast<double>(r), tol);
}

SchurCheckReport check_two_matrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                  const Eigen::VectorXd& c) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch("check_two_matrix: factors must have the same shape");
  }
  if (c.size() != a.rows()) throw DimensionMismatch("check_two_matrix: c has wrong length");
  if (a.cols() == 0) throw DimensionMismatch("check_two_matrix: factors need D >= 1 columns");

  const Eigen::MatrixXd m = a * a.transpose();
  const Eigen::MatrixXd n = b * b.transpose();
  SchurCheckReport report;
  report.theorem = SchurTheorem::kTwoMatrix;
  report.constant_used = 1.0 / static_cast<double>(a.cols());
  report.lhs = c.dot(m.cwiseProduct(n) * c);
  report.rhs = report.constant_used * row_inner_sum_sq(a, b, c);
  report.margin = report.lhs - report.rhs;
  report.scale = std::max({1.0, std::abs(report.lhs), std::abs(report.rhs)});
  report.witness = c;
  return report;
}

SchurCheckReport check_combined(const SymMatrix& m, const Eigen::MatrixXd& a,
                                const Eigen::MatrixXd& b, const Eigen::VectorXd& c,
                                CombinedConstant constant) {
  if (a.rows() != m.order() || b.rows() != m.order() || a.cols() != b.cols()) {
    throw DimensionMismatch("check_combined: factors must be n x D with n = order(M)");
  }
  if (c.size() != m.order()) throw DimensionMismatch("check_combined: c has wrong length");
  const double limit = kFactorizationTolerance * m.scale();
  const double res_a = max_abs(m.entries() - a * a.transpose());
  const double res_b = max_abs(m.entries() - b * b.transpose());
  if (res_a > limit || res_b > limit) {
    throw FactorizationMismatch("check_combined: M != AA^T or M != BB^T (residuals " +
                                std::to_string(res_a) + ", " + std::to_string(res_b) + ")");
  }
  const Eigen::Index r = psd_rank(m);
  if (r == 0) throw InvalidParameter("check_combined needs a nonzero matrix");
  if (a.cols() < r) throw DimensionMismatch("check_combined: D must be at least rank(M)");

  SchurCheckReport report;
  report.theorem = SchurTheorem::kCombined2R;
  const double denom = constant == CombinedConstant::kProven ? 2.0 * static_cast<double>(r)
                                                              : static_cast<double>(r);
  report.constant_used = 1.0 / denom;
  report.lhs = c.dot(m.entries().cwiseProduct(m.entries()) * c);
  report.rhs = report.constant_used * row_inner_sum_sq(a, b, c);
  report.margin = report.lhs - report.rhs;
  report.scale = std::max({1.0, std::abs(report.lhs), std::abs(report.rhs)});
  report.witness = c;
  return report;
}

namespace {

// One randomized trial. Ranks are drawn uniformly in [1, n] so that both the
// full-rank and the rank-deficient regimes are exercised.
SchurCheckReport run_trial(const SchurSuiteOptions& opt, int trial) {
  CounterStream stream(opt.seed, static_cast<std::uint64_t>(trial));
  const Eigen::Index n = opt.n;
  const auto rank = static_cast<Eigen::Index>(1 + stream.next_u64() % static_cast<std::uint64_t>(n));

  switch (opt.theorem) {
    case SchurTheorem::kSelfN:
    case SchurTheorem::kRankR: {
      const Eigen::MatrixXd g = normal_matrix(n, rank, stream);
      const SymMatrix m(g * g.transpose());
      return opt.theorem == SchurTheorem::kSelfN ? check_self_product(m) : check_rank_bound(m);
    }
    case SchurTheorem::kTwoMatrix: {
      const Eigen::Index cols = n + 2;
      const Eigen::MatrixXd a = normal_matrix(n, cols, stream);
      const Eigen::MatrixXd b = normal_matrix(n, cols, stream);
      const Eigen::VectorXd c = normal_vector(n, stream);
      return check_two_matrix(a, b, c);
    }
    case SchurTheorem::kCombined2R: {
      const Eigen::MatrixXd g = normal_matrix(n, rank, stream);
      const SymMatrix m(g * g.transpose());
      const Eigen::MatrixXd f = psd_factor(m);
      const Eigen::Index cols = std::max<Eigen::Index>(n, f.cols());
      Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, cols);
      a.leftCols(f.cols()) = f;
      const Eigen::MatrixXd b = a * random_orthogonal(cols, stream);
      const Eigen::VectorXd c = normal_vector(n, stream);
      return check_combined(m, a, b, c, opt.constant);
    }
  }
  throw InvalidParameter("unknown Schur theorem");
}

}  // namespace

SchurSuiteSummary run_schur_suite(const SchurSuiteOptions& opt) {
  if (opt.n < 1) throw InvalidParameter("schur suite: n must be >= 1");
  if (opt.trials < 1) throw InvalidParameter("schur suite: trials must be >= 1");

  std::vector<double> margins(static_cast<std::size_t>(opt.trials));
  std::vector<char> held(static_cast<std::size_t>(opt.trials));
  const int threads = std::max(1, opt.parallel_degree);

#pragma omp parallel for schedule(dynamic, 8) num_threads(threads)
  for (int t = 0; t < opt.trials; ++t) {
    const SchurCheckReport r = run_trial(opt, t);
    margins[static_cast<std::size_t>(t)] = r.normalized_margin();
    held[static_cast<std::size_t>(t)] = r.holds() ? 1 : 0;
  }

  SchurSuiteSummary summary;
  summary.theorem = opt.theorem;
  summary.constant = opt.constant;
  summary.n = opt.n;
  summary.trials = opt.trials;
  summary.worst_normalized_margin = std::numeric_limits<double>::infinity();
  for (int t = 0; t < opt.trials; ++t) {
    const double m = margins[static_cast<std::size_t>(t)];
    if (m < summary.worst_normalized_margin) {
      summary.worst_normalized_margin = m;
      summary.worst_trial = t;
    }
    if (!held[static_cast<std::size_t>(t)]) ++summary.violations;
  }
  return summary;
}

}  // namespace curselab
