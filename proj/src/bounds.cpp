#include "curselab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "curselab/errors.hpp"

namespace curselab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kWitnessMaxDim = 12;

void require_n(std::int64_t n) {
  if (n < 0) throw InvalidParameter("n must be nonnegative");
}

void require_eps(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw InvalidParameter("epsilon must lie in (0, 1), got " + std::to_string(eps));
  }
}

void require_alphas(std::span<const double> alphas) {
  if (alphas.empty()) throw InvalidParameter("alpha list must not be empty");
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (!(alphas[i] > 0.0 && alphas[i] <= 1.0)) {
      throw AlphaOutOfRange("alphas[" + std::to_string(i) + "] = " + std::to_string(alphas[i]) +
                            " is outside (0, 1]");
    }
  }
}

void require_r(std::span<const int> r) {
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] < 1) throw InvalidParameter("r[" + std::to_string(i) + "] must be a positive integer");
    if (i > 0 && r[i] < r[i - 1]) {
      throw InvalidParameter("r must be nondecreasing (r[" + std::to_string(i) + "] < r[" +
                             std::to_string(i - 1) + "])");
    }
  }
}

double korobov_factor(int r) { return 1.0 + 2.0 * std::pow(kTwoPi, -2.0 * r); }

}  // namespace

std::string_view to_string(BoundFormula f) {
  switch (f) {
    case BoundFormula::kHomogeneous: return "HOMOGENEOUS";
    case BoundFormula::kWeighted: return "WEIGHTED";
    case BoundFormula::kUnified: return "UNIFIED";
    case BoundFormula::kRotated: return "ROTATED";
    case BoundFormula::kRandomInfo: return "RANDOM_INFO";
  }
  return "?";
}

LowerBoundReport curse_bound_homogeneous(int d, std::int64_t n) {
  if (d < 1) throw InvalidParameter("d must be >= 1");
  require_n(n);
  LowerBoundReport r;
  r.formula = BoundFormula::kHomogeneous;
  r.d = d;
  r.n = n;
  r.bound_value = 1.0 - static_cast<double>(n) * std::ldexp(1.0, -d);
  return r;
}

LowerBoundReport curse_bound_weighted(std::span<const double> alphas, std::int64_t n) {
  require_alphas(alphas);
  require_n(n);
  double prod = 1.0;
  for (const double a : alphas) prod *= 1.0 / (1.0 + a * a);
  LowerBoundReport r;
  r.formula = BoundFormula::kWeighted;
  r.d = static_cast<int>(alphas.size());
  r.n = n;
  r.parameters.assign(alphas.begin(), alphas.end());
  r.bound_value = 1.0 - static_cast<double>(n) * prod;
  return r;
}

LowerBoundReport unified_bound(double g_norm_sq, std::int64_t n) {
  if (!(g_norm_sq > 0.0) || !std::isfinite(g_norm_sq)) {
    throw InvalidParameter("||g||^2 must be positive and finite");
  }
  require_n(n);
  LowerBoundReport r;
  r.formula = BoundFormula::kUnified;
  r.n = n;
  r.parameters = {g_norm_sq};
  r.bound_value = 1.0 - 2.0 * static_cast<double>(n) / g_norm_sq;
  return r;
}

LowerBoundReport rotated_problem_bound(const TensorProblem& problem, std::int64_t n) {
  require_n(n);
  for (const auto& f : problem.factors()) {
    if (f.family() != Family::kTrig1 && f.family() != Family::kPhaseTrig) {
      throw UnsupportedFactor("rotated bound needs TRIG1 or PHASE_TRIG factors, got " + f.label());
    }
  }
  const int d = problem.dimension();
  LowerBoundReport r;
  r.formula = BoundFormula::kRotated;
  r.d = d;
  r.n = n;
  for (const auto& f : problem.factors()) r.parameters.push_back(f.family() == Family::kPhaseTrig ? f.phi() : 0.0);
  r.bound_value = 1.0 - static_cast<double>(n) * std::ldexp(1.0, 1 - d);
  return r;
}

LowerBoundReport random_info_bound(double c2, int d, std::int64_t n) {
  if (!(c2 > 1.0)) throw InvalidParameter("c2 must exceed 1");
  if (d < 1) throw InvalidParameter("d must be >= 1");
  require_n(n);
  LowerBoundReport r;
  r.formula = BoundFormula::kRandomInfo;
  r.d = d;
  r.n = n;
  r.parameters = {c2};
  r.bound_value = 1.0 - 2.0 * static_cast<double>(n) * std::pow(c2, -d);
  return r;
}

LowerBoundReport korobov_varying_bound(std::span<const int> r, int d, std::int64_t n) {
  if (d < 1) throw InvalidParameter("d must be >= 1");
  if (static_cast<int>(r.size()) < d) throw InvalidParameter("r sequence is shorter than d");
  require_r(r);
  require_n(n);
  double prod = 1.0;
  for (int i = 0; i < d; ++i) prod *= 1.0 / korobov_factor(r[static_cast<std::size_t>(i)]);
  LowerBoundReport rep;
  rep.formula = BoundFormula::kWeighted;
  rep.d = d;
  rep.n = n;
  for (int i = 0; i < d; ++i) rep.parameters.push_back(r[static_cast<std::size_t>(i)]);
  rep.bound_value = 1.0 - static_cast<double>(n) * prod;
  return rep;
}

PsdBoundCertificate psd_certificate(const TensorProblem& problem, const PointSet& points,
                                    double alpha, double tol) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidParameter("alpha must be positive");
  const GramSystem sys = gram_assemble(problem, points);
  const Eigen::MatrixXd m =
      sys.gram.entries() - alpha * sys.representer * sys.representer.transpose();
  PsdBoundCertificate out;
  out.certificate = is_psd(SymMatrix::from_upper(m), tol);
  out.implied_bound = sys.h_norm_sq - 1.0 / alpha;
  return out;
}

double min_nodes_for_eps(std::span<const double> alphas, double eps) {
  require_eps(eps);
  require_alphas(alphas);
  double prod = 1.0 - eps * eps;
  for (const double a : alphas) prod *= 1.0 + a * a;
  return prod;
}

std::vector<TractabilityRow> korobov_weighted_diagnostics(
    double s, const std::vector<std::vector<double>>& gamma, double eps) {
  if (!(s > 0.5)) throw InvalidParameter("s must exceed 1/2, got " + std::to_string(s));
  require_eps(eps);
  const double c = 2.0 * std::pow(kTwoPi, -2.0 * s);

  std::vector<TractabilityRow> rows;
  std::vector<double> sums;
  for (std::size_t di = 0; di < gamma.size(); ++di) {
    const int d = static_cast<int>(di) + 1;
    const auto& g = gamma[di];
    if (static_cast<int>(g.size()) != d) {
      throw InvalidParameter("gamma row " + std::to_string(d) + " must have " + std::to_string(d) + " entries");
    }
    TractabilityRow row;
    row.d = d;
    row.epsilon = eps;
    row.prefix_length = d;
    double prod = 1.0 - eps * eps;
    double sum = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (!(g[j] > 0.0) || !std::isfinite(g[j])) {
        throw InvalidParameter("gamma[" + std::to_string(d) + "][" + std::to_string(j + 1) + "] must be positive");
      }
      prod *= 1.0 + c * g[j];
      sum += g[j];
    }
    row.n_lower = prod;
    row.sum_gamma = sum;
    row.sum_gamma_over_log = sum / std::log(d + 1.0);
    row.mean_gamma = sum / d;
    sums.push_back(sum);

    // Advisory: compare against the row at half the dimension.
    const int half = std::max(1, d / 2);
    const double s_half = sums[static_cast<std::size_t>(half - 1)];
    if (d < 4) {
      row.regime = "insufficient-prefix";
    } else if (sum - s_half <= 0.1 * sum) {
      row.regime = "sum-bounded";
    } else if (row.sum_gamma_over_log <= 1.1 * s_half / std::log(half + 1.0)) {
      row.regime = "log-growth";
    } else if (row.mean_gamma <= 0.9 * s_half / half) {
      row.regime = "sublinear";
    } else {
      row.regime = "linear";
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<TractabilityRow> korobov_varying_table(std::span<const int> r, double eps) {
  require_eps(eps);
  require_r(r);
  const double threshold = 2.0 * std::log(kTwoPi);
  std::vector<TractabilityRow> rows;
  double prod = 1.0 - eps * eps;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const int d = static_cast<int>(i) + 1;
    prod *= korobov_factor(r[i]);
    TractabilityRow row;
    row.d = d;
    row.epsilon = eps;
    row.n_lower = prod;
    row.prefix_length = d;
    row.sum_gamma = row.sum_gamma_over_log = row.mean_gamma = std::nan("");

    const int half = std::max(1, d / 2);
    if (d < 4) {
      row.regime = "insufficient-prefix";
    } else if (r[i] == r[static_cast<std::size_t>(half - 1)]) {
      row.regime = "bounded-r:curse";
    } else {
      double l_inf = std::numeric_limits<double>::infinity();
      for (int k = half; k <= d; ++k) {
        l_inf = std::min(l_inf, std::log(static_cast<double>(k)) / r[static_cast<std::size_t>(k - 1)]);
      }
      row.regime = l_inf > threshold ? "liminf-above-2ln2pi:not-polynomially-tractable"
                                     : "undetermined";
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

ExactnessStatement exact_integration_threshold(const TensorProblem& problem) {
  for (const auto& f : problem.factors()) {
    if (!f.square_structured()) {
      throw UnsupportedFactor("exact integration threshold needs square-structured factors, got " + f.label());
    }
  }
  const int d = problem.dimension();
  ExactnessStatement st;
  st.d = d;
  st.n = (std::int64_t{1} << std::min(d, 62)) - 1;
  st.bound_value = std::ldexp(1.0, -d);
  st.positive = st.bound_value > 0.0;

  if (d <= kWitnessMaxDim) {
    std::vector<OneDimRule> rules;
    for (const auto& f : problem.factors()) {
      auto rule = exact_two_point_rule(f);
      if (!rule) return st;
      rules.push_back(std::move(*rule));
    }
    QuadratureRule q = product_rule(rules);
    st.witness_error_sq = error_of_rule(problem, q);
    st.witness = std::move(q);
  }
  return st;
}

std::vector<LowerBoundReport> applicable_bounds(const TensorProblem& problem, std::int64_t n) {
  std::vector<LowerBoundReport> out;
  const auto& fs = problem.factors();
  const double scale = problem.initial_error_sq();
  const int d = problem.dimension();

  if (std::all_of(fs.begin(), fs.end(), [](const auto& f) { return f.square_structured(); })) {
    auto r = curse_bound_homogeneous(d, n);
    r.bound_value *= scale;
    out.push_back(r);
  }
  if (std::all_of(fs.begin(), fs.end(), [](const auto& f) { return f.has_hfg(); })) {
    std::vector<double> alphas;
    for (const auto& f : fs) alphas.push_back(*f.alpha());
    auto r = curse_bound_weighted(alphas, n);
    r.bound_value *= scale;
    out.push_back(r);
  }
  if (std::all_of(fs.begin(), fs.end(), [](const auto& f) {
        return f.family() == Family::kTrig1 || f.family() == Family::kPhaseTrig;
      })) {
    auto r = rotated_problem_bound(problem, n);
    r.bound_value *= scale;
    out.push_back(r);
  }
  return out;
}

}  // namespace curselab
