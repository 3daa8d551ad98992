#include "curselab/tensor.hpp"

#include <algorithm>
#include <string>

#include "curselab/errors.hpp"

namespace curselab {

PointSet::PointSet(int n, int d) : PointSet(n, d, std::vector<double>(static_cast<std::size_t>(std::max(0, n) * std::max(0, d)))) {}

PointSet::PointSet(int n, int d, std::vector<double> coords) : n_(n), d_(d), coords_(std::move(coords)) {
  if (n < 0 || d < 0) throw InvalidParameter("point set dimensions must be nonnegative");
  if (coords_.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(d)) {
    throw DimensionMismatch("point set: expected " + std::to_string(n * d) + " coordinates, got " +
                            std::to_string(coords_.size()));
  }
}

std::span<const double> PointSet::point(int j) const {
  return std::span<const double>(coords_).subspan(index(j, 0), static_cast<std::size_t>(d_));
}

PointSet PointSet::subset(std::span<const int> indices) const {
  PointSet out(static_cast<int>(indices.size()), d_);
  for (std::size_t k = 0; k < indices.size(); ++k)
    for (int i = 0; i < d_; ++i) out(static_cast<int>(k), i) = (*this)(indices[k], i);
  return out;
}

TensorProblem::TensorProblem(std::vector<UnivariateFactor> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw InvalidParameter("a tensor problem needs at least one factor");
  initial_error_sq_ = 1.0;
  for (const auto& f : factors_) initial_error_sq_ *= f.representer_norm_sq();
}

TensorProblem TensorProblem::replicate(const UnivariateFactor& factor, int d) {
  if (d < 1) throw InvalidParameter("dimension d must be >= 1");
  return TensorProblem(std::vector<UnivariateFactor>(static_cast<std::size_t>(d), factor));
}

double TensorProblem::kernel(std::span<const double> x, std::span<const double> y) const {
  if (x.size() != factors_.size() || y.size() != factors_.size()) {
    throw DimensionMismatch("kernel: point dimension does not match the problem");
  }
  double acc = 1.0;
  for (std::size_t i = 0; i < factors_.size(); ++i) acc *= factors_[i].kernel(x[i], y[i]);
  return acc;
}

double TensorProblem::representer(std::span<const double> x) const {
  if (x.size() != factors_.size()) throw DimensionMismatch("representer: point dimension does not match");
  double acc = 1.0;
  for (std::size_t i = 0; i < factors_.size(); ++i) acc *= factors_[i].representer(x[i]);
  return acc;
}

void TensorProblem::validate(const PointSet& points) const {
  if (points.size() > 0 && points.dimension() != dimension()) {
    throw DimensionMismatch("points have dimension " + std::to_string(points.dimension()) +
                            ", problem has " + std::to_string(dimension()));
  }
  for (int j = 0; j < points.size(); ++j)
    for (int i = 0; i < dimension(); ++i) factor(i).check_domain(points(j, i));
}

namespace {

// Row j of the Gram matrix (upper part, k >= j) and the representer value.
void fill_row(const TensorProblem& problem, const PointSet& points, int j, Eigen::MatrixXd& g,
              Eigen::VectorXd& b) {
  const int n = points.size();
  const int d = problem.dimension();
  for (int k = j; k < n; ++k) {
    double acc = 1.0;
    for (int i = 0; i < d; ++i) acc *= problem.factor(i).kernel_unchecked(points(j, i), points(k, i));
    g(j, k) = acc;
  }
  double h = 1.0;
  for (int i = 0; i < d; ++i) h *= problem.factor(i).representer_unchecked(points(j, i));
  b(j) = h;
}

}  // namespace

GramSystem gram_assemble(const TensorProblem& problem, const PointSet& points) {
  problem.validate(points);
  const int n = points.size();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd b(n);
#pragma omp parallel for schedule(dynamic, 4) if (n > 32)
  for (int j = 0; j < n; ++j) fill_row(problem, points, j, g, b);
  return {SymMatrix::from_upper(std::move(g)), std::move(b), problem.initial_error_sq()};
}

GramSystem gram_assemble_serial(const TensorProblem& problem, const PointSet& points) {
  problem.validate(points);
  const int n = points.size();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd b(n);
  for (int j = 0; j < n; ++j) fill_row(problem, points, j, g, b);
  return {SymMatrix::from_upper(std::move(g)), std::move(b), problem.initial_error_sq()};
}

WorstCaseError worst_case_error_sq(const GramSystem& system) {
  WorstCaseError out;
  if (system.representer.size() == 0) {
    out.error_sq = out.raw_error_sq = system.h_norm_sq;
    out.weights = Eigen::VectorXd(0);
    return out;
  }
  PinvQuadForm q = quad_form_pinv(system.gram, system.representer);
  out.raw_error_sq = system.h_norm_sq - q.value;
  out.error_sq = std::clamp(out.raw_error_sq, 0.0, system.h_norm_sq);
  out.weights = std::move(q.weights);
  return out;
}

WorstCaseError worst_case_error_sq(const TensorProblem& problem, const PointSet& points) {
  return worst_case_error_sq(gram_assemble(problem, points));
}

double error_of_rule(const TensorProblem& problem, const QuadratureRule& rule) {
  if (rule.weights.size() != rule.points.size()) {
    throw DimensionMismatch("rule has " + std::to_string(rule.weights.size()) + " weights for " +
                            std::to_string(rule.points.size()) + " points");
  }
  if (!rule.weights.allFinite()) throw InvalidParameter("rule weights must be finite");
  const GramSystem sys = gram_assemble(problem, rule.points);
  const Eigen::VectorXd& c = rule.weights;
  return sys.h_norm_sq - 2.0 * c.dot(sys.representer) + c.dot(sys.gram.entries() * c);
}

QuadratureRule product_rule(const std::vector<OneDimRule>& rules) {
  if (rules.empty()) throw InvalidParameter("product rule needs at least one factor rule");
  const int d = static_cast<int>(rules.size());
  int n = 1;
  for (const auto& r : rules) n *= static_cast<int>(r.nodes.size());
  QuadratureRule out{PointSet(n, d), Eigen::VectorXd::Ones(n)};
  for (int j = 0; j < n; ++j) {
    int rest = j;
    for (int i = d - 1; i >= 0; --i) {
      const auto& r = rules[static_cast<std::size_t>(i)];
      const int m = static_cast<int>(r.nodes.size());
      const auto idx = static_cast<std::size_t>(rest % m);
      rest /= m;
      out.points(j, i) = r.nodes[idx];
      out.weights(j) *= r.weights[idx];
    }
  }
  return out;
}

}  // namespace curselab
