#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "curselab/factors.hpp"
#include "curselab/linalg.hpp"

namespace curselab {

/// n points in d dimensions, stored point-major.
class PointSet {
 public:
  PointSet() = default;
  PointSet(int n, int d);
  PointSet(int n, int d, std::vector<double> coords);

  int size() const { return n_; }
  int dimension() const { return d_; }
  double operator()(int point, int coord) const { return coords_[index(point, coord)]; }
  double& operator()(int point, int coord) { return coords_[index(point, coord)]; }
  std::span<const double> point(int j) const;
  std::span<const double> coordinates() const { return coords_; }
  std::span<double> coordinates() { return coords_; }

  /// Points with the given indices, in that order.
  PointSet subset(std::span<const int> indices) const;

 private:
  std::size_t index(int point, int coord) const {
    return static_cast<std::size_t>(point) * static_cast<std::size_t>(d_) + static_cast<std::size_t>(coord);
  }

  int n_ = 0;
  int d_ = 0;
  std::vector<double> coords_;
};

class TensorProblem {
 public:
  explicit TensorProblem(std::vector<UnivariateFactor> factors);
  static TensorProblem replicate(const UnivariateFactor& factor, int d);

  int dimension() const { return static_cast<int>(factors_.size()); }
  const std::vector<UnivariateFactor>& factors() const { return factors_; }
  const UnivariateFactor& factor(int i) const { return factors_[static_cast<std::size_t>(i)]; }

  /// Product of the factors' ||h_i||^2.
  double initial_error_sq() const { return initial_error_sq_; }

  double kernel(std::span<const double> x, std::span<const double> y) const;
  double representer(std::span<const double> x) const;

  /// Throws DomainError if any coordinate leaves its factor's domain, or
  /// DimensionMismatch if the point dimension is wrong.
  void validate(const PointSet& points) const;

 private:
  std::vector<UnivariateFactor> factors_;
  double initial_error_sq_ = 1.0;
};

struct GramSystem {
  SymMatrix gram;                  // K_d(x_j, x_k)
  Eigen::VectorXd representer;     // h_d(x_j)
  double h_norm_sq = 1.0;
};

/// OpenMP-parallel over rows. Each entry is a fixed-order product over the
/// coordinates, so the result is bit-identical to gram_assemble_serial.
GramSystem gram_assemble(const TensorProblem& problem, const PointSet& points);
GramSystem gram_assemble_serial(const TensorProblem& problem, const PointSet& points);

struct WorstCaseError {
  double error_sq = 0.0;      // clamped to [0, ||h||^2]
  double raw_error_sq = 0.0;  // ||h||^2 - b^T G^+ b before clamping
  Eigen::VectorXd weights;    // optimal weights G^+ b
};

/// Radius of information e(X_n, S)^2 with the optimal weights.
WorstCaseError worst_case_error_sq(const TensorProblem& problem, const PointSet& points);
WorstCaseError worst_case_error_sq(const GramSystem& system);

struct QuadratureRule {
  PointSet points;
  Eigen::VectorXd weights;
};

/// ||h||^2 - 2 sum c_j h(x_j) + sum c_j c_k K(x_j, x_k).
double error_of_rule(const TensorProblem& problem, const QuadratureRule& rule);

/// Tensor product of univariate rules, coordinate 0 varying slowest.
QuadratureRule product_rule(const std::vector<OneDimRule>& rules);

}  // namespace curselab
