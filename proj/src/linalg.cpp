#include "curselab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "curselab/errors.hpp"

namespace curselab {

namespace {

void require_finite(const Eigen::MatrixXd& m) {
  if (!m.allFinite()) throw InvalidMatrix("matrix has non-finite entries");
}

void require_psd(const EigenSystem& es, double scale, double tol) {
  if (es.values.size() == 0) return;
  const double lo = es.values(0);
  if (lo < -tol * scale) {
    throw NotPsd("matrix is not positive semi-definite: min eigenvalue " + std::to_string(lo) +
                 " < -" + std::to_string(tol * scale));
  }
}

}  // namespace

SymMatrix::SymMatrix(const Eigen::MatrixXd& entries) {
  if (entries.rows() != entries.cols()) {
    throw DimensionMismatch("SymMatrix requires a square matrix, got " +
                            std::to_string(entries.rows()) + "x" + std::to_string(entries.cols()));
  }
  entries_ = 0.5 * (entries + entries.transpose());
}

SymMatrix SymMatrix::identity(Eigen::Index n) {
  return from_upper(Eigen::MatrixXd::Identity(n, n));
}

SymMatrix SymMatrix::ones(Eigen::Index n) { return from_upper(Eigen::MatrixXd::Ones(n, n)); }

SymMatrix SymMatrix::diagonal(const Eigen::VectorXd& diag) {
  return from_upper(diag.asDiagonal().toDenseMatrix());
}

SymMatrix SymMatrix::from_upper(Eigen::MatrixXd entries) {
  if (entries.rows() != entries.cols()) {
    throw DimensionMismatch("SymMatrix requires a square matrix");
  }
  const Eigen::Index n = entries.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) entries(i, j) = entries(j, i);
  }
  SymMatrix out;
  out.entries_ = std::move(entries);
  return out;
}

double SymMatrix::scale() const { return std::max(1.0, max_abs(entries_)); }

double max_abs(const Eigen::MatrixXd& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

EigenSystem sym_eigen(const SymMatrix& a) {
  require_finite(a.entries());
  if (a.order() == 0) return {Eigen::VectorXd(0), Eigen::MatrixXd(0, 0)};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.entries(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw InvalidMatrix("eigendecomposition did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

PsdCertificate is_psd(const SymMatrix& a, double tol) {
  if (!(tol >= 0.0)) throw InvalidParameter("PSD tolerance must be nonnegative");
  const EigenSystem es = sym_eigen(a);
  PsdCertificate cert;
  cert.min_eigenvalue = es.values.size() ? es.values(0) : 0.0;
  cert.scale = a.scale();
  cert.tolerance = tol;
  cert.verdict = cert.min_eigenvalue >= -tol * cert.scale ? PsdVerdict::kPsd : PsdVerdict::kNotPsd;
  return cert;
}

PinvQuadForm quad_form_pinv(const SymMatrix& g, const Eigen::VectorXd& b, double tol,
                            double cutoff) {
  if (b.size() != g.order()) {
    throw DimensionMismatch("quad_form_pinv: vector length " + std::to_string(b.size()) +
                            " does not match matrix order " + std::to_string(g.order()));
  }
  require_finite(b);
  const EigenSystem es = sym_eigen(g);
  require_psd(es, g.scale(), tol);

  PinvQuadForm out;
  out.weights = Eigen::VectorXd::Zero(b.size());
  if (b.size() == 0) return out;

  const double lambda_max = es.values(es.values.size() - 1);
  if (lambda_max <= 0.0) return out;
  const double threshold = cutoff * lambda_max;

  // Project b onto the kept eigenvectors; sum in ascending-eigenvalue order.
  const Eigen::VectorXd coords = es.vectors.transpose() * b;
  double value = 0.0;
  for (Eigen::Index k = 0; k < coords.size(); ++k) {
    const double lambda = es.values(k);
    if (lambda <= threshold) continue;
    const double t = coords(k) / lambda;
    value += coords(k) * t;
    out.weights.noalias() += t * es.vectors.col(k);
  }
  out.value = value;
  return out;
}

SymMatrix schur_product(const SymMatrix& a, const SymMatrix& b) {
  if (a.order() != b.order()) {
    throw DimensionMismatch("schur_product: orders " + std::to_string(a.order()) + " and " +
                            std::to_string(b.order()) + " differ");
  }
  return SymMatrix::from_upper(a.entries().cwiseProduct(b.entries()));
}

Eigen::Index psd_rank(const SymMatrix& a, double tol) {
  const EigenSystem es = sym_eigen(a);
  require_psd(es, a.scale(), tol);
  if (es.values.size() == 0) return 0;
  const double lambda_max = es.values(es.values.size() - 1);
  if (lambda_max <= 0.0) return 0;
  return static_cast<Eigen::Index>((es.values.array() > tol * lambda_max).count());
}

Eigen::MatrixXd psd_factor(const SymMatrix& a, double tol) {
  const EigenSystem es = sym_eigen(a);
  require_psd(es, a.scale(), tol);
  const Eigen::Index n = a.order();
  if (n == 0) return Eigen::MatrixXd(0, 0);
  const double lambda_max = es.values(n - 1);
  const Eigen::Index rank =
      lambda_max <= 0.0 ? 0 : static_cast<Eigen::Index>((es.values.array() > tol * lambda_max).count());
  // Kept eigenvalues are the top `rank` ones; order columns by decreasing eigenvalue.
  Eigen::MatrixXd f(n, rank);
  for (Eigen::Index k = 0; k < rank; ++k) {
    const Eigen::Index src = n - 1 - k;
    f.col(k) = std::sqrt(es.values(src)) * es.vectors.col(src);
  }
  return f;
}

}  // namespace curselab
