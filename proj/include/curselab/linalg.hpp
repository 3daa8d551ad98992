#pragma once

#include <Eigen/Dense>

namespace curselab {

inline constexpr double kDefaultPsdTolerance = 1e-9;
inline constexpr double kDefaultPinvCutoff = 1e-12;

/// Dense real symmetric matrix. Construction symmetrizes by averaging, so
/// entry (i,j) and (j,i) are always bit-identical afterwards.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(const Eigen::MatrixXd& entries);

  static SymMatrix identity(Eigen::Index n);
  static SymMatrix ones(Eigen::Index n);
  static SymMatrix diagonal(const Eigen::VectorXd& diag);

  /// Wraps a matrix the caller has already filled symmetrically. Only the
  /// upper triangle is read.
  static SymMatrix from_upper(Eigen::MatrixXd entries);

  Eigen::Index order() const { return entries_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }
  const Eigen::MatrixXd& entries() const { return entries_; }
  Eigen::VectorXd diag() const { return entries_.diagonal(); }

  /// max(1, largest |entry|); the reference magnitude for all tolerances.
  double scale() const;

 private:
  Eigen::MatrixXd entries_;
};

struct EigenSystem {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // orthonormal columns
};

enum class PsdVerdict { kPsd, kNotPsd };

struct PsdCertificate {
  double min_eigenvalue = 0.0;
  double scale = 1.0;
  double tolerance = kDefaultPsdTolerance;
  PsdVerdict verdict = PsdVerdict::kPsd;

  bool psd() const { return verdict == PsdVerdict::kPsd; }
};

struct PinvQuadForm {
  double value = 0.0;       // b^T G^+ b
  Eigen::VectorXd weights;  // G^+ b
};

/// Throws InvalidMatrix on non-finite entries.
EigenSystem sym_eigen(const SymMatrix& a);

PsdCertificate is_psd(const SymMatrix& a, double tol = kDefaultPsdTolerance);

/// sup_c (c.b)^2 / (c^T G c), evaluated as b^T G^+ b with eigenvalues at or
/// below cutoff * lambda_max treated as zero. Throws NotPsd when G has an
/// eigenvalue below -tol * scale.
PinvQuadForm quad_form_pinv(const SymMatrix& g, const Eigen::VectorXd& b,
                             double tol = kDefaultPsdTolerance,
                             double cutoff = kDefaultPinvCutoff);

SymMatrix schur_product(const SymMatrix& a, const SymMatrix& b);

/// Number of eigenvalues above tol * lambda_max.
Eigen::Index psd_rank(const SymMatrix& a, double tol = kDefaultPsdTolerance);

/// F with psd_rank(a) columns and a = F F^T.
Eigen::MatrixXd psd_factor(const SymMatrix& a, double tol = kDefaultPsdTolerance);

double max_abs(const Eigen::MatrixXd& m);

}  // namespace curselab
