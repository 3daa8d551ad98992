#pragma once

#include <array>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace curselab {

// Univariate building blocks of tensor-product problems. Every factor is a
// small RKHS (at most a handful of basis functions, except the centered
// discrepancy space, which keeps its closed-form kernel) together with the
// representer h of the functional being approximated.

enum class Family {
  kTrig1,
  kWeightedTrig,
  kPhaseTrig,
  kGaussPoly2,
  kIntervalPoly2,
  kZeroBoundary,
  kCenteredDiscrepancy,
  kKorobovSmooth,
  kKorobovWeighted,
  kAffineLinear,
  kGramBased,
};

std::string_view to_string(Family f);
std::optional<Family> parse_family(std::string_view s);

struct Domain {
  double lower = 0.0;
  double upper = 1.0;
  bool unbounded = false;
  double box = 5.0;  // search half-width for unbounded domains

  static Domain interval(double lower, double upper);
  static Domain real_line(double box = 5.0);

  bool contains(double x) const;
  double search_lower() const { return unbounded ? -box : lower; }
  double search_upper() const { return unbounded ? box : upper; }
};

/// Polynomial in the monomial basis, coeffs[k] multiplies x^k.
struct Polynomial {
  std::vector<double> coeffs;

  double operator()(double x) const;
  Polynomial derivative() const;
  Polynomial operator*(const Polynomial& other) const;
  /// Exact integral over [a, b].
  double integrate(double a, double b) const;
  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

/// A finite-dimensional space given by a basis and its Gram (moment) matrix
/// under some inner product, plus the functional's values on the basis.
struct InnerProductSpec {
  std::vector<Polynomial> basis;
  Eigen::MatrixXd moments;    // <p_i, p_j>
  Eigen::VectorXd integrals;  // S(p_i)
  Domain domain;
};

/// <f,g> = sum_{l=0}^{order} int_a^b f^(l) g^(l) dx, and S(f) = int_a^b f dx.
InnerProductSpec sobolev_inner_product_spec(std::vector<Polynomial> basis, int order,
                                            double lower, double upper);

struct HfgValues {
  double h = 0.0;
  double f = 0.0;
  double g = 0.0;
};

class UnivariateFactor {
 public:
  static UnivariateFactor trig1();
  static UnivariateFactor weighted_trig(double alpha);
  static UnivariateFactor phase_trig(double phi);
  /// normalized = true uses the functional 2^{-1/2} S so that ||h|| = 1.
  static UnivariateFactor gauss_poly2(bool normalized = true, double box = 5.0);
  static UnivariateFactor interval_poly2();
  static UnivariateFactor zero_boundary();
  /// normalized = false keeps the raw representer with ||h||^2 = 1/12.
  static UnivariateFactor centered_discrepancy(bool normalized = false);
  static UnivariateFactor korobov_smooth(int r);
  static UnivariateFactor korobov_weighted(double s, double gamma);
  static UnivariateFactor affine_linear();
  static UnivariateFactor from_inner_product(const InnerProductSpec& spec);

  Family family() const { return family_; }
  const Domain& domain() const { return domain_; }
  std::string label() const;

  /// Present for factors with an orthonormal (h, f, g) triple,
  /// alpha h = sqrt(f^2 + g^2). Equals 1 for the degree-2 square families.
  std::optional<double> alpha() const { return alpha_; }
  double representer_norm_sq() const { return representer_norm_sq_; }
  bool normalized() const { return normalized_; }

  /// Space spanned by e1^2, e2^2, sqrt(2) e1 e2 with h in the direction of
  /// e1^2 + e2^2; the homogeneous 1 - n 2^{-d} bound applies to e^2/||h||^2.
  bool square_structured() const;
  bool has_hfg() const;

  double kernel(double x, double y) const;
  double representer(double x) const;
  /// h, f, g at x; throws NotApplicable when the factor has no such triple.
  HfgValues hfg(double x) const;

  // Orthonormal basis. basis_size() == 0 for closed-form kernels.
  int basis_size() const;
  void basis_values(double x, std::span<double> out) const;
  std::span<const double> representer_coefficients() const { return h_coeffs_; }

  // Domain-unchecked evaluation for inner loops that validated upfront.
  double kernel_unchecked(double x, double y) const;
  double representer_unchecked(double x) const;

  void check_domain(double x) const;

  // Family parameters, NaN (or r = 0) where not applicable.
  double phi() const { return phi_; }
  int smoothness_r() const { return r_; }
  double smoothness_s() const { return s_; }
  double gamma() const { return gamma_; }

 private:
  UnivariateFactor() = default;

  Family family_ = Family::kTrig1;
  Domain domain_;
  std::optional<double> alpha_;
  double phi_ = std::numeric_limits<double>::quiet_NaN();
  int r_ = 0;
  double s_ = std::numeric_limits<double>::quiet_NaN();
  double gamma_ = std::numeric_limits<double>::quiet_NaN();
  bool normalized_ = true;
  double representer_norm_sq_ = 1.0;
  double centered_scale_ = 1.0;
  std::vector<double> h_coeffs_;
  Eigen::MatrixXd poly_basis_;  // rows: orthonormal basis in monomial coefficients
};

struct Kappa {
  double value = 0.0;
  bool approximate = false;
  bool unbounded = false;
};

inline constexpr int kKappaGridPoints = 100000;

/// ess sup of the kernel diagonal. Closed form for built-in families; a
/// dense-grid maximum (flagged approximate) for Gram-based factors.
Kappa factor_kappa(const UnivariateFactor& factor);

struct IdentityCheck {
  double max_residual = 0.0;
  int pairs_used = 0;
  int pairs_rejected = 0;
};

inline constexpr double kIdentityRejectThreshold = 1e-8;

/// max |K(x,y) - M(x,y)^2 - (1 - alpha^2) h(x) h(y)| over the given pairs,
/// with M = a a' + b b', a = 2^{-1/4} sqrt(alpha h + f),
/// b = 2^{-1/4} sgn(g) sqrt(alpha h - f), sgn(0) = +1. Pairs where either
/// |g| < 1e-8 are skipped and counted as rejected.
IdentityCheck weighted_kernel_identity_check(const UnivariateFactor& factor,
                                             std::span<const std::pair<double, double>> pairs);

struct OneDimRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Two-point rule that is exact for the factor's functional on its whole
/// three-dimensional space, when one is known.
std::optional<OneDimRule> exact_two_point_rule(const UnivariateFactor& factor);

/// Probabilists' Gauss-Hermite rule (standard normal weight, weights sum to 1).
OneDimRule gauss_hermite_rule(int points);
/// Gauss-Legendre rule on [a, b] (weights sum to b - a).
OneDimRule gauss_legendre_rule(int points, double a, double b);

}  // namespace curselab
