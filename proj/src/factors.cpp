#include "curselab/factors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "curselab/errors.hpp"

namespace curselab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr int kMaxBasis = 16;

using Buffer = std::array<double, kMaxBasis>;

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string_view to_string(Family f) {
  switch (f) {
    case Family::kTrig1: return "TRIG1";
    case Family::kWeightedTrig: return "WEIGHTED_TRIG";
    case Family::kPhaseTrig: return "PHASE_TRIG";
    case Family::kGaussPoly2: return "GAUSS_POLY2";
    case Family::kIntervalPoly2: return "INTERVAL_POLY2";
    case Family::kZeroBoundary: return "ZERO_BOUNDARY";
    case Family::kCenteredDiscrepancy: return "CENTERED_DISCREPANCY";
    case Family::kKorobovSmooth: return "KOROBOV_SMOOTH";
    case Family::kKorobovWeighted: return "KOROBOV_WEIGHTED";
    case Family::kAffineLinear: return "AFFINE_LINEAR";
    case Family::kGramBased: return "GRAM_BASED";
  }
  return "?";
}

std::optional<Family> parse_family(std::string_view s) {
  for (const Family f :
       {Family::kTrig1, Family::kWeightedTrig, Family::kPhaseTrig, Family::kGaussPoly2,
        Family::kIntervalPoly2, Family::kZeroBoundary, Family::kCenteredDiscrepancy,
        Family::kKorobovSmooth, Family::kKorobovWeighted, Family::kAffineLinear,
        Family::kGramBased}) {
    if (to_string(f) == s) return f;
  }
  return std::nullopt;
}

Domain Domain::interval(double lower, double upper) {
  if (!(std::isfinite(lower) && std::isfinite(upper) && lower < upper)) {
    throw InvalidParameter("domain interval must satisfy lower < upper");
  }
  Domain d;
  d.lower = lower;
  d.upper = upper;
  return d;
}

Domain Domain::real_line(double box) {
  if (!(box > 0.0 && std::isfinite(box))) throw InvalidParameter("search box must be positive");
  Domain d;
  d.unbounded = true;
  d.lower = -std::numeric_limits<double>::infinity();
  d.upper = std::numeric_limits<double>::infinity();
  d.box = box;
  return d;
}

bool Domain::contains(double x) const {
  if (!std::isfinite(x)) return false;
  return unbounded || (x >= lower && x <= upper);
}

// ---------------------------------------------------------------------------
// Polynomial

double Polynomial::operator()(double x) const {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  Polynomial d;
  for (std::size_t k = 1; k < coeffs.size(); ++k) d.coeffs.push_back(static_cast<double>(k) * coeffs[k]);
  if (d.coeffs.empty()) d.coeffs.push_back(0.0);
  return d;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
  Polynomial p;
  if (coeffs.empty() || other.coeffs.empty()) return p;
  p.coeffs.assign(coeffs.size() + other.coeffs.size() - 1, 0.0);
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    for (std::size_t j = 0; j < other.coeffs.size(); ++j) p.coeffs[i + j] += coeffs[i] * other.coeffs[j];
  return p;
}

double Polynomial::integrate(double a, double b) const {
  double acc = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const double e = static_cast<double>(k + 1);
    acc += coeffs[k] * (std::pow(b, e) - std::pow(a, e)) / e;
  }
  return acc;
}

InnerProductSpec sobolev_inner_product_spec(std::vector<Polynomial> basis, int order,
                                            double lower, double upper) {
  if (order < 0) throw InvalidParameter("sobolev order must be >= 0");
  if (basis.empty()) throw InvalidParameter("inner product spec needs at least one basis polynomial");
  InnerProductSpec spec;
  spec.domain = Domain::interval(lower, upper);
  const auto m = static_cast<Eigen::Index>(basis.size());
  spec.moments = Eigen::MatrixXd::Zero(m, m);
  spec.integrals = Eigen::VectorXd::Zero(m);

  std::vector<Polynomial> derivs = basis;
  for (int l = 0; l <= order; ++l) {
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = i; j < m; ++j) {
        const double v = (derivs[static_cast<std::size_t>(i)] * derivs[static_cast<std::size_t>(j)])
                             .integrate(lower, upper);
        spec.moments(i, j) += v;
        if (i != j) spec.moments(j, i) += v;
      }
    for (auto& p : derivs) p = p.derivative();
  }
  for (Eigen::Index i = 0; i < m; ++i) spec.integrals(i) = basis[static_cast<std::size_t>(i)].integrate(lower, upper);
  spec.basis = std::move(basis);
  return spec;
}

// ---------------------------------------------------------------------------
// Factories

UnivariateFactor UnivariateFactor::trig1() {
  UnivariateFactor f;
  f.family_ = Family::kTrig1;
  f.domain_ = Domain::interval(0.0, 1.0);
  f.alpha_ = 1.0;
  f.h_coeffs_ = {1.0, 0.0, 0.0};
  return f;
}

UnivariateFactor UnivariateFactor::weighted_trig(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw AlphaOutOfRange("alpha must lie in (0, 1], got " + fmt_double(alpha));
  }
  UnivariateFactor f = trig1();
  f.family_ = Family::kWeightedTrig;
  f.alpha_ = alpha;
  return f;
}

UnivariateFactor UnivariateFactor::phase_trig(double phi) {
  if (!std::isfinite(phi)) throw InvalidParameter("phi must be finite");
  UnivariateFactor f = trig1();
  f.family_ = Family::kPhaseTrig;
  f.alpha_.reset();
  f.phi_ = phi;
  f.h_coeffs_ = {0.0, std::cos(phi), std::sin(phi)};
  return f;
}

UnivariateFactor UnivariateFactor::gauss_poly2(bool normalized, double box) {
  UnivariateFactor f;
  f.family_ = Family::kGaussPoly2;
  f.domain_ = Domain::real_line(box);
  f.normalized_ = normalized;
  // Basis (1+x^2)/sqrt2, (1-x^2)/sqrt2, sqrt2 x; S(b1) = sqrt2 for the plain
  // Gaussian integral.
  if (normalized) {
    f.alpha_ = 1.0;
    f.h_coeffs_ = {1.0, 0.0, 0.0};
    f.representer_norm_sq_ = 1.0;
  } else {
    f.h_coeffs_ = {kSqrt2, 0.0, 0.0};
    f.representer_norm_sq_ = 2.0;
  }
  return f;
}

UnivariateFactor UnivariateFactor::interval_poly2() {
  UnivariateFactor f;
  f.family_ = Family::kIntervalPoly2;
  f.domain_ = Domain::interval(-0.5, 0.5);
  f.alpha_ = 1.0;
  f.h_coeffs_ = {1.0, 0.0, 0.0};
  return f;
}

UnivariateFactor UnivariateFactor::zero_boundary() {
  UnivariateFactor f;
  f.family_ = Family::kZeroBoundary;
  f.domain_ = Domain::interval(0.0, 1.0);
  f.alpha_ = 1.0;
  f.h_coeffs_ = {1.0, 0.0, 0.0};
  return f;
}

UnivariateFactor UnivariateFactor::centered_discrepancy(bool normalized) {
  UnivariateFactor f;
  f.family_ = Family::kCenteredDiscrepancy;
  f.domain_ = Domain::interval(0.0, 1.0);
  f.normalized_ = normalized;
  f.centered_scale_ = normalized ? std::sqrt(12.0) : 1.0;
  f.representer_norm_sq_ = normalized ? 1.0 : 1.0 / 12.0;
  return f;
}

UnivariateFactor UnivariateFactor::korobov_smooth(int r) {
  if (r < 1) throw InvalidParameter("korobov smoothness r must be a positive integer");
  UnivariateFactor f = weighted_trig(kSqrt2 * std::pow(2.0 * kPi, -r));
  f.family_ = Family::kKorobovSmooth;
  f.r_ = r;
  return f;
}

UnivariateFactor UnivariateFactor::korobov_weighted(double s, double gamma) {
  if (!(s > 0.5)) throw InvalidParameter("korobov smoothness s must exceed 1/2, got " + fmt_double(s));
  if (!(gamma > 0.0 && std::isfinite(gamma))) {
    throw InvalidParameter("korobov weight gamma must be positive, got " + fmt_double(gamma));
  }
  UnivariateFactor f = weighted_trig(std::sqrt(2.0 * gamma) * std::pow(2.0 * kPi, -s));
  f.family_ = Family::kKorobovWeighted;
  f.s_ = s;
  f.gamma_ = gamma;
  return f;
}

UnivariateFactor UnivariateFactor::affine_linear() {
  UnivariateFactor f;
  f.family_ = Family::kAffineLinear;
  f.domain_ = Domain::interval(0.0, 1.0);
  f.h_coeffs_ = {1.0, 0.0};
  return f;
}

UnivariateFactor UnivariateFactor::from_inner_product(const InnerProductSpec& spec) {
  const auto m = static_cast<Eigen::Index>(spec.basis.size());
  if (m == 0 || m > kMaxBasis) {
    throw InvalidParameter("inner product spec needs between 1 and 16 basis polynomials");
  }
  if (spec.moments.rows() != m || spec.moments.cols() != m || spec.integrals.size() != m) {
    throw DimensionMismatch("inner product spec: moment matrix / integrals do not match the basis");
  }
  if (!spec.moments.allFinite() || !spec.integrals.allFinite()) {
    throw SingularMomentMatrix("moment matrix has non-finite entries");
  }
  if ((spec.moments - spec.moments.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, spec.moments.cwiseAbs().maxCoeff())) {
    throw SingularMomentMatrix("moment matrix is not symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(spec.moments);
  if (llt.info() != Eigen::Success) throw SingularMomentMatrix("moment matrix is not positive definite");
  {
    // Reject numerically singular moment matrices as well.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(spec.moments, Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) <= 1e-13 * es.eigenvalues()(m - 1)) {
      throw SingularMomentMatrix("moment matrix is numerically singular");
    }
  }

  int max_deg = 0;
  for (const auto& p : spec.basis) max_deg = std::max(max_deg, p.degree());
  Eigen::MatrixXd coeffs = Eigen::MatrixXd::Zero(m, max_deg + 1);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& c = spec.basis[static_cast<std::size_t>(i)].coeffs;
    for (std::size_t k = 0; k < c.size(); ++k) coeffs(i, static_cast<Eigen::Index>(k)) = c[k];
  }

  // q = L^{-1} p is orthonormal; h = sum S(q_i) q_i with S(q) = L^{-1} S(p).
  const Eigen::MatrixXd l = llt.matrixL();
  UnivariateFactor f;
  f.family_ = Family::kGramBased;
  f.domain_ = spec.domain;
  f.poly_basis_ = l.triangularView<Eigen::Lower>().solve(coeffs);
  const Eigen::VectorXd hq = l.triangularView<Eigen::Lower>().solve(spec.integrals);
  f.h_coeffs_.assign(hq.data(), hq.data() + hq.size());
  f.representer_norm_sq_ = hq.squaredNorm();
  return f;
}

// ---------------------------------------------------------------------------
// Evaluation

std::string UnivariateFactor::label() const {
  std::string s(to_string(family_));
  switch (family_) {
    case Family::kWeightedTrig: s += "(alpha=" + fmt_double(*alpha_) + ")"; break;
    case Family::kPhaseTrig: s += "(phi=" + fmt_double(phi_) + ")"; break;
    case Family::kKorobovSmooth: s += "(r=" + std::to_string(r_) + ")"; break;
    case Family::kKorobovWeighted: s += "(s=" + fmt_double(s_) + ",gamma=" + fmt_double(gamma_) + ")"; break;
    case Family::kGaussPoly2:
    case Family::kCenteredDiscrepancy: s += normalized_ ? "(normalized)" : "(raw)"; break;
    default: break;
  }
  return s;
}

bool UnivariateFactor::square_structured() const {
  switch (family_) {
    case Family::kTrig1:
    case Family::kGaussPoly2:
    case Family::kIntervalPoly2:
    case Family::kZeroBoundary:
    case Family::kCenteredDiscrepancy:
      return true;
    default:
      return false;
  }
}

bool UnivariateFactor::has_hfg() const { return alpha_.has_value() && basis_size() == 3; }

int UnivariateFactor::basis_size() const {
  switch (family_) {
    case Family::kCenteredDiscrepancy: return 0;
    case Family::kAffineLinear: return 2;
    case Family::kGramBased: return static_cast<int>(poly_basis_.rows());
    default: return 3;
  }
}

void UnivariateFactor::basis_values(double x, std::span<double> out) const {
  switch (family_) {
    case Family::kTrig1:
    case Family::kPhaseTrig:
    case Family::kWeightedTrig:
    case Family::kKorobovSmooth:
    case Family::kKorobovWeighted: {
      const double a = alpha_.value_or(1.0);
      out[0] = 1.0;
      out[1] = a * std::cos(2.0 * kPi * x);
      out[2] = a * std::sin(2.0 * kPi * x);
      return;
    }
    case Family::kGaussPoly2: {
      const double x2 = x * x;
      out[0] = (1.0 + x2) / kSqrt2;
      out[1] = (1.0 - x2) / kSqrt2;
      out[2] = kSqrt2 * x;
      return;
    }
    case Family::kIntervalPoly2: {
      const double x2 = x * x;
      out[0] = 0.5 + 6.0 * x2;
      out[1] = 0.5 - 6.0 * x2;
      out[2] = std::sqrt(12.0) * x;
      return;
    }
    case Family::kZeroBoundary: {
      const double s1 = std::sin(kPi * x);
      const double s2 = std::sin(2.0 * kPi * x);
      out[0] = s1 * s1 + s2 * s2;
      out[1] = s1 * s1 - s2 * s2;
      out[2] = 2.0 * s1 * s2;
      return;
    }
    case Family::kAffineLinear:
      out[0] = 1.0;
      out[1] = std::sqrt(12.0 / 13.0) * (x - 0.5);
      return;
    case Family::kGramBased: {
      const Eigen::Index m = poly_basis_.rows();
      const Eigen::Index deg = poly_basis_.cols();
      for (Eigen::Index i = 0; i < m; ++i) {
        double acc = 0.0;
        for (Eigen::Index k = deg - 1; k >= 0; --k) acc = acc * x + poly_basis_(i, k);
        out[static_cast<std::size_t>(i)] = acc;
      }
      return;
    }
    case Family::kCenteredDiscrepancy:
      return;
  }
}

void UnivariateFactor::check_domain(double x) const {
  if (!domain_.contains(x)) {
    throw DomainError("point " + fmt_double(x) + " lies outside the domain of " + label());
  }
}

double UnivariateFactor::kernel_unchecked(double x, double y) const {
  if (family_ == Family::kCenteredDiscrepancy) {
    return 0.5 * (std::abs(x - 0.5) + std::abs(y - 0.5) - std::abs(x - y));
  }
  Buffer bx{};
  Buffer by{};
  const int m = basis_size();
  basis_values(x, bx);
  basis_values(y, by);
  double acc = 0.0;
  for (int i = 0; i < m; ++i) acc += bx[static_cast<std::size_t>(i)] * by[static_cast<std::size_t>(i)];
  return acc;
}

double UnivariateFactor::representer_unchecked(double x) const {
  if (family_ == Family::kCenteredDiscrepancy) {
    const double t = std::abs(x - 0.5);
    return centered_scale_ * 0.5 * (t - t * t);
  }
  Buffer bx{};
  basis_values(x, bx);
  double acc = 0.0;
  for (std::size_t i = 0; i < h_coeffs_.size(); ++i) acc += h_coeffs_[i] * bx[i];
  return acc;
}

double UnivariateFactor::kernel(double x, double y) const {
  check_domain(x);
  check_domain(y);
  return kernel_unchecked(x, y);
}

double UnivariateFactor::representer(double x) const {
  check_domain(x);
  return representer_unchecked(x);
}

HfgValues UnivariateFactor::hfg(double x) const {
  if (!has_hfg()) {
    throw NotApplicable(label() + " has no orthonormal (h, f, g) structure");
  }
  check_domain(x);
  Buffer b{};
  basis_values(x, b);
  return {b[0], b[1], b[2]};
}

// ---------------------------------------------------------------------------

Kappa factor_kappa(const UnivariateFactor& factor) {
  Kappa k;
  if (factor.domain().unbounded) {
    k.value = std::numeric_limits<double>::infinity();
    k.unbounded = true;
    return k;
  }
  switch (factor.family()) {
    case Family::kTrig1:
    case Family::kPhaseTrig:
      k.value = 2.0;
      return k;
    case Family::kWeightedTrig:
    case Family::kKorobovSmooth:
    case Family::kKorobovWeighted:
      k.value = 1.0 + *factor.alpha() * *factor.alpha();
      return k;
    case Family::kIntervalPoly2:
      k.value = 8.0;
      return k;
    case Family::kZeroBoundary:
      // K(x,x) = 2 (sin^2 pi x + sin^2 2 pi x)^2, maximal at sin^2 pi x = 5/8.
      k.value = 625.0 / 128.0;
      return k;
    case Family::kCenteredDiscrepancy:
      k.value = 0.5;
      return k;
    case Family::kAffineLinear:
      k.value = 16.0 / 13.0;
      return k;
    case Family::kGaussPoly2:
    case Family::kGramBased:
      break;
  }
  const double a = factor.domain().lower;
  const double b = factor.domain().upper;
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kKappaGridPoints; ++i) {
    const double x = a + (b - a) * static_cast<double>(i) / kKappaGridPoints;
    best = std::max(best, factor.kernel_unchecked(x, x));
  }
  k.value = best;
  k.approximate = true;
  return k;
}

IdentityCheck weighted_kernel_identity_check(const UnivariateFactor& factor,
                                             std::span<const std::pair<double, double>> pairs) {
  if (!factor.has_hfg()) {
    throw NotApplicable("weighted kernel identity needs an (h, f, g, alpha) factor; got " + factor.label());
  }
  const double alpha = *factor.alpha();
  const double c = std::pow(2.0, -0.25);
  auto ab = [&](const HfgValues& v) {
    const double sgn = v.g >= 0.0 ? 1.0 : -1.0;
    return std::pair{c * std::sqrt(std::max(0.0, alpha * v.h + v.f)),
                     c * sgn * std::sqrt(std::max(0.0, alpha * v.h - v.f))};
  };

  IdentityCheck out;
  for (const auto& [x, y] : pairs) {
    const HfgValues vx = factor.hfg(x);
    const HfgValues vy = factor.hfg(y);
    if (std::abs(vx.g) < kIdentityRejectThreshold || std::abs(vy.g) < kIdentityRejectThreshold) {
      ++out.pairs_rejected;
      continue;
    }
    const auto [ax, bx] = ab(vx);
    const auto [ay, by] = ab(vy);
    const double m = ax * ay + bx * by;
    const double k = vx.h * vy.h + vx.f * vy.f + vx.g * vy.g;
    const double residual = std::abs(k - m * m - (1.0 - alpha * alpha) * vx.h * vy.h);
    out.max_residual = std::max(out.max_residual, residual);
    ++out.pairs_used;
  }
  return out;
}

std::optional<OneDimRule> exact_two_point_rule(const UnivariateFactor& factor) {
  switch (factor.family()) {
    case Family::kTrig1:
    case Family::kWeightedTrig:
    case Family::kKorobovSmooth:
    case Family::kKorobovWeighted:
      return OneDimRule{{0.0, 0.5}, {0.5, 0.5}};
    case Family::kAffineLinear:
      return OneDimRule{{0.0, 1.0}, {0.5, 0.5}};
    case Family::kIntervalPoly2: {
      const double t = 0.5 / std::sqrt(3.0);
      return OneDimRule{{-t, t}, {0.5, 0.5}};
    }
    case Family::kGaussPoly2: {
      const double w = factor.normalized() ? 0.5 / kSqrt2 : 0.5;
      return OneDimRule{{-1.0, 1.0}, {w, w}};
    }
    case Family::kZeroBoundary:
      // sin^2(pi x) = sin^2(2 pi x) = 3/4 at 1/3 and 2/3; the cross term is odd about 1/2.
      return OneDimRule{{1.0 / 3.0, 2.0 / 3.0}, {1.0 / 3.0, 1.0 / 3.0}};
    default:
      return std::nullopt;
  }
}

namespace {

OneDimRule golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& offdiag, double mu0) {
  const Eigen::Index m = diag.size();
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    j(i, i) = diag(i);
    if (i + 1 < m) j(i, i + 1) = j(i + 1, i) = offdiag(i);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  OneDimRule rule;
  for (Eigen::Index i = 0; i < m; ++i) {
    rule.nodes.push_back(es.eigenvalues()(i));
    const double v = es.eigenvectors()(0, i);
    rule.weights.push_back(mu0 * v * v);
  }
  return rule;
}

}  // namespace

OneDimRule gauss_hermite_rule(int points) {
  if (points < 1) throw InvalidParameter("quadrature rule needs at least one point");
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(points);
  Eigen::VectorXd off(std::max(0, points - 1));
  for (int k = 1; k < points; ++k) off(k - 1) = std::sqrt(static_cast<double>(k));
  return golub_welsch(diag, off, 1.0);
}

OneDimRule gauss_legendre_rule(int points, double a, double b) {
  if (points < 1) throw InvalidParameter("quadrature rule needs at least one point");
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(points);
  Eigen::VectorXd off(std::max(0, points - 1));
  for (int k = 1; k < points; ++k) {
    const double kk = static_cast<double>(k);
    off(k - 1) = kk / std::sqrt(4.0 * kk * kk - 1.0);
  }
  OneDimRule rule = golub_welsch(diag, off, 2.0);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    rule.nodes[i] = 0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[i];
    rule.weights[i] *= 0.5 * (b - a);
  }
  return rule;
}

}  // namespace curselab
