#include <doctest.h>

#include <numeric>
#include <random>

#include "curselab/errors.hpp"
#include "curselab/random.hpp"
#include "curselab/schur.hpp"
#include "oracles.hpp"

using namespace curselab;

namespace {

Eigen::MatrixXd normal(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = nd(rng);
  return m;
}

// Direct double sums, no matrix products.
double lhs_direct(const Eigen::MatrixXd& m, const Eigen::MatrixXd& n, const Eigen::VectorXd& c) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < c.size(); ++j)
    for (Eigen::Index k = 0; k < c.size(); ++k) s += c(j) * c(k) * m(j, k) * n(j, k);
  return s;
}

double inner_sum(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Eigen::VectorXd& c) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < a.rows(); ++j) {
    double ip = 0.0;
    for (Eigen::Index l = 0; l < a.cols(); ++l) ip += a(j, l) * b(j, l);
    s += c(j) * ip;
  }
  return s;
}

}  // namespace

TEST_CASE("theorem names round-trip") {
  for (auto t : {SchurTheorem::kSelfN, SchurTheorem::kRankR, SchurTheorem::kTwoMatrix, SchurTheorem::kCombined2R}) {
    CHECK(parse_schur_theorem(to_string(t)) == t);
  }
  CHECK(parse_schur_theorem("COMBINED") == SchurTheorem::kCombined2R);
  CHECK_FALSE(parse_schur_theorem("nope").has_value());
}

TEST_CASE("check_self_product examples") {
  for (int n = 1; n <= 8; ++n) {
    const auto r = check_self_product(SymMatrix::identity(n));
    CHECK(r.holds());
    CHECK(r.constant_used == doctest::Approx(1.0 / n));
    // I - J/n has eigenvalues 1 (multiplicity n-1) and 0.
    CHECK(r.certificate->min_eigenvalue == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.certificate->min_eigenvalue >= -1e-12);
  }
  // All-ones with 1/n: the difference is (1 - 1/n) J, PSD with min eigenvalue 0.
  const auto j = check_self_product(SymMatrix::ones(5));
  CHECK(j.holds());

  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    const Eigen::MatrixXd g = normal(rng, 10, 1 + t % 10);
    const auto r = check_self_product(SymMatrix(g * g.transpose()));
    CHECK(r.holds());
    CHECK(r.certificate->min_eigenvalue >= -1e-9 * r.certificate->scale);
  }

  Eigen::VectorXd d(2);
  d << 1.0, -1.0;
  CHECK_THROWS_AS(check_self_product(SymMatrix::diagonal(d)), NotPsd);
}

TEST_CASE("check_rank_bound examples") {
  for (int n = 1; n <= 10; ++n) {
    const auto r = check_rank_bound(SymMatrix::ones(n));
    CHECK(r.constant_used == 1.0);
    CHECK(r.difference_max_abs <= 1e-12);
    CHECK(r.holds());
  }
  const auto id = check_rank_bound(SymMatrix::identity(6));
  const auto self = check_self_product(SymMatrix::identity(6));
  CHECK(id.constant_used == self.constant_used);
  CHECK(id.certificate->min_eigenvalue == doctest::Approx(self.certificate->min_eigenvalue));

  // r random unit vectors replicated to n rows.
  std::mt19937_64 rng(12);
  for (int t = 0; t < 100; ++t) {
    const int r = 1 + t % 4, n = 9;
    Eigen::MatrixXd u = normal(rng, r, 5);
    u.rowwise().normalize();
    Eigen::MatrixXd rows(n, 5);
    for (int i = 0; i < n; ++i) rows.row(i) = u.row(i % r);
    const auto rep = check_rank_bound(SymMatrix(rows * rows.transpose()));
    CHECK(rep.constant_used == doctest::Approx(1.0 / r));
    CHECK(rep.holds());
  }
}

TEST_CASE("check_two_matrix examples") {
  for (int n = 1; n <= 6; ++n) {
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    const auto r = check_two_matrix(id, id, Eigen::VectorXd::Ones(n));
    CHECK(r.lhs == doctest::Approx(n));
    CHECK(r.rhs == doctest::Approx(n));
    CHECK(std::abs(r.margin) <= 1e-12);
  }
  std::mt19937_64 rng(13);
  const Eigen::MatrixXd a = normal(rng, 8, 10), b = normal(rng, 8, 10);
  const auto zero = check_two_matrix(a, b, Eigen::VectorXd::Zero(8));
  CHECK(zero.lhs == 0.0);
  CHECK(zero.rhs == 0.0);
  CHECK(zero.holds());

  for (int t = 0; t < 1000; ++t) {
    const Eigen::MatrixXd c = normal(rng, 8, 1);
    const auto r = check_two_matrix(a, b, c.col(0));
    CHECK(r.margin >= -1e-9 * r.scale);
    // Independent arithmetic for both sides.
    const double lhs = lhs_direct(a * a.transpose(), b * b.transpose(), c.col(0));
    const double s = inner_sum(a, b, c.col(0));
    CHECK(r.lhs == doctest::Approx(lhs).epsilon(1e-10));
    CHECK(r.rhs == doctest::Approx(s * s / 10.0).epsilon(1e-10));
    REQUIRE(r.witness.has_value());
  }
  CHECK_THROWS_AS(check_two_matrix(a, normal(rng, 8, 9), Eigen::VectorXd::Ones(8)), DimensionMismatch);
  CHECK_THROWS_AS(check_two_matrix(a, b, Eigen::VectorXd::Ones(7)), DimensionMismatch);
}

TEST_CASE("check_combined examples") {
  std::mt19937_64 rng(14);
  CounterStream stream(14, 0);
  for (int t = 0; t < 100; ++t) {
    const int n = 7, r = 1 + t % 7;
    const Eigen::MatrixXd g = normal(rng, n, r);
    const SymMatrix m(g * g.transpose());
    const Eigen::MatrixXd f = psd_factor(m);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    a.leftCols(f.cols()) = f;
    const Eigen::MatrixXd b = a * random_orthogonal(n, stream);
    for (int k = 0; k < 10; ++k) {
      const Eigen::VectorXd c = normal(rng, n, 1).col(0);
      const auto rep = check_combined(m, a, b, c);
      CHECK(rep.constant_used == doctest::Approx(1.0 / (2.0 * r)));
      CHECK(rep.margin >= -1e-9 * rep.scale);

      // A = B: the right-hand side is half of the rank-bound form c^T (dd^T/r) c.
      const auto same = check_combined(m, a, a, c);
      const double dc = c.dot(m.diag());
      CHECK(same.rhs == doctest::Approx(dc * dc / (2.0 * r)).epsilon(1e-10));
      CHECK(same.rhs <= dc * dc / r + 1e-12);
    }
  }
  const SymMatrix one = SymMatrix::ones(3);
  const Eigen::MatrixXd f = Eigen::MatrixXd::Ones(3, 1);
  const auto zero = check_combined(one, f, f, Eigen::VectorXd::Zero(3));
  CHECK(zero.lhs == 0.0);
  CHECK(zero.holds());

  CHECK_THROWS_AS(check_combined(one, 2.0 * f, f, Eigen::VectorXd::Ones(3)), FactorizationMismatch);
}

TEST_CASE("scalar checks are invariant under row permutation") {
  std::mt19937_64 rng(15);
  for (int t = 0; t < 50; ++t) {
    const int n = 6;
    const Eigen::MatrixXd a = normal(rng, n, 8), b = normal(rng, n, 8);
    const Eigen::VectorXd c = normal(rng, n, 1).col(0);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Eigen::MatrixXd ap(n, 8), bp(n, 8);
    Eigen::VectorXd cp(n);
    for (int i = 0; i < n; ++i) {
      ap.row(i) = a.row(perm[i]);
      bp.row(i) = b.row(perm[i]);
      cp(i) = c(perm[i]);
    }
    CHECK(check_two_matrix(ap, bp, cp).margin == doctest::Approx(check_two_matrix(a, b, c).margin).epsilon(1e-10));

    const SymMatrix m(a * a.transpose()), mp(ap * ap.transpose());
    CHECK(check_combined(mp, ap, ap, cp).margin ==
          doctest::Approx(check_combined(m, a, a, c).margin).epsilon(1e-10));
  }
}

TEST_CASE("randomized suites hold and do not depend on thread count") {
  for (auto th : {SchurTheorem::kSelfN, SchurTheorem::kRankR, SchurTheorem::kTwoMatrix, SchurTheorem::kCombined2R}) {
    SchurSuiteOptions opt;
    opt.theorem = th;
    opt.n = 8;
    opt.trials = 200;
    opt.seed = 21;
    opt.parallel_degree = 1;
    const auto s1 = run_schur_suite(opt);
    opt.parallel_degree = 4;
    const auto s4 = run_schur_suite(opt);
    CHECK(s1.violations == 0);
    CHECK(s1.worst_normalized_margin >= -1e-9);
    CHECK(s1.worst_normalized_margin == s4.worst_normalized_margin);
    CHECK(s1.worst_trial == s4.worst_trial);
  }
}

TEST_CASE("conjectured constant records margins without raising") {
  SchurSuiteOptions opt;
  opt.theorem = SchurTheorem::kCombined2R;
  opt.constant = CombinedConstant::kConjectured;
  opt.n = 6;
  opt.trials = 200;
  const auto s = run_schur_suite(opt);
  CHECK(s.trials == 200);
  CHECK(s.worst_trial >= 0);
  CHECK(s.violations >= 0);
}
