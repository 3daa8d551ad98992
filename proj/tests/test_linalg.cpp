#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "curselab/errors.hpp"
#include "curselab/linalg.hpp"
#include "curselab/random.hpp"
#include "oracles.hpp"

using namespace curselab;

namespace {

Eigen::MatrixXd random_symmetric(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = nd(rng);
  return a;
}

Eigen::MatrixXd random_gram(std::mt19937_64& rng, int n, int rank) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXd f(n, rank);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < rank; ++j) f(i, j) = nd(rng);
  return f * f.transpose();
}

oracle::Mat to_mat(const Eigen::MatrixXd& a) {
  oracle::Mat m(static_cast<std::size_t>(a.rows()), oracle::Vec(static_cast<std::size_t>(a.cols())));
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = a(i, j);
  return m;
}

}  // namespace

TEST_CASE("SymMatrix symmetrizes by averaging") {
  Eigen::MatrixXd a(2, 2);
  a << 1, 2, 4, 3;
  const SymMatrix s(a);
  CHECK(s(0, 1) == 3.0);
  CHECK(s(1, 0) == 3.0);
  CHECK(s.scale() == 3.0);
  CHECK(SymMatrix::identity(3).scale() == 1.0);
}

TEST_CASE("sym_eigen examples") {
  const auto id = sym_eigen(SymMatrix::identity(3));
  for (int i = 0; i < 3; ++i) CHECK(id.values(i) == doctest::Approx(1.0).epsilon(1e-15));

  const auto ones = sym_eigen(SymMatrix::ones(2));
  CHECK(std::abs(ones.values(0)) < 1e-15);
  CHECK(ones.values(1) == doctest::Approx(2.0).epsilon(1e-15));

  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const SymMatrix a(random_symmetric(rng, 8));
    const auto es = sym_eigen(a);
    for (int i = 1; i < 8; ++i) CHECK(es.values(i - 1) <= es.values(i));
    const Eigen::MatrixXd rec = es.vectors * es.values.asDiagonal() * es.vectors.transpose();
    CHECK(max_abs(rec - a.entries()) <= 1e-10 * a.scale());
    CHECK(max_abs(es.vectors.transpose() * es.vectors - Eigen::MatrixXd::Identity(8, 8)) <= 1e-10);

    // Independent Jacobi oracle for the spectrum.
    auto ref = oracle::jacobi(to_mat(a.entries())).values;
    std::sort(ref.begin(), ref.end());
    for (int i = 0; i < 8; ++i) CHECK(es.values(i) == doctest::Approx(ref[static_cast<std::size_t>(i)]).epsilon(1e-10));
  }
}

TEST_CASE("sym_eigen rejects non-finite entries") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(2, 2);
  a(0, 1) = a(1, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(sym_eigen(SymMatrix(a)), InvalidMatrix);
  a(0, 1) = a(1, 0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(is_psd(SymMatrix(a)), InvalidMatrix);
}

TEST_CASE("is_psd examples") {
  const auto id = is_psd(SymMatrix::identity(4));
  CHECK(id.psd());
  CHECK(id.min_eigenvalue == doctest::Approx(1.0));

  Eigen::VectorXd d(2);
  d << 1.0, -1e-3;
  const auto neg = is_psd(SymMatrix::diagonal(d), 1e-9);
  CHECK_FALSE(neg.psd());
  CHECK(neg.min_eigenvalue == doctest::Approx(-1e-3));

  std::mt19937_64 rng(2);
  for (int t = 0; t < 50; ++t) CHECK(is_psd(SymMatrix(random_gram(rng, 7, 4))).psd());
}

TEST_CASE("PSD verdict follows the tolerance band") {
  Eigen::VectorXd d(2);
  d << 10.0, -5e-9;  // scale 10, tolerance band 1e-8
  CHECK(is_psd(SymMatrix::diagonal(d)).psd());
  d(1) = -2e-8;
  CHECK_FALSE(is_psd(SymMatrix::diagonal(d)).psd());
  CHECK_FALSE(is_psd(SymMatrix::diagonal(d), 1.9e-9).psd());
  CHECK(is_psd(SymMatrix::diagonal(d), 2.1e-9).psd());
}

TEST_CASE("quad_form_pinv examples") {
  Eigen::MatrixXd g(1, 1);
  g << 2.0;
  Eigen::VectorXd b(1);
  b << 1.0;
  auto q = quad_form_pinv(SymMatrix(g), b);
  CHECK(q.value == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(q.weights(0) == doctest::Approx(0.5).epsilon(1e-15));

  Eigen::VectorXd b2 = Eigen::VectorXd::Ones(2);
  q = quad_form_pinv(SymMatrix::diagonal(Eigen::VectorXd::Constant(2, 2.0)), b2);
  CHECK(q.value == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(q.weights(0) == doctest::Approx(0.5));
  CHECK(q.weights(1) == doctest::Approx(0.5));

  q = quad_form_pinv(SymMatrix::identity(3), Eigen::VectorXd::Zero(3));
  CHECK(q.value == 0.0);
  CHECK(q.weights.norm() == 0.0);
}

TEST_CASE("quad_form_pinv rejects indefinite matrices") {
  Eigen::VectorXd d(2);
  d << 1.0, -1.0;
  CHECK_THROWS_AS(quad_form_pinv(SymMatrix::diagonal(d), Eigen::VectorXd::Ones(2)), NotPsd);
  CHECK_THROWS_AS(quad_form_pinv(SymMatrix::identity(2), Eigen::VectorXd::Ones(3)), DimensionMismatch);
}

TEST_CASE("quad_form_pinv on singular matrices matches the Jacobi oracle") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 30; ++t) {
    const int n = 6, r = 1 + t % 5;
    const Eigen::MatrixXd g = random_gram(rng, n, r);
    // b in range(G)
    std::normal_distribution<double> nd;
    Eigen::VectorXd z(n);
    for (int i = 0; i < n; ++i) z(i) = nd(rng);
    const Eigen::VectorXd b = g * z;
    const auto q = quad_form_pinv(SymMatrix(g), b);
    const double ref = oracle::pinv_quad(to_mat(g), oracle::Vec(b.begin(), b.end()));
    CHECK(q.value == doctest::Approx(ref).epsilon(1e-8));
    CHECK(q.value >= 0.0);
    CHECK((g * q.weights - b).norm() <= 1e-8 * std::max(1.0, b.norm()));
  }
}

TEST_CASE("quad_form_pinv is permutation invariant") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    const int n = 7;
    const Eigen::MatrixXd g = random_gram(rng, n, n);
    std::normal_distribution<double> nd;
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) b(i) = nd(rng);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Eigen::MatrixXd gp(n, n);
    Eigen::VectorXd bp(n);
    for (int i = 0; i < n; ++i) {
      bp(i) = b(perm[i]);
      for (int j = 0; j < n; ++j) gp(i, j) = g(perm[i], perm[j]);
    }
    CHECK(quad_form_pinv(SymMatrix(gp), bp).value ==
          doctest::Approx(quad_form_pinv(SymMatrix(g), b).value).epsilon(1e-10));
  }
}

TEST_CASE("schur_product examples") {
  std::mt19937_64 rng(5);
  const SymMatrix a(random_symmetric(rng, 5));
  const SymMatrix ai = schur_product(a, SymMatrix::identity(5));
  CHECK(max_abs(ai.entries() - Eigen::MatrixXd(a.diag().asDiagonal())) == 0.0);
  CHECK(max_abs(schur_product(SymMatrix::ones(5), a).entries() - a.entries()) == 0.0);
  const SymMatrix aa = schur_product(a, a);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) CHECK(aa(i, j) == a(i, j) * a(i, j));
  CHECK_THROWS_AS(schur_product(SymMatrix::identity(2), SymMatrix::identity(3)), DimensionMismatch);

  // Schur product theorem.
  for (int t = 0; t < 30; ++t) {
    const SymMatrix m(random_gram(rng, 6, 1 + t % 6));
    CHECK(is_psd(schur_product(m, m)).psd());
  }
}

TEST_CASE("psd_rank examples") {
  CHECK(psd_rank(SymMatrix::ones(6)) == 1);
  CHECK(psd_rank(SymMatrix::identity(6)) == 6);
  std::mt19937_64 rng(6);
  for (int t = 0; t < 20; ++t) CHECK(psd_rank(SymMatrix(random_gram(rng, 3, 2))) == 2);
  Eigen::VectorXd d(2);
  d << 1.0, -1.0;
  CHECK_THROWS_AS(psd_rank(SymMatrix::diagonal(d)), NotPsd);
}

TEST_CASE("psd_factor examples") {
  const Eigen::MatrixXd fi = psd_factor(SymMatrix::identity(3));
  CHECK(max_abs(fi * fi.transpose() - Eigen::MatrixXd::Identity(3, 3)) <= 1e-12);
  CHECK(fi.cols() == 3);

  const Eigen::MatrixXd f1 = psd_factor(SymMatrix::ones(3));
  REQUIRE(f1.cols() == 1);
  CHECK(std::abs(std::abs(f1(0, 0)) - 1.0) <= 1e-12);
  CHECK(f1(0, 0) == doctest::Approx(f1(1, 0)));
  CHECK(f1(0, 0) == doctest::Approx(f1(2, 0)));

  std::mt19937_64 rng(7);
  for (int t = 0; t < 30; ++t) {
    const SymMatrix a(random_gram(rng, 6, 1 + t % 6));
    const Eigen::MatrixXd f = psd_factor(a);
    CHECK(f.cols() == psd_rank(a));
    CHECK(max_abs(a.entries() - f * f.transpose()) <= 1e-9 * a.scale());
  }
}

TEST_CASE("empty matrices are allowed") {
  const SymMatrix e(Eigen::MatrixXd(0, 0));
  CHECK(e.order() == 0);
  CHECK(quad_form_pinv(e, Eigen::VectorXd(0)).value == 0.0);
}

TEST_CASE("counter streams are reproducible and independent of draw order") {
  CounterStream a(7, 3), b(7, 3), c(7, 4);
  for (int i = 0; i < 10; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
  }
  CounterStream u(1, 0);
  double mean = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double x = u.uniform();
    CHECK_UNARY(x >= 0.0 && x < 1.0);
    mean += x;
  }
  CHECK(std::abs(mean / 100000 - 0.5) < 0.01);

  CounterStream g(2, 0);
  double m1 = 0.0, m2 = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double x = g.normal();
    m1 += x;
    m2 += x * x;
  }
  CHECK(std::abs(m1 / 100000) < 0.02);
  CHECK(std::abs(m2 / 100000 - 1.0) < 0.02);

  CounterStream q(3, 0);
  const Eigen::MatrixXd o = random_orthogonal(6, q);
  CHECK(max_abs(o.transpose() * o - Eigen::MatrixXd::Identity(6, 6)) <= 1e-12);
}
