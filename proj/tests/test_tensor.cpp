#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include <omp.h>

#include "curselab/bounds.hpp"
#include "curselab/errors.hpp"
#include "curselab/tensor.hpp"
#include "oracles.hpp"

using namespace curselab;

namespace {

PointSet to_pointset(const std::vector<oracle::Vec>& pts, int d) {
  std::vector<double> c;
  for (const auto& p : pts) c.insert(c.end(), p.begin(), p.end());
  return PointSet(static_cast<int>(pts.size()), d, c);
}

PointSet random_points(std::mt19937_64& rng, const TensorProblem& p, int n) {
  PointSet pts(n, p.dimension());
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < p.dimension(); ++i) {
      std::uniform_real_distribution<double> u(p.factor(i).domain().search_lower(), p.factor(i).domain().search_upper());
      pts(j, i) = u(rng);
    }
  return pts;
}

}  // namespace

TEST_CASE("tensor_kernel_eval examples") {
  const auto w = UnivariateFactor::weighted_trig(0.6);
  const TensorProblem one({w});
  const std::vector<double> x{0.3}, y{0.8};
  CHECK(one.kernel(x, y) == w.kernel(0.3, 0.8));

  for (int d = 1; d <= 8; ++d) {
    const auto p = TensorProblem::replicate(UnivariateFactor::trig1(), d);
    std::vector<double> z(static_cast<std::size_t>(d), 0.37);
    CHECK(p.kernel(z, z) == doctest::Approx(std::ldexp(1.0, d)).epsilon(1e-14));
  }

  const TensorProblem mixed({UnivariateFactor::affine_linear(), UnivariateFactor::zero_boundary()});
  const std::vector<double> a{0.2, 0.3}, b{0.9, 0.6};
  CHECK(mixed.kernel(a, b) == doctest::Approx(oracle::affine(0.2, 0.9) * oracle::zero_boundary(0.3, 0.6)));
  CHECK(mixed.representer(a) == doctest::Approx(1.0 * UnivariateFactor::zero_boundary().representer(0.3)));

  const std::vector<double> out{1.2, 0.3};
  CHECK_THROWS_AS(mixed.kernel(out, b), DomainError);
  CHECK_THROWS_AS(mixed.kernel(x, b), DimensionMismatch);
}

TEST_CASE("initial error is the product of factor norms") {
  const TensorProblem p({UnivariateFactor::centered_discrepancy(), UnivariateFactor::gauss_poly2(false),
                         UnivariateFactor::trig1()});
  CHECK(p.initial_error_sq() == doctest::Approx(2.0 / 12.0).epsilon(1e-12));
  CHECK_THROWS_AS(TensorProblem({}), InvalidParameter);
}

TEST_CASE("gram_assemble examples") {
  const auto p = TensorProblem::replicate(UnivariateFactor::trig1(), 1);
  const auto g1 = gram_assemble(p, PointSet(1, 1, {0.0}));
  CHECK(g1.gram(0, 0) == 2.0);
  CHECK(g1.representer(0) == 1.0);

  const auto g2 = gram_assemble(p, PointSet(2, 1, {0.0, 0.5}));
  CHECK(g2.gram(0, 0) == doctest::Approx(2.0));
  CHECK(std::abs(g2.gram(0, 1)) <= 1e-15);
  CHECK(g2.gram(1, 1) == doctest::Approx(2.0));
  CHECK(g2.representer(1) == doctest::Approx(1.0));

  const auto g0 = gram_assemble(TensorProblem::replicate(UnivariateFactor::centered_discrepancy(), 2), PointSet(0, 2));
  CHECK(g0.gram.order() == 0);
  CHECK(g0.h_norm_sq == doctest::Approx(1.0 / 144.0));

  CHECK_THROWS_AS(gram_assemble(p, PointSet(1, 1, {1.5})), DomainError);
}

TEST_CASE("parallel Gram assembly is bit-identical to the serial reference") {
  std::mt19937_64 rng(41);
  const auto p = TensorProblem::replicate(UnivariateFactor::affine_linear(), 9);
  for (int n : {1, 31, 33, 100, 257}) {
    const PointSet pts = random_points(rng, p, n);
    const auto serial = gram_assemble_serial(p, pts);
    for (int threads : {1, 2, 4}) {
      omp_set_num_threads(threads);
      const auto par = gram_assemble(p, pts);
      CHECK((par.gram.entries().array() == serial.gram.entries().array()).all());
      CHECK((par.representer.array() == serial.representer.array()).all());
    }
  }
  omp_set_num_threads(1);
}

TEST_CASE("worst_case_error_sq examples") {
  const auto p1 = TensorProblem::replicate(UnivariateFactor::trig1(), 1);
  const auto e = worst_case_error_sq(p1, PointSet(1, 1, {0.0}));
  CHECK(e.error_sq == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(e.weights(0) == doctest::Approx(0.5).epsilon(1e-15));

  const auto e2 = worst_case_error_sq(p1, PointSet(2, 1, {0.0, 0.5}));
  CHECK(e2.error_sq <= 1e-15);
  CHECK(e2.weights(0) == doctest::Approx(0.5));
  CHECK(e2.weights(1) == doctest::Approx(0.5));

  std::mt19937_64 rng(42);
  for (int d = 1; d <= 12; ++d) {
    const auto p = TensorProblem::replicate(UnivariateFactor::trig1(), d);
    for (int t = 0; t < 20; ++t) {
      const auto r = worst_case_error_sq(p, random_points(rng, p, 1));
      CHECK(std::abs(r.error_sq - (1.0 - std::ldexp(1.0, -d))) <= 1e-12);
    }
  }

  const auto empty = worst_case_error_sq(p1, PointSet(0, 1));
  CHECK(empty.error_sq == 1.0);
  CHECK(empty.weights.size() == 0);
}

TEST_CASE("worst_case_error_sq agrees with the independent oracle") {
  std::mt19937_64 rng(43);
  struct Case {
    UnivariateFactor f;
    double (*k)(double, double);
  };
  const std::vector<Case> cases = {{UnivariateFactor::trig1(), oracle::trig1},
                                   {UnivariateFactor::affine_linear(), oracle::affine},
                                   {UnivariateFactor::zero_boundary(), oracle::zero_boundary},
                                   {UnivariateFactor::centered_discrepancy(), oracle::centered}};
  for (const auto& c : cases) {
    for (int d = 1; d <= 4; ++d) {
      const auto p = TensorProblem::replicate(c.f, d);
      for (int t = 0; t < 10; ++t) {
        const int n = 1 + t;
        const auto raw = oracle::uniform_points(rng, n, d);
        const double ref = oracle::error_sq(
            raw, [&](std::size_t, double x, double y) { return c.k(x, y); },
            [&](std::size_t, double x) { return c.f.representer(x); }, p.initial_error_sq());
        const double got = worst_case_error_sq(p, to_pointset(raw, d)).error_sq;
        CHECK(std::abs(got - ref) <= 1e-9 * std::max(1.0, p.initial_error_sq()));
      }
    }
  }
}

TEST_CASE("error_of_rule examples") {
  const auto p2 = TensorProblem::replicate(UnivariateFactor::trig1(), 2);
  QuadratureRule zero{PointSet(3, 2, {0.1, 0.2, 0.3, 0.4, 0.5, 0.6}), Eigen::VectorXd::Zero(3)};
  CHECK(error_of_rule(p2, zero) == doctest::Approx(1.0));

  const auto grid = product_rule({OneDimRule{{0.0, 0.5}, {0.5, 0.5}}, OneDimRule{{0.0, 0.5}, {0.5, 0.5}}});
  CHECK(grid.points.size() == 4);
  CHECK(grid.points(1, 0) == 0.0);
  CHECK(grid.points(1, 1) == 0.5);
  CHECK(grid.weights(0) == 0.25);
  CHECK(std::abs(error_of_rule(p2, grid)) <= 1e-15);

  std::mt19937_64 rng(44);
  const auto p = TensorProblem::replicate(UnivariateFactor::korobov_smooth(1), 3);
  for (int t = 0; t < 20; ++t) {
    const PointSet pts = random_points(rng, p, 5);
    const auto e = worst_case_error_sq(p, pts);
    CHECK(error_of_rule(p, QuadratureRule{pts, e.weights}) == doctest::Approx(e.error_sq).epsilon(1e-9));
    CHECK(std::abs(error_of_rule(p, QuadratureRule{pts, e.weights}) - e.error_sq) <= 1e-9);
  }
  CHECK_THROWS_AS(error_of_rule(p2, QuadratureRule{PointSet(1, 2, {0.1, 0.2}), Eigen::VectorXd::Ones(2)}),
                  DimensionMismatch);
}

TEST_CASE("nested point sets never increase the error") {
  std::mt19937_64 rng(45);
  const TensorProblem p({UnivariateFactor::interval_poly2(), UnivariateFactor::weighted_trig(0.7),
                         UnivariateFactor::affine_linear()});
  for (int t = 0; t < 30; ++t) {
    const PointSet y = random_points(rng, p, 12);
    double prev = p.initial_error_sq();
    for (int k = 0; k <= 12; ++k) {
      std::vector<int> idx(static_cast<std::size_t>(k));
      std::iota(idx.begin(), idx.end(), 0);
      const double e = worst_case_error_sq(p, y.subset(idx)).error_sq;
      CHECK(e <= prev + 1e-9);
      CHECK(e >= 0.0);
      CHECK(e <= p.initial_error_sq());
      prev = e;
    }
  }
}

TEST_CASE("error is invariant under point permutations") {
  std::mt19937_64 rng(46);
  const auto p = TensorProblem::replicate(UnivariateFactor::zero_boundary(), 3);
  for (int t = 0; t < 30; ++t) {
    const PointSet pts = random_points(rng, p, 7);
    std::vector<int> idx(7);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    const double a = worst_case_error_sq(p, pts.subset(idx)).error_sq, b = worst_case_error_sq(p, pts).error_sq;
    // Points near the ends make K(x,x) ~ x^4, so G is badly conditioned and
    // rounding differs between orderings.
    CHECK(std::abs(a - b) <= 1e-7);
  }
}

TEST_CASE("duplicate points add no information") {
  const auto p = TensorProblem::replicate(UnivariateFactor::affine_linear(), 2);
  const PointSet once(2, 2, {0.1, 0.2, 0.7, 0.9});
  const PointSet twice(4, 2, {0.1, 0.2, 0.7, 0.9, 0.1, 0.2, 0.7, 0.9});
  CHECK(worst_case_error_sq(p, twice).error_sq == doctest::Approx(worst_case_error_sq(p, once).error_sq).epsilon(1e-10));
}

TEST_CASE("PSD verdict agrees with the error inequality") {
  std::mt19937_64 rng(47);
  int agreed = 0, tested = 0;
  for (int t = 0; t < 300; ++t) {
    const int d = 1 + t % 3, n = 1 + t % 8;
    const auto p = TensorProblem::replicate(t % 2 ? UnivariateFactor::trig1() : UnivariateFactor::affine_linear(), d);
    const PointSet pts = random_points(rng, p, n);
    const double e = worst_case_error_sq(p, pts).error_sq;
    std::uniform_real_distribution<double> ua(1e-3, 4.0 * std::ldexp(1.0, d) / n);
    const double alpha = ua(rng);
    const double boundary = p.initial_error_sq() - 1.0 / alpha;
    if (std::abs(e - boundary) <= 1e-7) continue;
    ++tested;
    const auto cert = psd_certificate(p, pts, alpha);
    agreed += cert.certificate.psd() == (e >= boundary);
  }
  CHECK(tested > 200);
  CHECK(agreed == tested);
}

TEST_CASE("point sets validate their dimensions") {
  CHECK_THROWS_AS(PointSet(2, 2, {0.1, 0.2, 0.3}), DimensionMismatch);
  const auto p = TensorProblem::replicate(UnivariateFactor::trig1(), 2);
  CHECK_THROWS_AS(worst_case_error_sq(p, PointSet(1, 3, {0.1, 0.2, 0.3})), DimensionMismatch);
}
