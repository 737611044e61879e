#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "logtr/error.hpp"
#include "logtr/shrinkage.hpp"
#include "support/oracles.hpp"

using namespace logtr;

namespace {

double matrix_objective(const Matrix& x, const Matrix& y, double lambda, double eps) {
  Eigen::JacobiSVD<Matrix> svd(x);
  double v = 0.0;
  for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
    v += lambda * std::log(svd.singularValues()[k] + eps);
  }
  return v + 0.5 * (x - y).squaredNorm();
}

double jacobi_logdet(const Matrix& m, double eps) {
  Eigen::JacobiSVD<Matrix> svd(m);
  double v = 0.0;
  for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
    v += std::log(svd.singularValues()[k] + eps);
  }
  return v;
}

}  // namespace

TEST_CASE("scalar shrink worked examples") {
  // Larger root of t^2 - 1.9 t + 0.3 = 0.
  const double expected = (1.9 + std::sqrt(1.9 * 1.9 - 1.2)) / 2.0;
  CHECK(logdet_scalar_shrink(2.0, {0.5, 0.1}) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(logdet_scalar_shrink(2.0, {0.5, 0.1}) == doctest::Approx(1.72621).epsilon(1e-5));
  CHECK(logdet_scalar_shrink(-2.0, {0.5, 0.1}) == doctest::Approx(-expected).epsilon(1e-14));
  CHECK(logdet_scalar_shrink(0.3, {1.0, 0.1}) == 0.0);
  CHECK(logdet_scalar_shrink(0.0, {1.0, 0.1}) == 0.0);
  for (double x : {-3.0, -0.2, 0.0, 0.7, 5.5}) CHECK(logdet_scalar_shrink(x, {0.0, 0.3}) == x);
}

TEST_CASE("scalar shrink matches the rightmost local minimizer") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ux(-5.0, 5.0), ul(0.0, 2.0), ue(0.01, 1.0);
  int degenerate = 0;
  for (int k = 0; k < 2000; ++k) {
    const double x = ux(rng), lambda = ul(rng), eps = ue(rng);
    const double s = logdet_scalar_shrink(x, {lambda, eps});
    const double a = std::abs(x);
    const auto brute = oracle::brute_prox(a, lambda, eps);
    if (std::abs(std::abs(s) - brute.rightmost) <= 1e-8 * std::max(1.0, a)) continue;
    // Two nearly coincident stationary points inside one grid cell: accept if s is
    // a stationary point with nonnegative curvature.
    const double t = std::abs(s);
    const double fp = lambda / (t + eps) + t - a;
    const double fpp = 1.0 - lambda / ((t + eps) * (t + eps));
    CHECK(std::abs(fp) <= 1e-8);
    CHECK(fpp >= -1e-6);
    ++degenerate;
  }
  CHECK(degenerate <= 10);
}

TEST_CASE("scalar shrink is optimal except where zero beats the branch root") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ux(0.0, 5.0), ul(0.0, 2.0), ue(0.01, 1.0);
  int branch_rule_cases = 0;
  for (int k = 0; k < 2000; ++k) {
    const double a = ux(rng), lambda = ul(rng), eps = ue(rng);
    const double s = logdet_scalar_shrink(a, {lambda, eps});
    const double fs = oracle::prox_objective(s, a, lambda, eps);
    if (oracle::prox_objective(0.0, a, lambda, eps) < fs) {
      ++branch_rule_cases;
      continue;
    }
    const auto brute = oracle::brute_prox(a, lambda, eps);
    CHECK(fs <= oracle::prox_objective(brute.global, a, lambda, eps) + 1e-10);
  }
  // The branch rule keeps the nonzero root even when t = 0 is slightly lower.
  CHECK(branch_rule_cases < 200);
}

TEST_CASE("scalar shrink shape properties") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ul(0.0, 2.0), ue(0.01, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const ShrinkParams p{ul(rng), ue(rng)};
    double prev_s = 0.0, prev_amount = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 400; ++k) {
      const double x = 0.0125 * k;
      const double s = logdet_scalar_shrink(x, p);
      CHECK(std::abs(s) <= std::abs(x));
      CHECK(logdet_scalar_shrink(-x, p) == -s);
      CHECK(s >= prev_s);
      if (s > 0.0) {
        CHECK(x - s <= prev_amount + 1e-12);
        prev_amount = x - s;
      }
      prev_s = s;
    }
  }
}

TEST_CASE("logdet matrix prox") {
  SUBCASE("diagonal input shrinks each singular value") {
    Matrix y = Matrix::Zero(2, 2);
    y(0, 0) = 2.0;
    y(1, 1) = 0.3;
    const Matrix x = logdet_matrix_prox(y, {0.5, 0.1});
    CHECK(x(0, 0) == doctest::Approx(logdet_scalar_shrink(2.0, {0.5, 0.1})).epsilon(1e-12));
    CHECK(std::abs(x(1, 1) - logdet_scalar_shrink(0.3, {0.5, 0.1})) <= 1e-12);
    CHECK(std::abs(x(0, 1)) <= 1e-12);
    CHECK(std::abs(x(1, 0)) <= 1e-12);
  }
  SUBCASE("zero matrix") {
    CHECK(logdet_matrix_prox(Matrix::Zero(3, 5), {0.4, 1.0}) == Matrix::Zero(3, 5));
  }
  SUBCASE("lambda zero is the identity") {
    const Matrix y = oracle::random_matrix(6, 4, 3);
    CHECK((logdet_matrix_prox(y, {0.0, 1.0}) - y).cwiseAbs().maxCoeff() <= 1e-10);
  }
  SUBCASE("unitary invariance") {
    const Matrix y = oracle::random_matrix(5, 7, 4);
    const Matrix u = oracle::random_orthogonal(5, 5);
    const Matrix v = oracle::random_orthogonal(7, 6);
    const ShrinkParams p{0.8, 0.5};
    const Matrix lhs = logdet_matrix_prox(u * y * v.transpose(), p);
    const Matrix rhs = u * logdet_matrix_prox(y, p) * v.transpose();
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-8);
  }
  SUBCASE("subproblem objective does not increase") {
    for (int seed = 0; seed < 30; ++seed) {
      const Matrix y = oracle::random_matrix(6, 9, 100 + seed);
      const double lambda = 0.1 * (seed % 10 + 1);
      const double eps = 0.05 * (seed % 7 + 1);
      const Matrix x = logdet_matrix_prox(y, {lambda, eps});
      CHECK(matrix_objective(x, y, lambda, eps) <= matrix_objective(y, y, lambda, eps) + 1e-10);
    }
  }
  SUBCASE("errors") {
    Matrix bad = Matrix::Ones(2, 2);
    bad(0, 1) = std::nan("");
    CHECK_THROWS_AS(logdet_matrix_prox(bad, {0.5, 1.0}), NumericError);
    CHECK_THROWS_AS(logdet_matrix_prox(Matrix::Ones(2, 2), {-0.1, 1.0}), ArgumentError);
    CHECK_THROWS_AS(logdet_matrix_prox(Matrix::Ones(2, 2), {0.1, 0.0}), ArgumentError);
  }
}

TEST_CASE("nuclear prox") {
  Matrix y = Matrix::Zero(2, 2);
  y(0, 0) = 3.0;
  y(1, 1) = 1.0;
  const Matrix x = nuclear_prox(y, 0.5);
  CHECK(x(0, 0) == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(x(1, 1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(x(0, 1)) <= 1e-12);
  CHECK(nuclear_prox(y, 3.0) == Matrix::Zero(2, 2));
  CHECK(nuclear_prox(y, 10.0) == Matrix::Zero(2, 2));
  CHECK_THROWS_AS(nuclear_prox(y, -0.5), ArgumentError);

  const Matrix r = oracle::random_matrix(4, 6, 8);
  CHECK((nuclear_prox(r, 0.0) - r).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("logtr_value") {
  SUBCASE("zero tensor") {
    const DenseTensor z({4, 4, 4, 4});
    const std::vector<double> w{0.2, 0.8};
    // Unfoldings are 4x64 and 16x16.
    const double expected = 0.2 * 4 * std::log(0.5) + 0.8 * 16 * std::log(0.5);
    CHECK(logtr_value(z, w, 0.5) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(trnn_value(z, w) == 0.0);
  }
  SUBCASE("rank-one 4x4x4 against a Jacobi SVD oracle") {
    DenseTensor t({4, 4, 4});
    const double u[] = {1, 2, -1, 0.5}, v[] = {0.3, -1, 2, 1}, s[] = {1, 1, -2, 3};
    for (Index i = 0; i < 4; ++i)
      for (Index j = 0; j < 4; ++j)
        for (Index k = 0; k < 4; ++k) t.at({i, j, k}) = u[i] * v[j] * s[k];
    const std::vector<double> w{0.25, 0.75};
    const double expected = 0.25 * jacobi_logdet(oracle::circular(t, 1, 2), 1.0) +
                            0.75 * jacobi_logdet(oracle::circular(t, 2, 2), 1.0);
    CHECK(logtr_value(t, w, 1.0) == doctest::Approx(expected).epsilon(1e-12));
    // Only one nonzero singular value per unfolding: (1 + sigma) and three log(1) terms.
    CHECK(logtr_value(t, w, 1.0) == doctest::Approx(std::log(1.0 + t.frobenius_norm())).epsilon(1e-12));
  }
  SUBCASE("scaling increases the value") {
    const auto t = oracle::random_tensor({3, 4, 5, 2}, 9);
    const std::vector<double> w{0.5, 0.5};
    CHECK(logtr_value(t * 2.0, w, 1.0) > logtr_value(t, w, 1.0));
    CHECK(trnn_value(t * 2.0, w) == doctest::Approx(2.0 * trnn_value(t, w)).epsilon(1e-12));
  }
  SUBCASE("weight count is checked") {
    const DenseTensor z({2, 2, 2, 2});
    CHECK_THROWS_AS(logtr_value(z, std::vector<double>{1.0}, 1.0), ArgumentError);
    CHECK_THROWS_AS(trnn_value(z, std::vector<double>{0.5, 0.3, 0.2}), ArgumentError);
  }
}
