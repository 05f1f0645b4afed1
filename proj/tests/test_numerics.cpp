#include <gtest/gtest.h>

#include <random>

#include "oracle.hpp"
#include "somit/error.hpp"
#include "somit/numerics.hpp"

using somit::numerics::DenseMatrix;
namespace num = somit::numerics;

TEST(DenseMatrix, RejectsNonFiniteEntries) {
  EXPECT_THROW(DenseMatrix(1, 2, std::vector<double>{1.0, NAN}), somit::ValidationError);
  EXPECT_THROW(DenseMatrix(2, 2, std::vector<double>{1.0, 2.0, 3.0}), somit::ValidationError);
}

TEST(DenseMatrix, RowAndColumnAccess) {
  const auto m = DenseMatrix::from_rows({{1, 2, 3}, {4, 5, 6}});
  EXPECT_EQ(m.rows(), 2u);
  EXPECT_EQ(m.cols(), 3u);
  EXPECT_EQ(m.column(1), (std::vector<double>{2, 5}));
  EXPECT_DOUBLE_EQ(m.row(1)[2], 6.0);
  EXPECT_EQ(m.multiply(std::vector<double>{1, 1, 1}), (std::vector<double>{6, 15}));
}

TEST(SolveLinear, SmallSystemNeedsPivoting) {
  const auto a = DenseMatrix::from_rows({{0, 2, 1}, {1, 1, 1}, {2, 1, 0}});
  const auto x = num::solve_linear(a, std::vector<double>{7, 6, 4});
  EXPECT_NEAR(x[0], 1.0, 1e-12);
  EXPECT_NEAR(x[1], 2.0, 1e-12);
  EXPECT_NEAR(x[2], 3.0, 1e-12);
}

TEST(SolveLinear, SingularMatrixIsNumericError) {
  const auto a = DenseMatrix::from_rows({{1, 2}, {2, 4}});
  EXPECT_THROW(num::solve_linear(a, std::vector<double>{1, 2}), somit::NumericError);
}

TEST(SolveLinear, MatchesQrOnRandomSystems) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 7;
    Eigen::MatrixXd e(n, n);
    DenseMatrix a(n, n);
    std::vector<double> b(n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) a(r, c) = e(r, c) = u(rng);
      b[r] = u(rng);
    }
    const Eigen::VectorXd expected = e.colPivHouseholderQr().solve(Eigen::Map<Eigen::VectorXd>(b.data(), n));
    const auto x = num::solve_linear(a, b);
    for (std::size_t k = 0; k < n; ++k) EXPECT_NEAR(x[k], expected(k), 1e-8 * (1 + std::abs(expected(k))));
  }
}

TEST(PrincipalEigenvector, ConsistentMatrixGivesExactRatios) {
  const std::vector<double> w{0.5, 0.3, 0.2};
  DenseMatrix a(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) a(i, j) = w[i] / w[j];
  const auto r = num::principal_eigenvector(a);
  EXPECT_NEAR(r.lambda_max, 3.0, 1e-12);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(r.vector[i], w[i], 1e-12);
}

TEST(PrincipalEigenvector, AgreesWithEigenSolver) {
  const auto a = DenseMatrix::from_rows({{1, 2, 4, 2}, {0.5, 1, 3, 5}, {0.25, 1.0 / 3, 1, 2}, {0.5, 0.2, 0.5, 1}});
  Eigen::MatrixXd e(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) e(r, c) = a(r, c);
  const auto [v, lambda] = somit::testing::oracle::principal_eigen(e);
  const auto got = num::principal_eigenvector(a);
  EXPECT_NEAR(got.lambda_max, lambda, 1e-10);
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(got.vector[k], v(k), 1e-10);
}

TEST(Statistics, MedianOddAndEven) {
  EXPECT_DOUBLE_EQ(num::median(std::vector<double>{3, 1, 2}), 2.0);
  EXPECT_DOUBLE_EQ(num::median(std::vector<double>{4, 1, 3, 2}), 2.5);
  EXPECT_DOUBLE_EQ(num::median(std::vector<double>{7}), 7.0);
}

TEST(Statistics, PopulationStddevAndMean) {
  const std::vector<double> v{2, 4, 4, 4, 5, 5, 7, 9};
  EXPECT_DOUBLE_EQ(num::mean(v), 5.0);
  EXPECT_DOUBLE_EQ(num::population_stddev(v), 2.0);
}

TEST(Statistics, PearsonAgainstOracle) {
  const std::vector<double> x{1, 2, 3, 4, 5.5}, y{2, 1, 4, 3, 7};
  EXPECT_NEAR(num::pearson(x, y), somit::testing::oracle::pearson(x, y), 1e-14);
  EXPECT_NEAR(num::pearson(x, x), 1.0, 1e-15);
  EXPECT_THROW(num::pearson(x, std::vector<double>{1, 1, 1, 1, 1}), somit::NumericError);
}
