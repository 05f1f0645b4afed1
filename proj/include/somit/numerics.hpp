#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace somit::numerics {

// Row-major dense matrix with finite entries.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::vector<double> column(std::size_t c) const;
  const std::vector<double>& data() const { return data_; }

  std::vector<double> multiply(std::span<const double> x) const;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Gaussian elimination with partial pivoting. Throws NumericError when a
// pivot falls below 1e-12 times the largest initial entry magnitude.
std::vector<double> solve_linear(const DenseMatrix& a, std::span<const double> b);

struct EigenResult {
  std::vector<double> vector;  // sums to 1
  double lambda_max = 0.0;
  int iterations = 0;
};

inline constexpr int kMaxPowerIterations = 100000;
inline constexpr double kPowerTolerance = 1e-12;

// Perron vector of a strictly positive square matrix by power iteration
// from the uniform start.
EigenResult principal_eigenvector(const DenseMatrix& a);

// Middle order statistic; mean of the middle two for even lengths.
double median(std::span<const double> values);

double mean(std::span<const double> values);

// Population standard deviation (divides by n).
double population_stddev(std::span<const double> values);

double pearson(std::span<const double> x, std::span<const double> y);

double inf_norm(std::span<const double> v);

}  // namespace somit::numerics
