#include "somit/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <fmt/format.h>

#include "somit/error.hpp"

namespace somit::numerics {

namespace {

void require_finite(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) throw ValidationError("matrix entry is not finite");
  }
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  require_finite(data_);
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw ValidationError(fmt::format("matrix expects {}x{} = {} entries, got {}", rows_, cols_,
                                      rows_ * cols_, data_.size()));
  }
  require_finite(data_);
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.front().size();
  std::vector<double> flat;
  flat.reserve(r * c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) {
      throw ValidationError(
          fmt::format("row {} has {} entries, expected {}", i, rows[i].size(), c));
    }
    flat.insert(flat.end(), rows[i].begin(), rows[i].end());
  }
  return DenseMatrix(r, c, std::move(flat));
}

std::vector<double> DenseMatrix::column(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

std::vector<double> DenseMatrix::multiply(std::span<const double> x) const {
  if (x.size() != cols_) throw ValidationError("matrix-vector dimension mismatch");
  std::vector<double> y(rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    const auto rr = row(r);
    y[r] = std::inner_product(rr.begin(), rr.end(), x.begin(), 0.0);
  }
  return y;
}

std::vector<double> solve_linear(const DenseMatrix& a, std::span<const double> b) {
  if (!a.square()) throw ValidationError("solve_linear requires a square matrix");
  const std::size_t n = a.rows();
  if (b.size() != n) throw ValidationError("solve_linear: right-hand side has wrong length");
  if (n == 0) return {};

  DenseMatrix m = a;
  std::vector<double> rhs(b.begin(), b.end());

  double scale = 0.0;
  for (double v : a.data()) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) throw NumericError("singular matrix: all entries are zero");
  const double pivot_floor = 1e-12 * scale;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t r = k + 1; r < n; ++r) {
      if (std::abs(m(r, k)) > std::abs(m(p, k))) p = r;
    }
    if (std::abs(m(p, k)) < pivot_floor) {
      throw NumericError(fmt::format("singular matrix: pivot {} below tolerance in column {}",
                                     m(p, k), k));
    }
    if (p != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(m(k, c), m(p, c));
      std::swap(rhs[k], rhs[p]);
    }
    for (std::size_t r = k + 1; r < n; ++r) {
      const double f = m(r, k) / m(k, k);
      if (f == 0.0) continue;
      m(r, k) = 0.0;
      for (std::size_t c = k + 1; c < n; ++c) m(r, c) -= f * m(k, c);
      rhs[r] -= f * rhs[k];
    }
  }

  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = rhs[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= m(i, c) * x[c];
    x[i] = s / m(i, i);
  }
  return x;
}

EigenResult principal_eigenvector(const DenseMatrix& a) {
  if (!a.square() || a.rows() == 0) {
    throw ValidationError("principal_eigenvector requires a non-empty square matrix");
  }
  for (double v : a.data()) {
    if (!(v > 0.0)) throw ValidationError("principal_eigenvector requires positive entries");
  }
  const std::size_t n = a.rows();
  std::vector<double> x(n, 1.0 / static_cast<double>(n));

  for (int it = 1; it <= kMaxPowerIterations; ++it) {
    std::vector<double> y = a.multiply(x);
    const double sum = std::accumulate(y.begin(), y.end(), 0.0);
    for (double& v : y) v /= sum;

    double diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) diff = std::max(diff, std::abs(y[i] - x[i]));
    x = std::move(y);
    if (diff < kPowerTolerance) {
      const std::vector<double> ax = a.multiply(x);
      const double num = std::inner_product(x.begin(), x.end(), ax.begin(), 0.0);
      const double den = std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
      return {std::move(x), num / den, it};
    }
  }
  throw NumericError(
      fmt::format("power iteration did not converge within {} iterations", kMaxPowerIterations));
}

double median(std::span<const double> values) {
  if (values.empty()) throw ValidationError("median of an empty sequence");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mean(std::span<const double> values) {
  if (values.empty()) throw ValidationError("mean of an empty sequence");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double population_stddev(std::span<const double> values) {
  const double mu = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - mu) * (v - mu);
  return std::sqrt(ss / static_cast<double>(values.size()));
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("pearson: length mismatch");
  if (x.size() < 2) throw ValidationError("pearson: need at least two observations");
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw NumericError("pearson: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace somit::numerics
