#pragma once

// Second implementations used to cross-check the library. They share no code
// with it beyond plain data types.

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace somit::testing::oracle {

struct Pair {
  std::size_t i;
  std::size_t j;
  double a;  // w_i ~ a * w_j
};

// Minimizes sum (a w_j - w_i)^2 over the hyperplane sum w = 1 by
// parametrizing w = 1/n + N y with N spanning {x : sum x = 0}.
inline Eigen::VectorXd constrained_least_squares(std::size_t n, const std::vector<Pair>& pairs) {
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(pairs.size()), static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    r(k, pairs[k].j) += pairs[k].a;
    r(k, pairs[k].i) -= 1.0;
  }
  const auto nn = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(nn, nn - 1);
  for (Eigen::Index c = 0; c < nn - 1; ++c) {
    basis(c, c) = 1.0;
    basis(nn - 1, c) = -1.0;
  }
  const Eigen::VectorXd w0 = Eigen::VectorXd::Constant(nn, 1.0 / static_cast<double>(n));
  const Eigen::VectorXd y = (r * basis).colPivHouseholderQr().solve(-r * w0);
  return w0 + basis * y;
}

inline double objective(const std::vector<Pair>& pairs, const Eigen::VectorXd& w) {
  double z = 0.0;
  for (const auto& p : pairs) z += std::pow(p.a * w(p.j) - w(p.i), 2);
  return z;
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size();
  return m % 2 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

// Rows are alternatives.
inline std::vector<double> median_dispersion_weights(const std::vector<std::vector<double>>& x) {
  const std::size_t m = x.size(), n = x.front().size();
  std::vector<double> r(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double lo = x[0][j], hi = x[0][j];
    for (const auto& row : x) lo = std::min(lo, row[j]), hi = std::max(hi, row[j]);
    if (hi == lo) continue;
    std::vector<double> col;
    for (const auto& row : x) col.push_back((row[j] - lo) / (hi - lo));
    const double med = median(col);
    for (const double v : col) r[j] += std::abs(v - med) / static_cast<double>(m);
  }
  double total = 0.0;
  for (const double v : r) total += v;
  for (double& v : r) v /= total;
  return r;
}

struct TopsisOut {
  std::vector<double> s_plus, s_minus, score;
};

inline TopsisOut topsis(const std::vector<std::vector<double>>& x, const std::vector<double>& w,
                        const std::vector<bool>& benefit) {
  const std::size_t m = x.size(), n = w.size();
  std::vector<std::vector<double>> v(m, std::vector<double>(n));
  for (std::size_t j = 0; j < n; ++j) {
    double norm = 0.0;
    for (std::size_t i = 0; i < m; ++i) norm += x[i][j] * x[i][j];
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < m; ++i) v[i][j] = w[j] * x[i][j] / norm;
  }
  TopsisOut out;
  for (std::size_t i = 0; i < m; ++i) {
    double dp = 0.0, dn = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double best = v[0][j], worst = v[0][j];
      for (std::size_t k = 0; k < m; ++k) {
        best = benefit[j] ? std::max(best, v[k][j]) : std::min(best, v[k][j]);
        worst = benefit[j] ? std::min(worst, v[k][j]) : std::max(worst, v[k][j]);
      }
      dp += std::pow(v[i][j] - best, 2);
      dn += std::pow(v[i][j] - worst, 2);
    }
    out.s_plus.push_back(std::sqrt(dp));
    out.s_minus.push_back(std::sqrt(dn));
    out.score.push_back(out.s_minus.back() / (out.s_plus.back() + out.s_minus.back()));
  }
  return out;
}

// Principal eigenpair through a general eigen-decomposition.
inline std::pair<Eigen::VectorXd, double> principal_eigen(const Eigen::MatrixXd& a) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(a);
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < a.rows(); ++k) {
    if (es.eigenvalues()(k).real() > es.eigenvalues()(best).real()) best = k;
  }
  Eigen::VectorXd v = es.eigenvectors().col(best).real();
  v /= v.sum();
  return {v, es.eigenvalues()(best).real()};
}

inline std::vector<double> critic(const std::vector<std::vector<double>>& x, const std::vector<bool>& benefit) {
  const std::size_t m = x.size(), n = benefit.size();
  Eigen::MatrixXd z(m, n);
  for (std::size_t j = 0; j < n; ++j) {
    double lo = x[0][j], hi = x[0][j];
    for (const auto& row : x) lo = std::min(lo, row[j]), hi = std::max(hi, row[j]);
    for (std::size_t i = 0; i < m; ++i) {
      z(i, j) = benefit[j] ? (x[i][j] - lo) / (hi - lo) : (hi - x[i][j]) / (hi - lo);
    }
  }
  const Eigen::MatrixXd centered = z.rowwise() - z.colwise().mean();
  const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(m);
  const Eigen::VectorXd sd = cov.diagonal().cwiseSqrt();
  std::vector<double> c(n);
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double conflict = 0.0;
    for (std::size_t k = 0; k < n; ++k) conflict += 1.0 - cov(j, k) / (sd(j) * sd(k));
    c[j] = sd(j) * conflict;
    total += c[j];
  }
  for (double& v : c) v /= total;
  return c;
}

inline double aafd(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += std::abs(a[j] - b[j]) / std::abs((a[j] + b[j]) / 2.0);
  return s / static_cast<double>(a.size());
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const Eigen::Map<const Eigen::VectorXd> x(a.data(), static_cast<Eigen::Index>(a.size()));
  const Eigen::Map<const Eigen::VectorXd> y(b.data(), static_cast<Eigen::Index>(b.size()));
  const Eigen::VectorXd dx = x.array() - x.mean();
  const Eigen::VectorXd dy = y.array() - y.mean();
  return dx.dot(dy) / std::sqrt(dx.squaredNorm() * dy.squaredNorm());
}

}  // namespace somit::testing::oracle
