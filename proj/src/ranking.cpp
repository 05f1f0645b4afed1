#include "somit/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

namespace somit::ranking {

std::vector<std::string> RankingResult::ordered_labels() const {
  std::vector<std::string> out;
  out.reserve(order.size());
  for (auto i : order) out.push_back(alternatives[i]);
  return out;
}

numerics::DenseMatrix vector_normalize(const DecisionProblem& p) {
  require_valid(p);
  const std::size_t m = p.num_alternatives();
  const std::size_t n = p.num_criteria();
  numerics::DenseMatrix out(m, n);
  for (std::size_t j = 0; j < n; ++j) {
    double ss = 0.0;
    for (std::size_t i = 0; i < m; ++i) ss += p.at(i, j) * p.at(i, j);
    if (ss == 0.0) {
      throw ValidationError(fmt::format("criterion '{}' is all zeros; vector normalization undefined",
                                        p.criteria[j].code));
    }
    const double norm = std::sqrt(ss);
    for (std::size_t i = 0; i < m; ++i) out(i, j) = p.at(i, j) / norm;
  }
  return out;
}

numerics::DenseMatrix weighted_matrix(const numerics::DenseMatrix& normalized, const WeightVector& w,
                                      std::span<const std::string> codes) {
  if (codes.size() != normalized.cols()) {
    throw ValidationError("weighted_matrix: column labels do not match the matrix");
  }
  const WeightVector aligned = w.reordered(codes);
  numerics::DenseMatrix out = normalized;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) *= aligned[j];
  }
  return out;
}

IdealSolutions ideal_solutions(const numerics::DenseMatrix& weighted,
                               std::span<const Direction> directions) {
  if (directions.size() != weighted.cols()) {
    throw ValidationError("ideal_solutions: one direction per column required");
  }
  IdealSolutions out;
  for (std::size_t j = 0; j < weighted.cols(); ++j) {
    const auto col = weighted.column(j);
    const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
    const bool benefit = directions[j] == Direction::Benefit;
    out.pis.push_back(benefit ? *hi : *lo);
    out.nis.push_back(benefit ? *lo : *hi);
  }
  return out;
}

std::vector<std::size_t> order_by_score(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

RankingResult topsis(const DecisionProblem& p, const WeightVector& w, TopsisOptions options) {
  const auto codes = p.codes();
  const auto normalized = vector_normalize(p);

  numerics::DenseMatrix v;
  if (options.round_weights) {
    const WeightVector aligned = w.reordered(codes);
    v = normalized;
    for (std::size_t j = 0; j < v.cols(); ++j) {
      const double wj = std::round(aligned[j] * 1e4) / 1e4;
      for (std::size_t i = 0; i < v.rows(); ++i) v(i, j) *= wj;
    }
  } else {
    v = weighted_matrix(normalized, w, codes);
  }

  const auto dirs = p.directions();
  auto ideal = ideal_solutions(v, dirs);

  RankingResult r;
  r.alternatives = p.alternatives;
  for (std::size_t i = 0; i < v.rows(); ++i) {
    double dp = 0.0, dm = 0.0;
    for (std::size_t j = 0; j < v.cols(); ++j) {
      dp += (v(i, j) - ideal.pis[j]) * (v(i, j) - ideal.pis[j]);
      dm += (v(i, j) - ideal.nis[j]) * (v(i, j) - ideal.nis[j]);
    }
    dp = std::sqrt(dp);
    dm = std::sqrt(dm);
    if (dp + dm == 0.0) {
      throw NumericError(fmt::format("indistinguishable alternatives: '{}' coincides with both ideals",
                                     p.alternatives[i]));
    }
    r.s_plus.push_back(dp);
    r.s_minus.push_back(dm);
    r.scores.push_back(dm / (dp + dm));
  }
  r.order = order_by_score(r.scores);
  r.pis = std::move(ideal.pis);
  r.nis = std::move(ideal.nis);
  return r;
}

std::unique_ptr<Ranker> make_ranker(std::string_view name, TopsisOptions options) {
  if (name == "topsis") return std::make_unique<TopsisRanker>(options);
  throw ValidationError(fmt::format("unknown ranker '{}' (available: topsis)", name));
}

}  // namespace somit::ranking
