#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "somit/model.hpp"
#include "somit/numerics.hpp"

namespace somit::ranking {

struct RankingResult {
  std::vector<std::string> alternatives;
  std::vector<double> s_plus;   // distance to the positive ideal
  std::vector<double> s_minus;  // distance to the negative ideal
  std::vector<double> scores;   // s_minus / (s_minus + s_plus)
  std::vector<std::size_t> order;  // best first, ties by input order
  std::vector<double> pis;
  std::vector<double> nis;

  std::vector<std::string> ordered_labels() const;
};

// f_ij / ||column j||_2. Throws ValidationError on an all-zero column.
numerics::DenseMatrix vector_normalize(const DecisionProblem& p);

// v_ij = F_ij * w_j; w must carry exactly `codes` (any order).
numerics::DenseMatrix weighted_matrix(const numerics::DenseMatrix& normalized, const WeightVector& w,
                                      std::span<const std::string> codes);

struct IdealSolutions {
  std::vector<double> pis;
  std::vector<double> nis;
};

IdealSolutions ideal_solutions(const numerics::DenseMatrix& weighted,
                               std::span<const Direction> directions);

struct TopsisOptions {
  // Round weights to 4 decimals before use.
  bool round_weights = false;
};

RankingResult topsis(const DecisionProblem& p, const WeightVector& w, TopsisOptions options = {});

// Descending-score permutation; equal scores keep input order.
std::vector<std::size_t> order_by_score(std::span<const double> scores);

// Anything mapping (problem, weights) to per-alternative scores.
class Ranker {
 public:
  virtual ~Ranker() = default;
  virtual std::string name() const = 0;
  virtual RankingResult rank(const DecisionProblem& p, const WeightVector& w) const = 0;
};

class TopsisRanker final : public Ranker {
 public:
  explicit TopsisRanker(TopsisOptions options = {}) : options_(options) {}
  std::string name() const override { return "topsis"; }
  RankingResult rank(const DecisionProblem& p, const WeightVector& w) const override {
    return topsis(p, w, options_);
  }

 private:
  TopsisOptions options_;
};

// Throws ValidationError for unknown names.
std::unique_ptr<Ranker> make_ranker(std::string_view name, TopsisOptions options = {});

}  // namespace somit::ranking
