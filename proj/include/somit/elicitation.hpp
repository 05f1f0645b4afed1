#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "somit/model.hpp"
#include "somit/numerics.hpp"

// Subjective weights from median-anchored comparisons: least-squares fit of
// w_i ~ a_ij * w_j over the answered pairs, constrained to sum(w) = 1, solved
// through its Lagrangian stationarity conditions.
namespace somit::elicitation {

// One answered comparison a_ij between item indices i and j.
struct Judgement {
  std::size_t i = 0;
  std::size_t j = 0;
  double value = 1.0;
};

// Relative comparisons (i, median) in item order followed by the extreme
// pair (h, l) when present. Requires every relative comparison.
std::vector<Judgement> judgements(const ComparisonSession& s);

struct KktSystem {
  numerics::DenseMatrix matrix;  // (n+1) x (n+1), unknowns (w_1..w_n, alpha)
  std::vector<double> rhs;
};

KktSystem build_kkt(std::size_t n, std::span<const Judgement> pairs);
// Validates the session first (throws ValidationError).
KktSystem build_kkt(const ComparisonSession& s);

// z = sum over pairs of (a_ij w_j - w_i)^2.
double objective_value(std::span<const Judgement> pairs, std::span<const double> w);

struct SubjectiveSolution {
  WeightVector weights;  // Provenance::Subjective
  double z = 0.0;
  double alpha = 0.0;  // Lagrange multiplier, diagnostic only
};

// Raised when the equality-constrained optimum leaves [0, 1].
class InconsistentComparisons : public NumericError {
 public:
  InconsistentComparisons(const std::string& what, std::vector<std::string> items,
                          std::vector<double> weights)
      : NumericError(what), items_(std::move(items)), weights_(std::move(weights)) {}
  const std::vector<std::string>& items() const { return items_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<std::string> items_;
  std::vector<double> weights_;
};

inline constexpr double kBoundSlack = 1e-9;

// Solves for an arbitrary set of pairs over `labels`. Used directly for
// what-if overrides where the extreme pair may no longer be the argmax/argmin.
SubjectiveSolution solve_judgements(std::vector<std::string> labels,
                                    std::span<const Judgement> pairs);

SubjectiveSolution solve_subjective(const ComparisonSession& s);

// w_j = group weight x within-group share. `shares` maps each group label to
// weights over that group's members. Output follows `order` when given,
// otherwise group order then member order.
WeightVector compose(const WeightVector& group_weights,
                     const std::map<std::string, WeightVector>& shares,
                     std::span<const std::string> order, Provenance provenance);

// Shares for a group without a session: an even split.
WeightVector even_split(const std::vector<std::string>& members, Provenance provenance);

WeightVector compose_hierarchy(const HierarchySpec& h, std::span<const std::string> order = {});

}  // namespace somit::elicitation
