#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "somit/model.hpp"
#include "somit/numerics.hpp"

// Reference weighting methods: AHP (principal eigenvector of a full
// reciprocal matrix) and CRITIC (contrast intensity x conflict).
namespace somit::baselines {

inline constexpr double kReciprocityTolerance = 1e-9;

class PairwiseMatrix {
 public:
  // Throws ValidationError unless a_ii = 1, a_ji = 1/a_ij within
  // kReciprocityTolerance and every entry lies in [1/9, 9].
  PairwiseMatrix(std::vector<std::string> labels, numerics::DenseMatrix entries);

  // Builds the full matrix from the upper triangle.
  static PairwiseMatrix from_upper(std::vector<std::string> labels,
                                   const std::vector<std::vector<double>>& upper);

  const std::vector<std::string>& labels() const { return labels_; }
  const numerics::DenseMatrix& entries() const { return entries_; }
  std::size_t size() const { return labels_.size(); }

  // Same judgements under a relabelled/permuted order.
  PairwiseMatrix permuted(std::span<const std::size_t> perm) const;

 private:
  std::vector<std::string> labels_;
  numerics::DenseMatrix entries_;
};

// Judgements a full AHP matrix needs: n(n-1)/2.
std::size_t ahp_question_count(std::size_t n);

WeightVector ahp_weights(const PairwiseMatrix& m);
double lambda_max(const PairwiseMatrix& m);

// Saaty random index for 3 <= n <= 10.
double random_index(std::size_t n);
double consistency_ratio(const PairwiseMatrix& m);

struct AhpGroup {
  std::string label;
  std::vector<std::string> members;
  std::optional<PairwiseMatrix> matrix;  // absent: even split
};

struct AhpHierarchy {
  std::optional<PairwiseMatrix> groups;  // required with 2+ groups
  std::vector<AhpGroup> members;
};

// Group weight x within-group share, same composition as the SOMIT hierarchy.
WeightVector ahp_hierarchy_weights(const AhpHierarchy& h, std::span<const std::string> order = {});

struct CriticDetail {
  numerics::DenseMatrix normalized;  // direction-aware max-min
  std::vector<double> sigma;         // population standard deviation
  numerics::DenseMatrix correlation;
  std::vector<double> information;   // C_j
};

CriticDetail critic_detail(const DecisionProblem& p);
WeightVector critic_weights(const DecisionProblem& p);

}  // namespace somit::baselines
