#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "somit/model.hpp"
#include "somit/numerics.hpp"

// Objective weights from median-anchored dispersion of the max-min
// normalized matrix, and multiplicative synthesis with subjective weights.
namespace somit::weighting {

struct NormalizedMatrix {
  numerics::DenseMatrix values;   // F_ij in [0, 1]
  std::vector<double> medians;    // per column
  std::vector<bool> degenerate;   // constant columns, mapped to all zeros
};

// (f - min) / (max - min) per column. Direction is ignored.
NormalizedMatrix max_min_normalize(const DecisionProblem& p);

// Mean absolute deviation of each column from its median.
std::vector<double> aadm(const NormalizedMatrix& nm);

// Throws NumericError when every column is degenerate.
WeightVector objective_weights(const DecisionProblem& p);

// w_j = ws_j * wo_j / sum_k ws_k * wo_k. `wo` may use a different label order.
WeightVector combine(const WeightVector& ws, const WeightVector& wo);

// Criteria with positive subjective weight whose objective weight is zero;
// combine() silently drops them to zero.
std::vector<std::string> erased_preferences(const WeightVector& ws, const WeightVector& wo);

// Intermediate block as CSV: normalized rows, median row, absolute
// deviation rows and the AADM row.
void write_dispersion_csv(const DecisionProblem& p, std::ostream& out);

}  // namespace somit::weighting
