#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "somit/model.hpp"

namespace somit::sensitivity {

struct CellReplace {
  std::string alternative;
  std::string criterion;
  double value = 0.0;
};

// f -> a*f + b, a != 0. A negative slope flips the criterion direction.
struct AffineColumn {
  std::string criterion;
  double a = 1.0;
  double b = 0.0;
};

// f -> 1/f; optionally flips the direction (cost "per unit" becomes benefit).
struct ReciprocalColumn {
  std::string criterion;
  bool flip_direction = true;
};

// f -> c - f, always flipping the direction.
struct ComplementColumn {
  std::string criterion;
  double c = 0.0;
};

using Edit = std::variant<CellReplace, AffineColumn, ReciprocalColumn, ComplementColumn>;

struct PerturbationScenario {
  std::vector<Edit> edits;
};

// Edits apply in order. Throws ValidationError for unknown labels, a zero
// affine slope or a reciprocal of zero.
DecisionProblem apply_scenario(const DecisionProblem& p, const PerturbationScenario& s);

// Average absolute fractional deviation between two aligned weight vectors,
// as a fraction. Terms where both weights are exactly zero count as zero.
double aafd_w(const WeightVector& original, const WeightVector& modified);

double max_abs_change(const WeightVector& original, const WeightVector& modified);

struct WeightingMethod {
  std::string name;
  std::function<WeightVector(const DecisionProblem&)> weigh;
};

WeightingMethod somit_objective_method();
WeightingMethod critic_method();
// "somit-ii" or "critic"; throws ValidationError otherwise.
WeightingMethod method_by_name(std::string_view name);

struct MethodReport {
  std::string method;
  WeightVector original;
  WeightVector perturbed;
  double aafd = 0.0;
  double max_abs_change = 0.0;
};

struct RobustnessReport {
  std::vector<MethodReport> methods;
};

RobustnessReport robustness_report(const DecisionProblem& p, const PerturbationScenario& s,
                                   const std::vector<WeightingMethod>& methods);

}  // namespace somit::sensitivity
