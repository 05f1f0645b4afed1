#include "somit/sensitivity.hpp"

#include <cmath>

#include <fmt/format.h>

#include "somit/baselines.hpp"
#include "somit/weighting.hpp"

namespace somit::sensitivity {

namespace {

std::size_t criterion_or_throw(const DecisionProblem& p, const std::string& code) {
  const auto j = p.criterion_index(code);
  if (!j) throw ValidationError(fmt::format("scenario references unknown criterion '{}'", code));
  return *j;
}

template <typename F>
void map_column(DecisionProblem& p, std::size_t j, F&& f) {
  for (auto& row : p.matrix) row[j] = f(row[j]);
}

struct Applier {
  DecisionProblem& p;

  void operator()(const CellReplace& e) const {
    const auto i = p.alternative_index(e.alternative);
    if (!i) throw ValidationError(fmt::format("scenario references unknown alternative '{}'", e.alternative));
    const auto j = criterion_or_throw(p, e.criterion);
    if (!std::isfinite(e.value)) throw ValidationError("cell replacement value must be finite");
    p.matrix[*i][j] = e.value;
  }

  void operator()(const AffineColumn& e) const {
    const auto j = criterion_or_throw(p, e.criterion);
    if (e.a == 0.0 || !std::isfinite(e.a) || !std::isfinite(e.b)) {
      throw ValidationError(fmt::format("affine edit on '{}' needs a finite nonzero slope", e.criterion));
    }
    map_column(p, j, [&](double f) { return e.a * f + e.b; });
    if (e.a < 0.0) p.criteria[j].direction = flipped(p.criteria[j].direction);
  }

  void operator()(const ReciprocalColumn& e) const {
    const auto j = criterion_or_throw(p, e.criterion);
    for (std::size_t i = 0; i < p.matrix.size(); ++i) {
      if (p.matrix[i][j] == 0.0) {
        throw ValidationError(fmt::format("reciprocal edit on '{}': value of '{}' is zero", e.criterion,
                                          p.alternatives[i]));
      }
    }
    map_column(p, j, [](double f) { return 1.0 / f; });
    if (e.flip_direction) p.criteria[j].direction = flipped(p.criteria[j].direction);
  }

  void operator()(const ComplementColumn& e) const {
    const auto j = criterion_or_throw(p, e.criterion);
    if (!std::isfinite(e.c)) throw ValidationError("complement constant must be finite");
    map_column(p, j, [&](double f) { return e.c - f; });
    p.criteria[j].direction = flipped(p.criteria[j].direction);
  }
};

}  // namespace

DecisionProblem apply_scenario(const DecisionProblem& p, const PerturbationScenario& s) {
  DecisionProblem out = p;
  for (const auto& edit : s.edits) std::visit(Applier{out}, edit);
  return out;
}

double aafd_w(const WeightVector& original, const WeightVector& modified) {
  const WeightVector m = modified.reordered(original.labels());
  double total = 0.0;
  for (std::size_t j = 0; j < original.size(); ++j) {
    const double wo = original[j];
    const double wm = m[j];
    if (wo == 0.0 && wm == 0.0) continue;
    const double mid = std::abs((wo + wm) / 2.0);
    if (mid == 0.0) {
      throw NumericError(fmt::format("AAFD undefined for '{}': weights cancel", original.labels()[j]));
    }
    total += std::abs(wo - wm) / mid;
  }
  return total / static_cast<double>(original.size());
}

double max_abs_change(const WeightVector& original, const WeightVector& modified) {
  const WeightVector m = modified.reordered(original.labels());
  double out = 0.0;
  for (std::size_t j = 0; j < original.size(); ++j) out = std::max(out, std::abs(original[j] - m[j]));
  return out;
}

WeightingMethod somit_objective_method() {
  return {"somit-ii", [](const DecisionProblem& p) { return weighting::objective_weights(p); }};
}

WeightingMethod critic_method() {
  return {"critic", [](const DecisionProblem& p) { return baselines::critic_weights(p); }};
}

WeightingMethod method_by_name(std::string_view name) {
  if (name == "somit-ii" || name == "somit") return somit_objective_method();
  if (name == "critic") return critic_method();
  throw ValidationError(fmt::format("unknown weighting method '{}' (available: somit-ii, critic)", name));
}

RobustnessReport robustness_report(const DecisionProblem& p, const PerturbationScenario& s,
                                   const std::vector<WeightingMethod>& methods) {
  const DecisionProblem modified = apply_scenario(p, s);
  RobustnessReport report;
  for (const auto& method : methods) {
    MethodReport r;
    r.method = method.name;
    r.original = method.weigh(p);
    r.perturbed = method.weigh(modified);
    r.aafd = aafd_w(r.original, r.perturbed);
    r.max_abs_change = max_abs_change(r.original, r.perturbed);
    report.methods.push_back(std::move(r));
  }
  return report;
}

}  // namespace somit::sensitivity
