#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "somit/error.hpp"
#include "somit/numerics.hpp"

namespace somit {

enum class Direction { Benefit, Cost };

std::string_view to_string(Direction d);
Direction parse_direction(std::string_view text);
inline Direction flipped(Direction d) {
  return d == Direction::Benefit ? Direction::Cost : Direction::Benefit;
}

struct CriterionSpec {
  std::string code;
  std::string name;
  std::string unit;
  Direction direction = Direction::Benefit;
  std::optional<std::string> group;

  friend bool operator==(const CriterionSpec&, const CriterionSpec&) = default;
};

// Alternatives x criteria performance table. Plain data: construct freely,
// then run validate_problem (loaders and algorithms do this for you).
struct DecisionProblem {
  std::vector<CriterionSpec> criteria;
  std::vector<std::string> alternatives;
  std::vector<std::vector<double>> matrix;  // m rows of n values

  std::size_t num_alternatives() const { return alternatives.size(); }
  std::size_t num_criteria() const { return criteria.size(); }
  double at(std::size_t alt, std::size_t crit) const { return matrix[alt][crit]; }
  std::vector<double> column(std::size_t crit) const;
  std::vector<std::string> codes() const;
  std::vector<Direction> directions() const;
  std::optional<std::size_t> criterion_index(std::string_view code) const;
  std::optional<std::size_t> alternative_index(std::string_view label) const;
  numerics::DenseMatrix dense() const;

  friend bool operator==(const DecisionProblem&, const DecisionProblem&) = default;
};

enum class Severity { Warning, Error };

struct Issue {
  Severity severity = Severity::Error;
  std::string code;  // stable machine tag, e.g. "duplicate_code"
  std::string message;
};

struct ValidationReport {
  std::vector<Issue> issues;

  bool ok() const;  // no Error-severity issues
  std::vector<Issue> errors() const;
  std::vector<Issue> warnings() const;
  bool has(std::string_view code) const;
  std::string summary() const;  // errors joined with "; "
  void error(std::string code, std::string message);
  void warn(std::string code, std::string message);
};

ValidationReport validate_problem(const DecisionProblem& p);
void require_valid(const DecisionProblem& p);

// ---- comparison scale -----------------------------------------------------

inline constexpr double kScaleMin = 1.0 / 9.0;
inline constexpr double kScaleMax = 9.0;

class ScaleError : public ValidationError {
 public:
  enum class Kind { Malformed, OutOfRange };
  ScaleError(Kind kind, const std::string& what) : ValidationError(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// A 1-9 scale judgement. The token is the text the value was parsed from
// and is what gets written back to session files.
struct ScaleValue {
  double value = 1.0;
  std::string token = "1";

  static ScaleValue of(double v);  // range-checked; token = shortest repr

  friend bool operator==(const ScaleValue& a, const ScaleValue& b) { return a.value == b.value; }
};

// Accepts decimal literals ("3.5") and fractions of positive integers
// ("1/3"). Fractions are range-checked in exact integer arithmetic and then
// divided once.
ScaleValue parse_scale(std::string_view token);

// ---- comparison sessions ----------------------------------------------------

struct ExtremeComparison {
  std::string high;
  std::string low;
  ScaleValue value;
};

struct ComparisonSession {
  std::vector<std::string> items;
  std::size_t median_index = 0;
  std::map<std::string, ScaleValue> comparisons;  // a_id for every item != median
  std::optional<ExtremeComparison> extreme;       // a_hl

  const std::string& median() const { return items.at(median_index); }
  std::optional<std::size_t> index_of(std::string_view item) const;
  // Number of judgements the decision-maker supplied.
  std::size_t question_count() const { return comparisons.size() + (extreme ? 1 : 0); }
};

struct ExtremePair {
  std::string high;
  std::string low;
  friend bool operator==(const ExtremePair&, const ExtremePair&) = default;
};

// Highest and lowest rated items among the relative comparisons. Ties pick
// the first item in session order; if every value ties, the low end falls
// to the last non-median item so the pair stays distinct. Empty when the
// session has fewer than three items or comparisons are still missing.
std::optional<ExtremePair> extreme_pair(const ComparisonSession& s);

// Number of judgements SOMIT needs for n items (n for n >= 3, 1 for n = 2).
std::size_t required_questions(std::size_t n);

ValidationReport validate_session(const ComparisonSession& s);

// ---- hierarchy ----------------------------------------------------------

struct GroupSpec {
  std::string label;
  std::vector<std::string> members;        // criterion codes
  std::optional<ComparisonSession> session;  // absent: even split
};

struct HierarchySpec {
  std::optional<ComparisonSession> group_session;  // required with 2+ groups
  std::vector<GroupSpec> groups;
};

// Checks sessions and that members partition `codes` exactly.
ValidationReport validate_hierarchy(const HierarchySpec& h, std::span<const std::string> codes);

// ---- weights --------------------------------------------------------------

enum class Provenance { Subjective, Objective, Final, AHP, CRITIC };

std::string_view to_string(Provenance p);
Provenance parse_provenance(std::string_view text);

inline constexpr double kWeightSumTolerance = 1e-9;

class WeightVector {
 public:
  WeightVector() = default;
  // Throws ValidationError unless weights are finite, nonnegative, sum to 1
  // within kWeightSumTolerance and labels are unique and aligned.
  WeightVector(std::vector<std::string> labels, std::vector<double> weights, Provenance provenance);

  // Divides by the sum first; throws NumericError when the sum is not positive.
  static WeightVector normalized(std::vector<std::string> labels, std::vector<double> raw,
                                 Provenance provenance);

  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<double>& weights() const { return weights_; }
  Provenance provenance() const { return provenance_; }
  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  double weight_of(std::string_view label) const;

  // Same weights under a different label order.
  WeightVector reordered(std::span<const std::string> order) const;

 private:
  std::vector<std::string> labels_;
  std::vector<double> weights_;
  Provenance provenance_ = Provenance::Subjective;
};

// Throws ValidationError naming the differing labels.
void require_aligned(std::span<const std::string> expected, std::span<const std::string> actual,
                     std::string_view what);

}  // namespace somit
