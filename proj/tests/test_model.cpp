#include <gtest/gtest.h>

#include "support.hpp"
#include "somit/model.hpp"

using namespace somit;
namespace st = somit::testing;

namespace {

DecisionProblem tiny() {
  DecisionProblem p;
  p.criteria = {{"C1", "cost", "", Direction::Cost, std::nullopt}, {"C2", "gain", "", Direction::Benefit, std::nullopt}};
  p.alternatives = {"A", "B"};
  p.matrix = {{1, 2}, {3, 4}};
  return p;
}

ComparisonSession four_items() {
  ComparisonSession s;
  s.items = {"a", "b", "c", "d"};
  s.median_index = 2;
  s.comparisons = {{"a", parse_scale("4")}, {"b", parse_scale("3")}, {"d", parse_scale("1/2")}};
  s.extreme = ExtremeComparison{"a", "d", parse_scale("2")};
  return s;
}

}  // namespace

TEST(Direction, ParsesAliases) {
  EXPECT_EQ(parse_direction("benefit"), Direction::Benefit);
  EXPECT_EQ(parse_direction("max"), Direction::Benefit);
  EXPECT_EQ(parse_direction("min"), Direction::Cost);
  EXPECT_THROW(parse_direction("up"), ValidationError);
  EXPECT_EQ(flipped(Direction::Cost), Direction::Benefit);
}

TEST(ValidateProblem, AcceptsWellFormed) {
  EXPECT_TRUE(validate_problem(tiny()).ok());
  EXPECT_TRUE(validate_problem(st::india()).ok());
}

TEST(ValidateProblem, ReportsEachDefect) {
  auto p = tiny();
  p.alternatives = {"A"};
  p.matrix.pop_back();
  EXPECT_TRUE(validate_problem(p).has("too_few_alternatives"));

  p = tiny();
  p.criteria[1].code = "C1";
  EXPECT_TRUE(validate_problem(p).has("duplicate_code"));

  p = tiny();
  p.alternatives[1] = "A";
  EXPECT_TRUE(validate_problem(p).has("duplicate_alternative"));

  p = tiny();
  p.matrix[1].pop_back();
  EXPECT_TRUE(validate_problem(p).has("column_count"));

  p = tiny();
  p.matrix[0][0] = std::numeric_limits<double>::infinity();
  EXPECT_TRUE(validate_problem(p).has("non_finite"));
  EXPECT_THROW(require_valid(p), ValidationError);
}

TEST(ValidateProblem, ConstantColumnIsOnlyAWarning) {
  auto p = tiny();
  p.matrix = {{1, 2}, {1, 4}};
  const auto r = validate_problem(p);
  EXPECT_TRUE(r.ok());
  EXPECT_TRUE(r.has("zero_dispersion"));
}

TEST(Scale, ParsesTokensAndKeepsText) {
  EXPECT_DOUBLE_EQ(parse_scale("1/2").value, 0.5);
  EXPECT_EQ(parse_scale(" 1/3 ").token, "1/3");
  EXPECT_DOUBLE_EQ(parse_scale("9").value, 9.0);
  EXPECT_DOUBLE_EQ(parse_scale("1/9").value, 1.0 / 9.0);
  EXPECT_DOUBLE_EQ(parse_scale("0.25").value, 0.25);
  EXPECT_DOUBLE_EQ(parse_scale("2/18").value, 1.0 / 9.0);
}

TEST(Scale, RejectsOutOfRangeAndMalformed) {
  for (const char* bad : {"10", "0.05", "1/10", "0", "-2", "19/2"}) {
    try {
      parse_scale(bad);
      ADD_FAILURE() << bad;
    } catch (const ScaleError& e) {
      EXPECT_EQ(e.kind(), ScaleError::Kind::OutOfRange) << bad;
    }
  }
  for (const char* bad : {"", "abc", "1/0", "1/", "/3", "3x", "1.5/2"}) {
    try {
      parse_scale(bad);
      ADD_FAILURE() << bad;
    } catch (const ScaleError& e) {
      EXPECT_EQ(e.kind(), ScaleError::Kind::Malformed) << bad;
    }
  }
}

TEST(ExtremePair, PicksHighestAndLowest) {
  const auto pair = extreme_pair(four_items());
  ASSERT_TRUE(pair);
  EXPECT_EQ(pair->high, "a");
  EXPECT_EQ(pair->low, "d");
}

TEST(ExtremePair, TiesResolveByItemOrder) {
  auto s = four_items();
  s.comparisons = {{"a", parse_scale("3")}, {"b", parse_scale("3")}, {"d", parse_scale("1/2")}};
  EXPECT_EQ(extreme_pair(s)->high, "a");
  s.comparisons = {{"a", parse_scale("1")}, {"b", parse_scale("1")}, {"d", parse_scale("1")}};
  const auto all_equal = extreme_pair(s);
  EXPECT_EQ(all_equal->high, "a");
  EXPECT_EQ(all_equal->low, "d");
}

TEST(ExtremePair, AbsentForTwoItems) {
  ComparisonSession s;
  s.items = {"x", "y"};
  s.median_index = 0;
  s.comparisons = {{"y", parse_scale("2")}};
  EXPECT_FALSE(extreme_pair(s));
}

TEST(ValidateSession, AcceptsCompleteSession) {
  EXPECT_TRUE(validate_session(four_items()).ok());
  EXPECT_EQ(four_items().question_count(), 4u);
}

TEST(ValidateSession, FlagsStructuralProblems) {
  auto s = four_items();
  s.comparisons.erase("b");
  EXPECT_TRUE(validate_session(s).has("missing_comparison"));

  s = four_items();
  s.comparisons["c"] = parse_scale("2");
  EXPECT_TRUE(validate_session(s).has("median_compared"));

  s = four_items();
  s.extreme.reset();
  EXPECT_TRUE(validate_session(s).has("missing_extreme"));

  s = four_items();
  s.extreme = ExtremeComparison{"b", "d", parse_scale("2")};
  EXPECT_TRUE(validate_session(s).has("extreme_mismatch"));

  s = four_items();
  s.median_index = 9;
  EXPECT_TRUE(validate_session(s).has("median_range"));

  s = four_items();
  s.items[1] = "a";
  EXPECT_TRUE(validate_session(s).has("duplicate_item"));
}

TEST(ValidateSession, LopsidedAnswersWarn) {
  auto s = four_items();
  s.comparisons = {{"a", parse_scale("4")}, {"b", parse_scale("3")}, {"d", parse_scale("2")}};
  s.extreme = ExtremeComparison{"a", "d", parse_scale("2")};
  const auto r = validate_session(s);
  EXPECT_TRUE(r.ok());
  EXPECT_TRUE(r.has("half_half"));
}

TEST(RequiredQuestions, LinearInItems) {
  EXPECT_EQ(required_questions(2), 1u);
  for (std::size_t n = 3; n <= 30; ++n) EXPECT_EQ(required_questions(n), n);
}

TEST(WeightVector, EnforcesSimplex) {
  EXPECT_NO_THROW(WeightVector({"a", "b"}, {0.25, 0.75}, Provenance::Final));
  EXPECT_THROW(WeightVector({"a", "b"}, {0.5, 0.6}, Provenance::Final), ValidationError);
  EXPECT_THROW(WeightVector({"a", "b"}, {-0.1, 1.1}, Provenance::Final), ValidationError);
  EXPECT_THROW(WeightVector({"a", "a"}, {0.5, 0.5}, Provenance::Final), ValidationError);
  EXPECT_THROW(WeightVector::normalized({"a"}, {0.0}, Provenance::Final), NumericError);
}

TEST(WeightVector, ReorderKeepsPairs) {
  const WeightVector w({"a", "b", "c"}, {0.2, 0.3, 0.5}, Provenance::Objective);
  const std::vector<std::string> order{"c", "a", "b"};
  const auto r = w.reordered(order);
  EXPECT_EQ(r.labels(), order);
  EXPECT_DOUBLE_EQ(r[0], 0.5);
  EXPECT_DOUBLE_EQ(r.weight_of("b"), 0.3);
  EXPECT_THROW(w.reordered(std::vector<std::string>{"a", "b"}), ValidationError);
}

TEST(ValidateHierarchy, GroupsMustPartitionCriteria) {
  HierarchySpec h;
  h.groups = {{"G1", {"C1"}, std::nullopt}, {"G2", {"C2"}, std::nullopt}};
  const std::vector<std::string> codes{"C1", "C2"};
  EXPECT_FALSE(validate_hierarchy(h, codes).ok());  // two groups need a group session
  ComparisonSession top;
  top.items = {"G1", "G2"};
  top.median_index = 0;
  top.comparisons = {{"G2", parse_scale("2")}};
  h.group_session = top;
  EXPECT_TRUE(validate_hierarchy(h, codes).ok());
  h.groups[1].members = {"C1"};
  EXPECT_FALSE(validate_hierarchy(h, codes).ok());
}
