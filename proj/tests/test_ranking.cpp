#include <gtest/gtest.h>

#include <random>

#include "oracle.hpp"
#include "reference.hpp"
#include "support.hpp"
#include "somit/elicitation.hpp"
#include "somit/ranking.hpp"
#include "somit/weighting.hpp"

using namespace somit;
namespace st = somit::testing;
using namespace somit::ranking;
namespace ref = somit::testing::ref;

namespace {

WeightVector india_final() {
  const auto p = st::india();
  const auto ws = elicitation::compose_hierarchy(io::load_hierarchy(st::data_path("india_hierarchy.json")), p.codes());
  return weighting::combine(ws, weighting::objective_weights(p));
}

std::vector<bool> benefits(const DecisionProblem& p) {
  std::vector<bool> out;
  for (const auto& c : p.criteria) out.push_back(c.direction == Direction::Benefit);
  return out;
}

}  // namespace

TEST(Topsis, IndiaWeightedMatrixAndIdeals) {
  const auto p = st::india();
  WeightVector w = india_final();
  std::vector<double> rounded;
  for (const double v : w.weights()) rounded.push_back(std::round(v * 1e4) / 1e4);
  const auto v = weighted_matrix(vector_normalize(p), WeightVector::normalized(w.labels(), rounded, Provenance::Final), p.codes());
  for (std::size_t i = 0; i < 4; ++i) EXPECT_LE(st::max_abs_diff(v.row(i), ref::india::kWeighted[i]), 5e-4);

  const auto r = topsis(p, w, TopsisOptions{true});
  EXPECT_LE(st::max_abs_diff(r.pis, ref::india::kPis), 5e-4);
  EXPECT_LE(st::max_abs_diff(r.nis, ref::india::kNis), 5e-4);
}

TEST(Topsis, IndiaScoresAndOrder) {
  const auto r = topsis(st::india(), india_final(), TopsisOptions{true});
  EXPECT_LE(st::max_abs_diff(r.s_plus, ref::india::kSPlus), 1e-3);
  EXPECT_LE(st::max_abs_diff(r.s_minus, ref::india::kSMinus), 1e-3);
  EXPECT_LE(st::max_abs_diff(r.scores, ref::india::kScores), 1e-3);
  EXPECT_NEAR(r.scores[0], 0.5725, 5e-5);
  EXPECT_EQ(r.ordered_labels(), ref::india::kOrder);
}

TEST(Topsis, UnroundedWeightsKeepTheOrder) {
  const auto r = topsis(st::india(), india_final());
  EXPECT_EQ(r.ordered_labels(), ref::india::kOrder);
  EXPECT_NEAR(r.scores[0], 0.5724, 1e-4);
}

TEST(Topsis, AgreesWithOracleOnRandomProblems) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = st::random_problem(rng, 2 + trial % 9, 1 + trial % 8);
    const auto w = weighting::objective_weights(p);
    const auto expected = st::oracle::topsis(p.matrix, w.weights(), benefits(p));
    const auto got = topsis(p, w);
    EXPECT_LE(st::max_abs_diff(got.scores, expected.score), 1e-12);
    EXPECT_LE(st::max_abs_diff(got.s_plus, expected.s_plus), 1e-12);
  }
}

TEST(TopsisProperty, DominanceExtremes) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(1.0, 10.0);
  for (int trial = 0; trial < 100; ++trial) {
    auto p = st::random_problem(rng, 3 + trial % 6, 2 + trial % 6);
    // Alternative 0 best on every criterion, alternative 1 worst.
    for (std::size_t j = 0; j < p.criteria.size(); ++j) {
      double lo = p.matrix[0][j], hi = lo;
      for (const auto& row : p.matrix) lo = std::min(lo, row[j]), hi = std::max(hi, row[j]);
      const bool benefit = p.criteria[j].direction == Direction::Benefit;
      p.matrix[0][j] = benefit ? hi + u(rng) : lo / (1.0 + u(rng));
      p.matrix[1][j] = benefit ? lo / (1.0 + u(rng)) : hi + u(rng);
    }
    const auto r = topsis(p, weighting::objective_weights(p));
    EXPECT_NEAR(r.scores[0], 1.0, 1e-12);
    EXPECT_NEAR(r.scores[1], 0.0, 1e-12);
    EXPECT_EQ(r.order.front(), 0u);
    EXPECT_EQ(r.order.back(), 1u);
    for (const double s : r.scores) EXPECT_TRUE(s >= 0.0 && s <= 1.0);
  }
}

TEST(Topsis, IdenticalAlternativesAreIndistinguishable) {
  auto p = st::india();
  for (auto& row : p.matrix) row = p.matrix.front();
  const auto w = WeightVector::normalized(p.codes(), std::vector<double>(10, 1.0), Provenance::Final);
  EXPECT_THROW(topsis(p, w), NumericError);
}

TEST(Topsis, MismatchedWeightsRejected) {
  const WeightVector w({"C1", "C2"}, {0.5, 0.5}, Provenance::Final);
  EXPECT_THROW(topsis(st::india(), w), ValidationError);
}

TEST(Topsis, ZeroColumnRejected) {
  auto p = st::india();
  for (auto& row : p.matrix) row[0] = 0.0;
  EXPECT_THROW(vector_normalize(p), ValidationError);
}

TEST(OrderByScore, StableForTies) {
  const std::vector<double> s{0.3, 0.5, 0.3, 0.9};
  EXPECT_EQ(order_by_score(s), (std::vector<std::size_t>{3, 1, 0, 2}));
}

TEST(Ranker, FactoryKnowsTopsis) {
  const auto r = make_ranker("topsis", TopsisOptions{true});
  EXPECT_EQ(r->rank(st::india(), india_final()).ordered_labels(), ref::india::kOrder);
  EXPECT_THROW(make_ranker("vikor"), ValidationError);
}

TEST(Topsis, SaudiScoresAndOrder) {
  const auto p = st::saudi();
  const auto ws = elicitation::solve_subjective(io::load_session(st::data_path("saudi_session.json"))).weights;
  const auto r = topsis(p, weighting::combine(ws, weighting::objective_weights(p)), TopsisOptions{true});
  EXPECT_LE(st::max_abs_diff(r.scores, ref::saudi::kScores), 1e-3);
  EXPECT_EQ(r.ordered_labels(), ref::saudi::kOrder);
}
