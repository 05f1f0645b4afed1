#pragma once

#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "somit/io.hpp"
#include "somit/model.hpp"

namespace somit::testing {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(SOMIT_DATA_DIR) / name;
}

inline DecisionProblem india() { return io::load_problem(data_path("india.json")); }
inline DecisionProblem saudi() { return io::load_problem(data_path("saudi.csv")); }

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return a.size() == b.size() ? worst : std::numeric_limits<double>::infinity();
}

inline ComparisonSession india_group_session() {
  return io::load_session(data_path("india_groups_session.json"));
}

// Random problem with positive entries and mixed directions.
inline DecisionProblem random_problem(std::mt19937_64& rng, std::size_t m, std::size_t n) {
  std::uniform_real_distribution<double> value(0.5, 100.0);
  std::bernoulli_distribution cost(0.4);
  DecisionProblem p;
  for (std::size_t j = 0; j < n; ++j) {
    const auto code = "C" + std::to_string(j + 1);
    p.criteria.push_back(CriterionSpec{code, code, "", cost(rng) ? Direction::Cost : Direction::Benefit, std::nullopt});
  }
  for (std::size_t i = 0; i < m; ++i) {
    p.alternatives.push_back("A" + std::to_string(i + 1));
    std::vector<double> row;
    for (std::size_t j = 0; j < n; ++j) row.push_back(value(rng));
    p.matrix.push_back(std::move(row));
  }
  return p;
}

// Scale value drawn from the 1/9..9 ladder.
inline ScaleValue random_scale(std::mt19937_64& rng) {
  static const std::vector<std::string> ladder{"1/9", "1/8", "1/7", "1/6", "1/5", "1/4", "1/3", "1/2", "1",
                                               "2",   "3",   "4",   "5",   "6",   "7",   "8",   "9"};
  std::uniform_int_distribution<std::size_t> pick(0, ladder.size() - 1);
  return parse_scale(ladder[pick(rng)]);
}

}  // namespace somit::testing
