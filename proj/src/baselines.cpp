#include "somit/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "somit/elicitation.hpp"

namespace somit::baselines {

PairwiseMatrix::PairwiseMatrix(std::vector<std::string> labels, numerics::DenseMatrix entries)
    : labels_(std::move(labels)), entries_(std::move(entries)) {
  const std::size_t n = labels_.size();
  if (n == 0) throw ValidationError("pairwise matrix needs at least one label");
  if (entries_.rows() != n || entries_.cols() != n) {
    throw ValidationError(fmt::format("pairwise matrix must be {0}x{0} for {0} labels", n));
  }
  if (std::set<std::string>(labels_.begin(), labels_.end()).size() != n) {
    throw ValidationError("pairwise matrix labels must be unique");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(entries_(i, i) - 1.0) > kReciprocityTolerance) {
      throw ValidationError(fmt::format("diagonal entry for '{}' must be 1", labels_[i]));
    }
    for (std::size_t j = 0; j < n; ++j) {
      const double a = entries_(i, j);
      if (!(a >= kScaleMin - 1e-12 && a <= kScaleMax + 1e-12)) {
        throw ValidationError(fmt::format("entry ({}, {}) = {} outside [1/9, 9]", labels_[i],
                                          labels_[j], a));
      }
      if (std::abs(a * entries_(j, i) - 1.0) > kReciprocityTolerance) {
        throw ValidationError(fmt::format("entries ({0}, {1}) and ({1}, {0}) are not reciprocal",
                                          labels_[i], labels_[j]));
      }
    }
  }
}

PairwiseMatrix PairwiseMatrix::from_upper(std::vector<std::string> labels,
                                          const std::vector<std::vector<double>>& upper) {
  const std::size_t n = labels.size();
  numerics::DenseMatrix m = numerics::DenseMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      m(i, j) = upper.at(i).at(j);
      m(j, i) = 1.0 / m(i, j);
    }
  }
  return PairwiseMatrix(std::move(labels), std::move(m));
}

PairwiseMatrix PairwiseMatrix::permuted(std::span<const std::size_t> perm) const {
  const std::size_t n = size();
  std::vector<std::string> labels(n);
  numerics::DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = labels_[perm[i]];
    for (std::size_t j = 0; j < n; ++j) m(i, j) = entries_(perm[i], perm[j]);
  }
  return PairwiseMatrix(std::move(labels), std::move(m));
}

std::size_t ahp_question_count(std::size_t n) { return n * (n - 1) / 2; }

WeightVector ahp_weights(const PairwiseMatrix& m) {
  auto eig = numerics::principal_eigenvector(m.entries());
  return WeightVector::normalized(m.labels(), std::move(eig.vector), Provenance::AHP);
}

double lambda_max(const PairwiseMatrix& m) { return numerics::principal_eigenvector(m.entries()).lambda_max; }

double random_index(std::size_t n) {
  switch (n) {
    case 3: return 0.58;
    case 4: return 0.90;
    case 5: return 1.12;
    case 6: return 1.24;
    case 7: return 1.32;
    case 8: return 1.41;
    case 9: return 1.45;
    case 10: return 1.49;
    default:
      throw ValidationError(fmt::format("no random index for n = {} (supported: 3..10)", n));
  }
}

double consistency_ratio(const PairwiseMatrix& m) {
  const std::size_t n = m.size();
  const double ri = random_index(n);
  const double ci = (lambda_max(m) - static_cast<double>(n)) / static_cast<double>(n - 1);
  return ci / ri;
}

WeightVector ahp_hierarchy_weights(const AhpHierarchy& h, std::span<const std::string> order) {
  if (h.members.empty()) throw ValidationError("AHP hierarchy has no groups");
  std::vector<std::string> group_labels;
  for (const auto& g : h.members) group_labels.push_back(g.label);

  WeightVector group_weights = [&] {
    if (h.groups) {
      require_aligned(group_labels, h.groups->labels(), "AHP group labels");
      return ahp_weights(*h.groups);
    }
    if (h.members.size() != 1) throw ValidationError("AHP hierarchy with 2+ groups needs a group matrix");
    return WeightVector({group_labels.front()}, {1.0}, Provenance::AHP);
  }();

  std::map<std::string, WeightVector> shares;
  for (const auto& g : h.members) {
    if (g.matrix) {
      require_aligned(g.members, g.matrix->labels(), fmt::format("members of group '{}'", g.label));
      shares.emplace(g.label, ahp_weights(*g.matrix));
    } else {
      shares.emplace(g.label, elicitation::even_split(g.members, Provenance::AHP));
    }
  }
  return elicitation::compose(group_weights, shares, order, Provenance::AHP);
}

CriticDetail critic_detail(const DecisionProblem& p) {
  require_valid(p);
  const std::size_t m = p.num_alternatives();
  const std::size_t n = p.num_criteria();
  CriticDetail d{numerics::DenseMatrix(m, n), std::vector<double>(n), numerics::DenseMatrix(n, n),
                 std::vector<double>(n)};
  for (std::size_t j = 0; j < n; ++j) {
    const auto col = p.column(j);
    const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
    const double range = *hi - *lo;
    if (range == 0.0) {
      throw NumericError(
          fmt::format("CRITIC undefined: criterion '{}' is constant", p.criteria[j].code));
    }
    const bool benefit = p.criteria[j].direction == Direction::Benefit;
    for (std::size_t i = 0; i < m; ++i) {
      d.normalized(i, j) = benefit ? (col[i] - *lo) / range : (*hi - col[i]) / range;
    }
    d.sigma[j] = numerics::population_stddev(d.normalized.column(j));
  }
  for (std::size_t j = 0; j < n; ++j) {
    const auto cj = d.normalized.column(j);
    for (std::size_t k = 0; k < n; ++k) {
      d.correlation(j, k) = j == k ? 1.0 : numerics::pearson(cj, d.normalized.column(k));
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    double conflict = 0.0;
    for (std::size_t k = 0; k < n; ++k) conflict += 1.0 - d.correlation(j, k);
    d.information[j] = d.sigma[j] * conflict;
  }
  return d;
}

WeightVector critic_weights(const DecisionProblem& p) {
  const auto d = critic_detail(p);
  return WeightVector::normalized(p.codes(), d.information, Provenance::CRITIC);
}

}  // namespace somit::baselines
