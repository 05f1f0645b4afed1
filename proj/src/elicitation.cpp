#include "somit/elicitation.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace somit::elicitation {

std::vector<Judgement> judgements(const ComparisonSession& s) {
  std::vector<Judgement> out;
  for (std::size_t i = 0; i < s.items.size(); ++i) {
    if (i == s.median_index) continue;
    const auto it = s.comparisons.find(s.items[i]);
    if (it == s.comparisons.end()) {
      throw ValidationError(fmt::format("missing comparison for '{}'", s.items[i]));
    }
    out.push_back({i, s.median_index, it->second.value});
  }
  if (s.extreme) {
    const auto h = s.index_of(s.extreme->high);
    const auto l = s.index_of(s.extreme->low);
    if (!h || !l || *h == *l) throw ValidationError("extreme comparison names invalid items");
    out.push_back({*h, *l, s.extreme->value.value});
  }
  return out;
}

KktSystem build_kkt(std::size_t n, std::span<const Judgement> pairs) {
  numerics::DenseMatrix a(n + 1, n + 1);
  std::vector<double> rhs(n + 1, 0.0);
  // Each residual r = v*w_j - w_i contributes dz/dw_i = -2r and dz/dw_j = 2v*r.
  for (const auto& p : pairs) {
    if (p.i >= n || p.j >= n || p.i == p.j) throw ValidationError("judgement indices out of range");
    const double v = p.value;
    a(p.i, p.i) += 2.0;
    a(p.i, p.j) -= 2.0 * v;
    a(p.j, p.i) -= 2.0 * v;
    a(p.j, p.j) += 2.0 * v * v;
  }
  for (std::size_t k = 0; k < n; ++k) {
    a(k, n) = -1.0;
    a(n, k) = 1.0;
  }
  rhs[n] = 1.0;
  return {std::move(a), std::move(rhs)};
}

KktSystem build_kkt(const ComparisonSession& s) {
  const auto report = validate_session(s);
  if (!report.ok()) throw ValidationError("invalid session: " + report.summary());
  const auto pairs = judgements(s);
  return build_kkt(s.items.size(), pairs);
}

double objective_value(std::span<const Judgement> pairs, std::span<const double> w) {
  double z = 0.0;
  for (const auto& p : pairs) {
    const double r = p.value * w[p.j] - w[p.i];
    z += r * r;
  }
  return z;
}

SubjectiveSolution solve_judgements(std::vector<std::string> labels,
                                    std::span<const Judgement> pairs) {
  const std::size_t n = labels.size();
  const auto kkt = build_kkt(n, pairs);
  const std::vector<double> x = numerics::solve_linear(kkt.matrix, kkt.rhs);
  std::vector<double> w(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n));

  std::vector<std::string> bad_items;
  std::vector<double> bad_weights;
  for (std::size_t k = 0; k < n; ++k) {
    if (w[k] < -kBoundSlack || w[k] > 1.0 + kBoundSlack) {
      bad_items.push_back(labels[k]);
      bad_weights.push_back(w[k]);
    }
  }
  if (!bad_items.empty()) {
    std::vector<std::string> parts;
    for (std::size_t k = 0; k < bad_items.size(); ++k) {
      parts.push_back(fmt::format("{} = {:.6f}", bad_items[k], bad_weights[k]));
    }
    throw InconsistentComparisons(
        fmt::format("inconsistent comparisons: bound constraint active ({})", fmt::join(parts, ", ")),
        std::move(bad_items), std::move(bad_weights));
  }
  for (double& v : w) v = std::clamp(v, 0.0, 1.0);

  const double z = objective_value(pairs, w);
  return {WeightVector(std::move(labels), std::move(w), Provenance::Subjective), z, x[n]};
}

SubjectiveSolution solve_subjective(const ComparisonSession& s) {
  const auto report = validate_session(s);
  if (!report.ok()) throw ValidationError("invalid session: " + report.summary());
  const auto pairs = judgements(s);
  return solve_judgements(s.items, pairs);
}

WeightVector even_split(const std::vector<std::string>& members, Provenance provenance) {
  return WeightVector::normalized(members, std::vector<double>(members.size(), 1.0), provenance);
}

WeightVector compose(const WeightVector& group_weights,
                     const std::map<std::string, WeightVector>& shares,
                     std::span<const std::string> order, Provenance provenance) {
  std::vector<std::string> labels;
  std::vector<double> weights;
  for (std::size_t g = 0; g < group_weights.size(); ++g) {
    const auto& label = group_weights.labels()[g];
    const auto it = shares.find(label);
    if (it == shares.end()) throw ValidationError(fmt::format("no shares for group '{}'", label));
    for (std::size_t k = 0; k < it->second.size(); ++k) {
      labels.push_back(it->second.labels()[k]);
      weights.push_back(group_weights[g] * it->second[k]);
    }
  }
  WeightVector out(std::move(labels), std::move(weights), provenance);
  if (!order.empty()) out = out.reordered(order);
  return out;
}

WeightVector compose_hierarchy(const HierarchySpec& h, std::span<const std::string> order) {
  std::vector<std::string> codes;
  if (order.empty()) {
    for (const auto& g : h.groups) codes.insert(codes.end(), g.members.begin(), g.members.end());
  } else {
    codes.assign(order.begin(), order.end());
  }
  const auto report = validate_hierarchy(h, codes);
  if (!report.ok()) throw ValidationError("invalid hierarchy: " + report.summary());

  WeightVector group_weights =
      h.group_session ? solve_subjective(*h.group_session).weights
                      : WeightVector({h.groups.front().label}, {1.0}, Provenance::Subjective);

  std::map<std::string, WeightVector> shares;
  for (const auto& g : h.groups) {
    shares.emplace(g.label, g.session ? solve_subjective(*g.session).weights
                                      : even_split(g.members, Provenance::Subjective));
  }
  return compose(group_weights, shares, order, Provenance::Subjective);
}

}  // namespace somit::elicitation
