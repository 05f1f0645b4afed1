#include "somit/weighting.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace somit::weighting {

NormalizedMatrix max_min_normalize(const DecisionProblem& p) {
  require_valid(p);
  const std::size_t m = p.num_alternatives();
  const std::size_t n = p.num_criteria();
  NormalizedMatrix out{numerics::DenseMatrix(m, n), std::vector<double>(n, 0.0),
                       std::vector<bool>(n, false)};
  for (std::size_t j = 0; j < n; ++j) {
    const auto col = p.column(j);
    const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
    const double range = *hi - *lo;
    if (range == 0.0) {
      out.degenerate[j] = true;
      continue;
    }
    for (std::size_t i = 0; i < m; ++i) out.values(i, j) = (col[i] - *lo) / range;
    out.medians[j] = numerics::median(out.values.column(j));
  }
  return out;
}

std::vector<double> aadm(const NormalizedMatrix& nm) {
  const std::size_t m = nm.values.rows();
  const std::size_t n = nm.values.cols();
  std::vector<double> r(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += std::abs(nm.values(i, j) - nm.medians[j]);
    r[j] = s / static_cast<double>(m);
  }
  return r;
}

WeightVector objective_weights(const DecisionProblem& p) {
  const auto r = aadm(max_min_normalize(p));
  if (std::all_of(r.begin(), r.end(), [](double v) { return v == 0.0; })) {
    throw NumericError("objective weights undefined: every criterion has zero dispersion");
  }
  return WeightVector::normalized(p.codes(), r, Provenance::Objective);
}

WeightVector combine(const WeightVector& ws, const WeightVector& wo) {
  const WeightVector o = wo.reordered(ws.labels());
  std::vector<double> prod(ws.size());
  for (std::size_t j = 0; j < ws.size(); ++j) prod[j] = ws[j] * o[j];
  double sum = 0.0;
  for (double v : prod) sum += v;
  if (!(sum > 0.0)) throw NumericError("combined weights undefined: every product w_s * w_o is zero");
  return WeightVector::normalized(ws.labels(), std::move(prod), Provenance::Final);
}

std::vector<std::string> erased_preferences(const WeightVector& ws, const WeightVector& wo) {
  std::vector<std::string> out;
  for (std::size_t j = 0; j < ws.size(); ++j) {
    if (ws[j] > 0.0 && wo.weight_of(ws.labels()[j]) == 0.0) out.push_back(ws.labels()[j]);
  }
  return out;
}

void write_dispersion_csv(const DecisionProblem& p, std::ostream& out) {
  const auto nm = max_min_normalize(p);
  const auto r = aadm(nm);
  const std::size_t m = p.num_alternatives();
  const std::size_t n = p.num_criteria();
  auto row = [&](std::string_view section, std::string_view label, auto&& value) {
    out << section << ',' << label;
    for (std::size_t j = 0; j < n; ++j) out << ',' << fmt::format("{:.17g}", value(j));
    out << '\n';
  };
  out << "section,label," << fmt::format("{}", fmt::join(p.codes(), ",")) << '\n';
  for (std::size_t i = 0; i < m; ++i) {
    row("normalized", p.alternatives[i], [&](std::size_t j) { return nm.values(i, j); });
  }
  row("median", "median", [&](std::size_t j) { return nm.medians[j]; });
  for (std::size_t i = 0; i < m; ++i) {
    row("deviation", p.alternatives[i],
        [&](std::size_t j) { return std::abs(nm.values(i, j) - nm.medians[j]); });
  }
  row("aadm", "r", [&](std::size_t j) { return r[j]; });
}

}  // namespace somit::weighting
