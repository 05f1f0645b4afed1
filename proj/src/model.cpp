#include "somit/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace somit {

std::string_view to_string(Direction d) { return d == Direction::Benefit ? "benefit" : "cost"; }

Direction parse_direction(std::string_view text) {
  if (text == "benefit" || text == "max") return Direction::Benefit;
  if (text == "cost" || text == "min") return Direction::Cost;
  throw ValidationError(fmt::format("unknown direction '{}' (expected benefit or cost)", text));
}

std::vector<double> DecisionProblem::column(std::size_t crit) const {
  std::vector<double> out;
  out.reserve(matrix.size());
  for (const auto& row : matrix) out.push_back(row.at(crit));
  return out;
}

std::vector<std::string> DecisionProblem::codes() const {
  std::vector<std::string> out;
  out.reserve(criteria.size());
  for (const auto& c : criteria) out.push_back(c.code);
  return out;
}

std::vector<Direction> DecisionProblem::directions() const {
  std::vector<Direction> out;
  out.reserve(criteria.size());
  for (const auto& c : criteria) out.push_back(c.direction);
  return out;
}

std::optional<std::size_t> DecisionProblem::criterion_index(std::string_view code) const {
  for (std::size_t j = 0; j < criteria.size(); ++j) {
    if (criteria[j].code == code) return j;
  }
  return std::nullopt;
}

std::optional<std::size_t> DecisionProblem::alternative_index(std::string_view label) const {
  for (std::size_t i = 0; i < alternatives.size(); ++i) {
    if (alternatives[i] == label) return i;
  }
  return std::nullopt;
}

numerics::DenseMatrix DecisionProblem::dense() const { return numerics::DenseMatrix::from_rows(matrix); }

// ---- ValidationReport -------------------------------------------------------

bool ValidationReport::ok() const {
  return std::none_of(issues.begin(), issues.end(),
                      [](const Issue& i) { return i.severity == Severity::Error; });
}

std::vector<Issue> ValidationReport::errors() const {
  std::vector<Issue> out;
  std::copy_if(issues.begin(), issues.end(), std::back_inserter(out),
               [](const Issue& i) { return i.severity == Severity::Error; });
  return out;
}

std::vector<Issue> ValidationReport::warnings() const {
  std::vector<Issue> out;
  std::copy_if(issues.begin(), issues.end(), std::back_inserter(out),
               [](const Issue& i) { return i.severity == Severity::Warning; });
  return out;
}

bool ValidationReport::has(std::string_view code) const {
  return std::any_of(issues.begin(), issues.end(), [&](const Issue& i) { return i.code == code; });
}

std::string ValidationReport::summary() const {
  std::vector<std::string> parts;
  for (const auto& e : errors()) parts.push_back(e.message);
  return fmt::format("{}", fmt::join(parts, "; "));
}

void ValidationReport::error(std::string code, std::string message) {
  issues.push_back({Severity::Error, std::move(code), std::move(message)});
}

void ValidationReport::warn(std::string code, std::string message) {
  issues.push_back({Severity::Warning, std::move(code), std::move(message)});
}

// ---- problems -----------------------------------------------------------------

ValidationReport validate_problem(const DecisionProblem& p) {
  ValidationReport r;
  const std::size_t m = p.alternatives.size();
  const std::size_t n = p.criteria.size();
  if (m < 2) r.error("too_few_alternatives", fmt::format("m >= 2 required (got {})", m));
  if (n < 1) r.error("no_criteria", "n >= 1 required");

  std::set<std::string> seen;
  for (const auto& c : p.criteria) {
    if (c.code.empty()) r.error("empty_code", "criterion code must not be empty");
    if (!seen.insert(c.code).second) {
      r.error("duplicate_code", fmt::format("duplicate criterion code '{}'", c.code));
    }
  }
  std::set<std::string> alts;
  for (const auto& a : p.alternatives) {
    if (!alts.insert(a).second) {
      r.error("duplicate_alternative", fmt::format("duplicate alternative '{}'", a));
    }
  }

  if (p.matrix.size() != m) {
    r.error("row_count", fmt::format("matrix has {} rows for {} alternatives", p.matrix.size(), m));
    return r;
  }
  bool shape_ok = true;
  for (std::size_t i = 0; i < m; ++i) {
    if (p.matrix[i].size() != n) {
      shape_ok = false;
      r.error("column_count", fmt::format("row {} ('{}') has {} values for {} criteria", i + 1,
                                          p.alternatives[i], p.matrix[i].size(), n));
      continue;
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(p.matrix[i][j])) {
        r.error("non_finite", fmt::format("cell ({}, {}) is not finite", p.alternatives[i],
                                          p.criteria[j].code));
      }
    }
  }
  if (!shape_ok || m == 0) return r;

  for (std::size_t j = 0; j < n; ++j) {
    const double first = p.matrix[0][j];
    const bool constant = std::all_of(p.matrix.begin(), p.matrix.end(),
                                      [&](const auto& row) { return row[j] == first; });
    if (constant) {
      r.warn("zero_dispersion",
             fmt::format("zero dispersion column '{}' (all values equal)", p.criteria[j].code));
    }
  }
  return r;
}

void require_valid(const DecisionProblem& p) {
  const auto report = validate_problem(p);
  if (!report.ok()) throw ValidationError("invalid problem: " + report.summary());
}

// ---- scale --------------------------------------------------------------------

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_positive_integer(std::string_view s, std::uint64_t& out) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    return false;
  }
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && out > 0;
}

constexpr double kDecimalSlack = 1e-12;

}  // namespace

ScaleValue ScaleValue::of(double v) {
  if (!std::isfinite(v) || v < kScaleMin - kDecimalSlack || v > kScaleMax + kDecimalSlack) {
    throw ScaleError(ScaleError::Kind::OutOfRange,
                     fmt::format("scale value {} outside [1/9, 9]", v));
  }
  return {v, fmt::format("{}", v)};
}

ScaleValue parse_scale(std::string_view raw) {
  const std::string_view token = trim(raw);
  if (token.empty()) throw ScaleError(ScaleError::Kind::Malformed, "empty scale token");

  if (const auto slash = token.find('/'); slash != std::string_view::npos) {
    std::uint64_t p = 0, q = 0;
    if (!parse_positive_integer(trim(token.substr(0, slash)), p) ||
        !parse_positive_integer(trim(token.substr(slash + 1)), q)) {
      throw ScaleError(ScaleError::Kind::Malformed,
                       fmt::format("malformed scale token '{}' (expected p/q with positive integers)",
                                   token));
    }
    // 1/9 <= p/q <= 9 without rounding.
    const bool too_small = p > UINT64_MAX / 9 ? false : 9 * p < q;
    const bool too_large = q > UINT64_MAX / 9 ? false : p > 9 * q;
    if (too_small || too_large) {
      throw ScaleError(ScaleError::Kind::OutOfRange,
                       fmt::format("scale value {} outside [1/9, 9]", token));
    }
    return {static_cast<double>(p) / static_cast<double>(q), std::string(token)};
  }

  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(v)) {
    throw ScaleError(ScaleError::Kind::Malformed, fmt::format("malformed scale token '{}'", token));
  }
  if (v < kScaleMin - kDecimalSlack || v > kScaleMax + kDecimalSlack) {
    throw ScaleError(ScaleError::Kind::OutOfRange,
                     fmt::format("scale value {} outside [1/9, 9]", token));
  }
  return {v, std::string(token)};
}

// ---- sessions -----------------------------------------------------------------

std::optional<std::size_t> ComparisonSession::index_of(std::string_view item) const {
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i] == item) return i;
  }
  return std::nullopt;
}

std::optional<ExtremePair> extreme_pair(const ComparisonSession& s) {
  if (s.items.size() < 3 || s.median_index >= s.items.size()) return std::nullopt;
  std::optional<std::size_t> hi, lo;
  std::optional<std::size_t> last;
  for (std::size_t i = 0; i < s.items.size(); ++i) {
    if (i == s.median_index) continue;
    const auto it = s.comparisons.find(s.items[i]);
    if (it == s.comparisons.end()) return std::nullopt;
    const double v = it->second.value;
    if (!hi || v > s.comparisons.at(s.items[*hi]).value) hi = i;
    if (!lo || v < s.comparisons.at(s.items[*lo]).value) lo = i;
    last = i;
  }
  if (*hi == *lo) lo = last;
  return ExtremePair{s.items[*hi], s.items[*lo]};
}

std::size_t required_questions(std::size_t n) { return n >= 3 ? n : (n == 2 ? 1 : 0); }

ValidationReport validate_session(const ComparisonSession& s) {
  ValidationReport r;
  const std::size_t n = s.items.size();
  if (n < 2) {
    r.error("too_few_items", fmt::format("a session needs at least 2 items (got {})", n));
    return r;
  }
  std::set<std::string> seen;
  for (const auto& item : s.items) {
    if (item.empty()) r.error("empty_item", "item label must not be empty");
    if (!seen.insert(item).second) r.error("duplicate_item", fmt::format("duplicate item '{}'", item));
  }
  if (s.median_index >= n) {
    r.error("median_range", fmt::format("median index {} out of range", s.median_index));
    return r;
  }

  for (const auto& [item, value] : s.comparisons) {
    if (!seen.count(item)) {
      r.error("unknown_item", fmt::format("comparison for unknown item '{}'", item));
    } else if (item == s.median()) {
      r.error("median_compared", fmt::format("median '{}' must not be compared with itself", item));
    }
    if (!(value.value >= kScaleMin - kDecimalSlack && value.value <= kScaleMax + kDecimalSlack)) {
      r.error("scale_range", fmt::format("comparison for '{}' = {} outside [1/9, 9]", item,
                                         value.value));
    }
  }
  bool complete = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == s.median_index) continue;
    if (!s.comparisons.count(s.items[i])) {
      complete = false;
      r.error("missing_comparison",
              fmt::format("missing comparison of '{}' against median '{}'", s.items[i], s.median()));
    }
  }

  if (n == 2) {
    if (s.extreme) r.error("unexpected_extreme", "two-item sessions take no extreme comparison");
  } else if (complete) {
    const auto pair = extreme_pair(s);
    if (!s.extreme) {
      r.error("missing_extreme", fmt::format("missing extreme comparison of '{}' against '{}'",
                                             pair->high, pair->low));
    } else {
      if (s.extreme->high != pair->high || s.extreme->low != pair->low) {
        r.error("extreme_mismatch",
                fmt::format("extreme comparison must be '{}' vs '{}' (got '{}' vs '{}')", pair->high,
                            pair->low, s.extreme->high, s.extreme->low));
      }
      const double v = s.extreme->value.value;
      if (!(v >= kScaleMin - kDecimalSlack && v <= kScaleMax + kDecimalSlack)) {
        r.error("scale_range", fmt::format("extreme comparison {} outside [1/9, 9]", v));
      }
    }
  }

  std::size_t above = 0, below = 0;
  for (const auto& [item, value] : s.comparisons) {
    if (value.value > 1.0) ++above;
    if (value.value < 1.0) ++below;
  }
  const std::size_t gap = above > below ? above - below : below - above;
  if (gap > 1) {
    r.warn("half_half",
           fmt::format("{} items rated above the median and {} below; roughly half on each side "
                       "is expected",
                       above, below));
  }
  return r;
}

ValidationReport validate_hierarchy(const HierarchySpec& h, std::span<const std::string> codes) {
  ValidationReport r;
  if (h.groups.empty()) {
    r.error("no_groups", "hierarchy has no groups");
    return r;
  }
  std::set<std::string> labels;
  for (const auto& g : h.groups) {
    if (!labels.insert(g.label).second) {
      r.error("duplicate_group", fmt::format("duplicate group '{}'", g.label));
    }
  }
  if (h.groups.size() >= 2 && !h.group_session) {
    r.error("missing_group_session", "two or more groups require a group-level session");
  }
  if (h.group_session) {
    const std::set<std::string> items(h.group_session->items.begin(), h.group_session->items.end());
    if (items != labels) r.error("group_session_items", "group session items must equal the group labels");
    for (auto& issue : validate_session(*h.group_session).issues) {
      issue.message = "group session: " + issue.message;
      r.issues.push_back(std::move(issue));
    }
  }

  std::map<std::string, std::string> owner;
  for (const auto& g : h.groups) {
    if (g.members.empty()) r.error("empty_group", fmt::format("group '{}' has no members", g.label));
    for (const auto& code : g.members) {
      if (auto [it, fresh] = owner.emplace(code, g.label); !fresh) {
        r.error("overlapping_groups", fmt::format("criterion '{}' appears in groups '{}' and '{}'",
                                                  code, it->second, g.label));
      }
    }
    if (g.session) {
      const std::set<std::string> items(g.session->items.begin(), g.session->items.end());
      const std::set<std::string> members(g.members.begin(), g.members.end());
      if (items != members) {
        r.error("group_members", fmt::format("session items of group '{}' differ from its members",
                                             g.label));
      }
      for (auto& issue : validate_session(*g.session).issues) {
        issue.message = fmt::format("group '{}': {}", g.label, issue.message);
        r.issues.push_back(std::move(issue));
      }
    }
  }
  const std::set<std::string> all(codes.begin(), codes.end());
  for (const auto& code : all) {
    if (!owner.count(code)) r.error("unassigned_criterion", fmt::format("criterion '{}' is in no group", code));
  }
  for (const auto& [code, group] : owner) {
    if (!all.count(code)) {
      r.error("unknown_criterion", fmt::format("group '{}' lists unknown criterion '{}'", group, code));
    }
  }
  return r;
}

// ---- weights ------------------------------------------------------------------

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::Subjective: return "subjective";
    case Provenance::Objective: return "objective";
    case Provenance::Final: return "final";
    case Provenance::AHP: return "ahp";
    case Provenance::CRITIC: return "critic";
  }
  return "unknown";
}

Provenance parse_provenance(std::string_view text) {
  for (auto p : {Provenance::Subjective, Provenance::Objective, Provenance::Final, Provenance::AHP,
                 Provenance::CRITIC}) {
    if (to_string(p) == text) return p;
  }
  throw ValidationError(fmt::format("unknown provenance '{}'", text));
}

WeightVector::WeightVector(std::vector<std::string> labels, std::vector<double> weights,
                           Provenance provenance)
    : labels_(std::move(labels)), weights_(std::move(weights)), provenance_(provenance) {
  if (labels_.size() != weights_.size()) {
    throw ValidationError(fmt::format("{} labels for {} weights", labels_.size(), weights_.size()));
  }
  if (weights_.empty()) throw ValidationError("empty weight vector");
  std::set<std::string> seen;
  for (const auto& l : labels_) {
    if (!seen.insert(l).second) throw ValidationError(fmt::format("duplicate weight label '{}'", l));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    const double w = weights_[i];
    if (!std::isfinite(w) || w < 0.0) {
      throw ValidationError(fmt::format("weight of '{}' must be finite and >= 0 (got {})", labels_[i], w));
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > kWeightSumTolerance) {
    throw ValidationError(fmt::format("weights sum to {:.12f}, expected 1", sum));
  }
}

WeightVector WeightVector::normalized(std::vector<std::string> labels, std::vector<double> raw,
                                      Provenance provenance) {
  const double sum = std::accumulate(raw.begin(), raw.end(), 0.0);
  if (!(sum > 0.0) || !std::isfinite(sum)) {
    throw NumericError(fmt::format("cannot normalize weights with sum {}", sum));
  }
  for (double& w : raw) w /= sum;
  return WeightVector(std::move(labels), std::move(raw), provenance);
}

double WeightVector::weight_of(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return weights_[i];
  }
  throw ValidationError(fmt::format("no weight for '{}'", label));
}

WeightVector WeightVector::reordered(std::span<const std::string> order) const {
  require_aligned(order, labels_, "weight labels");
  std::vector<double> w;
  w.reserve(order.size());
  for (const auto& l : order) w.push_back(weight_of(l));
  WeightVector out;
  out.labels_.assign(order.begin(), order.end());
  out.weights_ = std::move(w);
  out.provenance_ = provenance_;
  return out;
}

void require_aligned(std::span<const std::string> expected, std::span<const std::string> actual,
                     std::string_view what) {
  const std::set<std::string> e(expected.begin(), expected.end());
  const std::set<std::string> a(actual.begin(), actual.end());
  if (e == a && expected.size() == actual.size()) return;
  std::vector<std::string> missing, extra;
  std::set_difference(e.begin(), e.end(), a.begin(), a.end(), std::back_inserter(missing));
  std::set_difference(a.begin(), a.end(), e.begin(), e.end(), std::back_inserter(extra));
  throw ValidationError(fmt::format("{} mismatch: missing [{}], unexpected [{}]", what,
                                    fmt::join(missing, ", "), fmt::join(extra, ", ")));
}

}  // namespace somit
