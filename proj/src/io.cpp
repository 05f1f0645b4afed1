#include "somit/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "somit/weighting.hpp"

#ifndef SOMIT_VERSION
#define SOMIT_VERSION "0.0.0"
#endif

namespace somit::io {

namespace fs = std::filesystem;

std::string_view tool_version() { return SOMIT_VERSION; }

// ---- raw files ----------------------------------------------------------------

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}' for reading", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError(fmt::format("failed reading '{}'", path.string()));
  return ss.str();
}

void write_file(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw IoError("sha256 digest failed");
  }
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", digest[i]);
  return out;
}

Json parse_json(std::string_view text, std::string_view origin) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(fmt::format("{}: invalid JSON at byte {}: {}", origin, e.byte, e.what()));
  }
}

namespace {

void require_object(const Json& j, std::string_view where) {
  if (!j.is_object()) throw ValidationError(fmt::format("{}: expected a JSON object", where));
}

void require_keys(const Json& j, std::initializer_list<std::string_view> allowed, std::string_view where) {
  require_object(j, where);
  for (const auto& [key, _] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ValidationError(fmt::format("{}: unknown field '{}'", where, key));
    }
  }
}

const Json& field(const Json& j, std::string_view key, std::string_view where) {
  const auto it = j.find(key);
  if (it == j.end()) throw ValidationError(fmt::format("{}: missing field '{}'", where, key));
  return *it;
}

std::string string_field(const Json& j, std::string_view key, std::string_view where) {
  const Json& v = field(j, key, where);
  if (!v.is_string()) throw ValidationError(fmt::format("{}: field '{}' must be a string", where, key));
  return v.get<std::string>();
}

std::vector<std::string> string_array(const Json& j, std::string_view where) {
  if (!j.is_array()) throw ValidationError(fmt::format("{}: expected an array of strings", where));
  std::vector<std::string> out;
  for (const auto& v : j) {
    if (!v.is_string()) throw ValidationError(fmt::format("{}: expected an array of strings", where));
    out.push_back(v.get<std::string>());
  }
  return out;
}

double number(const Json& v, std::string_view where) {
  if (!v.is_number()) throw ValidationError(fmt::format("{}: expected a number", where));
  return v.get<double>();
}

ScaleValue scale_value(const Json& v, std::string_view where) {
  try {
    if (v.is_string()) return parse_scale(v.get<std::string>());
    if (v.is_number()) return ScaleValue::of(v.get<double>());
  } catch (const ScaleError& e) {
    throw ScaleError(e.kind(), fmt::format("{}: {}", where, e.what()));
  }
  throw ValidationError(fmt::format("{}: expected a scale token", where));
}

template <typename F>
auto with_origin(std::string_view origin, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ScaleError& e) {
    throw ScaleError(e.kind(), fmt::format("{}: {}", origin, e.what()));
  } catch (const IoError&) {
    throw;
  } catch (const ValidationError& e) {
    throw ValidationError(fmt::format("{}: {}", origin, e.what()));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(fmt::format("{}: {}", origin, e.what()));
  }
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no,
                                        std::string_view origin) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c == '"') {
        if (k + 1 < line.size() && line[k + 1] == '"') {
          cur += '"';
          ++k;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::string(trim(cur)));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw ValidationError(fmt::format("{}:{}: unterminated quote", origin, line_no));
  cells.push_back(std::string(trim(cur)));
  return cells;
}

std::string csv_cell(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

// ---- problems -----------------------------------------------------------------

DecisionProblem problem_from_json(const Json& j) {
  require_keys(j, {"criteria", "alternatives", "matrix"}, "problem");
  DecisionProblem p;
  const Json& crits = field(j, "criteria", "problem");
  if (!crits.is_array()) throw ValidationError("problem: 'criteria' must be an array");
  for (std::size_t k = 0; k < crits.size(); ++k) {
    const auto where = fmt::format("criteria[{}]", k);
    const Json& c = crits[k];
    require_keys(c, {"code", "name", "unit", "direction", "group"}, where);
    CriterionSpec spec;
    spec.code = string_field(c, "code", where);
    spec.name = c.contains("name") ? string_field(c, "name", where) : spec.code;
    spec.unit = c.contains("unit") ? string_field(c, "unit", where) : "";
    spec.direction = parse_direction(string_field(c, "direction", where));
    if (c.contains("group") && !c["group"].is_null()) spec.group = string_field(c, "group", where);
    p.criteria.push_back(std::move(spec));
  }
  p.alternatives = string_array(field(j, "alternatives", "problem"), "problem.alternatives");

  const Json& rows = field(j, "matrix", "problem");
  if (!rows.is_array()) throw ValidationError("problem: 'matrix' must be an array of rows");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].is_array()) throw ValidationError(fmt::format("matrix row {} must be an array", i + 1));
    std::vector<double> row;
    for (std::size_t k = 0; k < rows[i].size(); ++k) {
      const Json& v = rows[i][k];
      if (!v.is_number()) {
        const std::string alt = i < p.alternatives.size() ? p.alternatives[i] : "?";
        const std::string code = k < p.criteria.size() ? p.criteria[k].code : "?";
        throw ValidationError(fmt::format("matrix row {} ('{}'), column {} ('{}'): '{}' is not a number",
                                          i + 1, alt, k + 1, code, v.dump()));
      }
      row.push_back(v.get<double>());
    }
    p.matrix.push_back(std::move(row));
  }
  return p;
}

Json problem_to_json(const DecisionProblem& p) {
  Json crits = Json::array();
  for (const auto& c : p.criteria) {
    Json jc{{"code", c.code}, {"name", c.name}, {"unit", c.unit},
            {"direction", std::string(to_string(c.direction))}};
    if (c.group) jc["group"] = *c.group;
    crits.push_back(std::move(jc));
  }
  return Json{{"criteria", std::move(crits)}, {"alternatives", p.alternatives}, {"matrix", p.matrix}};
}

DecisionProblem parse_problem_csv(std::string_view text, std::string_view origin) {
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    if (!trim(line).empty()) rows.emplace_back(line_no, split_csv_line(line, line_no, origin));
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  if (rows.size() < 2) {
    throw ValidationError(fmt::format("{}: expected a header row and a direction row", origin));
  }
  const auto& header = rows[0].second;
  const auto& dirs = rows[1].second;
  if (header.size() < 2) throw ValidationError(fmt::format("{}:{}: header has no criteria", origin, rows[0].first));
  if (dirs.size() != header.size()) {
    throw ValidationError(fmt::format("{}:{}: expected {} cells in the direction row, got {}", origin,
                                      rows[1].first, header.size(), dirs.size()));
  }
  DecisionProblem p;
  for (std::size_t k = 1; k < header.size(); ++k) {
    CriterionSpec c;
    c.code = header[k];
    c.name = header[k];
    try {
      c.direction = parse_direction(dirs[k]);
    } catch (const ValidationError& e) {
      throw ValidationError(fmt::format("{}:{}: column {}: {}", origin, rows[1].first, k + 1, e.what()));
    }
    p.criteria.push_back(std::move(c));
  }
  for (std::size_t r = 2; r < rows.size(); ++r) {
    const auto& [ln, cells] = rows[r];
    if (cells.size() != header.size()) {
      throw ValidationError(fmt::format("{}:{}: expected {} cells, got {}", origin, ln, header.size(),
                                        cells.size()));
    }
    p.alternatives.push_back(cells[0]);
    std::vector<double> row;
    for (std::size_t k = 1; k < cells.size(); ++k) {
      const auto v = parse_double(cells[k]);
      if (!v) {
        throw ValidationError(fmt::format("{}:{}: column {} ('{}'): '{}' is not a number", origin, ln,
                                          k + 1, header[k], cells[k]));
      }
      row.push_back(*v);
    }
    p.matrix.push_back(std::move(row));
  }
  return p;
}

std::string problem_to_csv(const DecisionProblem& p) {
  std::string out = "alternative";
  for (const auto& c : p.criteria) out += "," + csv_cell(c.code);
  out += "\ndirection";
  for (const auto& c : p.criteria) out += fmt::format(",{}", to_string(c.direction));
  out += '\n';
  for (std::size_t i = 0; i < p.alternatives.size(); ++i) {
    out += csv_cell(p.alternatives[i]);
    for (double v : p.matrix[i]) out += fmt::format(",{}", v);
    out += '\n';
  }
  return out;
}

DecisionProblem parse_problem(std::string_view text, ProblemFormat format, std::string_view origin) {
  DecisionProblem p = format == ProblemFormat::Csv
                          ? parse_problem_csv(text, origin)
                          : with_origin(origin, [&] { return problem_from_json(parse_json(text, origin)); });
  const auto report = validate_problem(p);
  if (!report.ok()) throw ValidationError(fmt::format("{}: {}", origin, report.summary()));
  return p;
}

DecisionProblem load_problem(const fs::path& path) {
  const std::string text = read_file(path);
  const bool csv = path.extension() == ".csv" || path.extension() == ".CSV";
  return parse_problem(text, csv ? ProblemFormat::Csv : ProblemFormat::Json, path.string());
}

// ---- sessions -----------------------------------------------------------------

ComparisonSession session_from_json(const Json& j) {
  require_keys(j, {"items", "median", "comparisons", "extreme"}, "session");
  ComparisonSession s;
  s.items = string_array(field(j, "items", "session"), "session.items");
  const std::string median = string_field(j, "median", "session");
  const auto idx = s.index_of(median);
  if (!idx) throw ValidationError(fmt::format("session: median '{}' is not an item", median));
  s.median_index = *idx;

  if (j.contains("comparisons")) {
    const Json& cmp = j["comparisons"];
    require_object(cmp, "session.comparisons");
    for (const auto& [item, v] : cmp.items()) {
      s.comparisons.emplace(item, scale_value(v, fmt::format("comparison '{}'", item)));
    }
  }
  if (j.contains("extreme") && !j["extreme"].is_null()) {
    const Json& e = j["extreme"];
    require_keys(e, {"high", "low", "value"}, "session.extreme");
    s.extreme = ExtremeComparison{string_field(e, "high", "session.extreme"),
                                  string_field(e, "low", "session.extreme"),
                                  scale_value(field(e, "value", "session.extreme"), "extreme value")};
  }
  return s;
}

Json session_to_json(const ComparisonSession& s) {
  Json cmp = Json::object();
  for (const auto& item : s.items) {
    if (const auto it = s.comparisons.find(item); it != s.comparisons.end()) cmp[item] = it->second.token;
  }
  Json j{{"items", s.items}, {"median", s.median()}, {"comparisons", std::move(cmp)}};
  if (s.extreme) {
    j["extreme"] = Json{{"high", s.extreme->high}, {"low", s.extreme->low}, {"value", s.extreme->value.token}};
  }
  return j;
}

ComparisonSession load_session(const fs::path& path) {
  const std::string origin = path.string();
  return with_origin(origin, [&] { return session_from_json(parse_json(read_file(path), origin)); });
}

// ---- hierarchies --------------------------------------------------------------

HierarchySpec hierarchy_from_json(const Json& j) {
  require_keys(j, {"groups", "members"}, "hierarchy");
  HierarchySpec h;
  if (j.contains("groups") && !j["groups"].is_null()) h.group_session = session_from_json(j["groups"]);
  const Json& members = field(j, "members", "hierarchy");
  require_object(members, "hierarchy.members");

  std::vector<std::string> order;
  if (h.group_session) {
    order = h.group_session->items;
    for (const auto& [label, _] : members.items()) {
      if (std::find(order.begin(), order.end(), label) == order.end()) order.push_back(label);
    }
  } else {
    for (const auto& [label, _] : members.items()) order.push_back(label);
  }
  for (const auto& label : order) {
    GroupSpec g;
    g.label = label;
    if (!members.contains(label)) {
      throw ValidationError(fmt::format("hierarchy: group '{}' has no member entry", label));
    }
    const Json& entry = members[label];
    const auto where = fmt::format("hierarchy.members.{}", label);
    require_keys(entry, {"items", "median", "comparisons", "extreme"}, where);
    g.members = string_array(field(entry, "items", where), where + ".items");
    if (entry.contains("median")) g.session = session_from_json(entry);
    h.groups.push_back(std::move(g));
  }
  return h;
}

Json hierarchy_to_json(const HierarchySpec& h) {
  Json members = Json::object();
  for (const auto& g : h.groups) {
    members[g.label] = g.session ? session_to_json(*g.session) : Json{{"items", g.members}};
  }
  Json j = Json::object();
  if (h.group_session) j["groups"] = session_to_json(*h.group_session);
  j["members"] = std::move(members);
  return j;
}

HierarchySpec load_hierarchy(const fs::path& path) {
  const std::string origin = path.string();
  return with_origin(origin, [&] { return hierarchy_from_json(parse_json(read_file(path), origin)); });
}

// ---- weights and rankings -------------------------------------------------------

Json weights_to_json(const WeightVector& w, std::optional<double> z) {
  Json j{{"labels", w.labels()}, {"weights", w.weights()}};
  if (z) j["z"] = *z;
  j["provenance"] = std::string(to_string(w.provenance()));
  return j;
}

WeightVector weights_from_json(const Json& j) {
  require_keys(j, {"labels", "weights", "z", "alpha", "provenance"}, "weights");
  auto labels = string_array(field(j, "labels", "weights"), "weights.labels");
  const Json& ws = field(j, "weights", "weights");
  if (!ws.is_array()) throw ValidationError("weights: 'weights' must be an array");
  std::vector<double> values;
  for (std::size_t k = 0; k < ws.size(); ++k) values.push_back(number(ws[k], fmt::format("weights[{}]", k)));
  const Provenance prov =
      j.contains("provenance") ? parse_provenance(string_field(j, "provenance", "weights")) : Provenance::Final;
  return WeightVector(std::move(labels), std::move(values), prov);
}

WeightVector load_weights(const fs::path& path) {
  const std::string origin = path.string();
  return with_origin(origin, [&] { return weights_from_json(parse_json(read_file(path), origin)); });
}

Json ranking_to_json(const ranking::RankingResult& r) {
  Json scores = Json::object(), sp = Json::object(), sm = Json::object();
  for (std::size_t i = 0; i < r.alternatives.size(); ++i) {
    scores[r.alternatives[i]] = r.scores[i];
    sp[r.alternatives[i]] = r.s_plus[i];
    sm[r.alternatives[i]] = r.s_minus[i];
  }
  return Json{{"scores", std::move(scores)}, {"s_plus", std::move(sp)},  {"s_minus", std::move(sm)},
              {"order", r.ordered_labels()},  {"pis", r.pis},            {"nis", r.nis}};
}

// ---- baselines ----------------------------------------------------------------

baselines::PairwiseMatrix pairwise_from_json(const Json& j) {
  require_keys(j, {"labels", "matrix"}, "pairwise");
  auto labels = string_array(field(j, "labels", "pairwise"), "pairwise.labels");
  const Json& rows = field(j, "matrix", "pairwise");
  if (!rows.is_array() || rows.size() != labels.size()) {
    throw ValidationError(fmt::format("pairwise: matrix must have {} rows", labels.size()));
  }
  std::vector<std::vector<double>> m;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].is_array()) throw ValidationError(fmt::format("pairwise: row {} must be an array", i + 1));
    std::vector<double> row;
    for (std::size_t k = 0; k < rows[i].size(); ++k) {
      row.push_back(scale_value(rows[i][k], fmt::format("pairwise ({}, {})", i + 1, k + 1)).value);
    }
    m.push_back(std::move(row));
  }
  return baselines::PairwiseMatrix(std::move(labels), numerics::DenseMatrix::from_rows(m));
}

Json pairwise_to_json(const baselines::PairwiseMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto r = m.entries().row(i);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  return Json{{"labels", m.labels()}, {"matrix", std::move(rows)}};
}

baselines::AhpHierarchy ahp_from_json(const Json& j) {
  require_object(j, "ahp");
  baselines::AhpHierarchy h;
  if (!j.contains("members")) {
    auto flat = pairwise_from_json(j);
    h.members.push_back({"all", flat.labels(), std::move(flat)});
    return h;
  }
  require_keys(j, {"groups", "members"}, "ahp");
  if (j.contains("groups") && !j["groups"].is_null()) h.groups = pairwise_from_json(j["groups"]);
  const Json& members = j["members"];
  require_object(members, "ahp.members");
  std::vector<std::string> order = h.groups ? h.groups->labels() : std::vector<std::string>{};
  for (const auto& [label, _] : members.items()) {
    if (std::find(order.begin(), order.end(), label) == order.end()) order.push_back(label);
  }
  for (const auto& label : order) {
    if (!members.contains(label)) throw ValidationError(fmt::format("ahp: group '{}' has no member entry", label));
    const Json& e = members[label];
    const auto where = fmt::format("ahp.members.{}", label);
    require_keys(e, {"labels", "matrix"}, where);
    baselines::AhpGroup g;
    g.label = label;
    g.members = string_array(field(e, "labels", where), where + ".labels");
    if (e.contains("matrix")) g.matrix = pairwise_from_json(e);
    h.members.push_back(std::move(g));
  }
  return h;
}

baselines::AhpHierarchy load_ahp(const fs::path& path) {
  const std::string origin = path.string();
  return with_origin(origin, [&] { return ahp_from_json(parse_json(read_file(path), origin)); });
}

// ---- scenarios ----------------------------------------------------------------

sensitivity::PerturbationScenario scenario_from_json(const Json& j) {
  require_keys(j, {"name", "edits"}, "scenario");
  sensitivity::PerturbationScenario s;
  const Json& edits = field(j, "edits", "scenario");
  if (!edits.is_array()) throw ValidationError("scenario: 'edits' must be an array");
  for (std::size_t k = 0; k < edits.size(); ++k) {
    const Json& e = edits[k];
    const auto where = fmt::format("edits[{}]", k);
    require_object(e, where);
    const std::string kind = string_field(e, "kind", where);
    if (kind == "cell") {
      require_keys(e, {"kind", "alternative", "criterion", "value"}, where);
      s.edits.emplace_back(sensitivity::CellReplace{string_field(e, "alternative", where),
                                                    string_field(e, "criterion", where),
                                                    number(field(e, "value", where), where + ".value")});
    } else if (kind == "affine") {
      require_keys(e, {"kind", "criterion", "a", "b"}, where);
      s.edits.emplace_back(sensitivity::AffineColumn{
          string_field(e, "criterion", where), number(field(e, "a", where), where + ".a"),
          e.contains("b") ? number(e["b"], where + ".b") : 0.0});
    } else if (kind == "reciprocal") {
      require_keys(e, {"kind", "criterion", "flip_direction"}, where);
      bool flip = true;
      if (e.contains("flip_direction")) {
        if (!e["flip_direction"].is_boolean()) throw ValidationError(where + ": flip_direction must be boolean");
        flip = e["flip_direction"].get<bool>();
      }
      s.edits.emplace_back(sensitivity::ReciprocalColumn{string_field(e, "criterion", where), flip});
    } else if (kind == "complement") {
      require_keys(e, {"kind", "criterion", "c"}, where);
      s.edits.emplace_back(sensitivity::ComplementColumn{string_field(e, "criterion", where),
                                                         number(field(e, "c", where), where + ".c")});
    } else {
      throw ValidationError(fmt::format("{}: unknown edit kind '{}'", where, kind));
    }
  }
  return s;
}

Json scenario_to_json(const sensitivity::PerturbationScenario& s) {
  Json edits = Json::array();
  for (const auto& edit : s.edits) {
    std::visit(
        [&](const auto& e) {
          using T = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<T, sensitivity::CellReplace>) {
            edits.push_back({{"kind", "cell"}, {"alternative", e.alternative}, {"criterion", e.criterion},
                             {"value", e.value}});
          } else if constexpr (std::is_same_v<T, sensitivity::AffineColumn>) {
            edits.push_back({{"kind", "affine"}, {"criterion", e.criterion}, {"a", e.a}, {"b", e.b}});
          } else if constexpr (std::is_same_v<T, sensitivity::ReciprocalColumn>) {
            edits.push_back({{"kind", "reciprocal"}, {"criterion", e.criterion},
                             {"flip_direction", e.flip_direction}});
          } else {
            edits.push_back({{"kind", "complement"}, {"criterion", e.criterion}, {"c", e.c}});
          }
        },
        edit);
  }
  return Json{{"edits", std::move(edits)}};
}

sensitivity::PerturbationScenario load_scenario(const fs::path& path) {
  const std::string origin = path.string();
  return with_origin(origin, [&] { return scenario_from_json(parse_json(read_file(path), origin)); });
}

Json report_to_json(const sensitivity::RobustnessReport& r) {
  Json methods = Json::array();
  for (const auto& m : r.methods) {
    methods.push_back({{"method", m.method},
                       {"original", weights_to_json(m.original)},
                       {"perturbed", weights_to_json(m.perturbed)},
                       {"aafd", m.aafd},
                       {"max_abs_change", m.max_abs_change}});
  }
  return Json{{"methods", std::move(methods)}};
}

std::string fixed(double v, int decimals) {
  if (v == 0.0) v = 0.0;  // no "-0.0000"
  std::string s = fmt::format("{:.{}f}", v, decimals);
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
  return s;
}

// ---- manifests ----------------------------------------------------------------

std::string_view to_string(WeightingMode m) {
  switch (m) {
    case WeightingMode::SubjectiveOnly: return "subjective";
    case WeightingMode::ObjectiveOnly: return "objective";
    case WeightingMode::Combined: return "combined";
    case WeightingMode::AHP: return "ahp";
    case WeightingMode::CRITIC: return "critic";
  }
  return "unknown";
}

WeightingMode parse_mode(std::string_view text) {
  for (auto m : {WeightingMode::SubjectiveOnly, WeightingMode::ObjectiveOnly, WeightingMode::Combined,
                 WeightingMode::AHP, WeightingMode::CRITIC}) {
    if (to_string(m) == text) return m;
  }
  throw ValidationError(
      fmt::format("unknown mode '{}' (expected subjective, objective, combined, ahp or critic)", text));
}

RunManifest manifest_from_json(const Json& j) {
  require_keys(j, {"problem", "hierarchy", "session", "ahp", "mode", "ranker", "round_weights", "output"},
               "manifest");
  RunManifest m;
  m.problem = string_field(j, "problem", "manifest");
  auto opt_path = [&](std::string_view key) -> std::optional<fs::path> {
    if (!j.contains(key) || j[std::string(key)].is_null()) return std::nullopt;
    return fs::path(string_field(j, key, "manifest"));
  };
  m.hierarchy = opt_path("hierarchy");
  m.session = opt_path("session");
  m.ahp = opt_path("ahp");
  m.output = opt_path("output");
  if (j.contains("mode")) m.mode = parse_mode(string_field(j, "mode", "manifest"));
  if (j.contains("ranker")) m.ranker = string_field(j, "ranker", "manifest");
  if (j.contains("round_weights")) {
    if (!j["round_weights"].is_boolean()) throw ValidationError("manifest: round_weights must be boolean");
    m.round_weights = j["round_weights"].get<bool>();
  }
  return m;
}

Json manifest_to_json(const RunManifest& m) {
  Json j{{"problem", m.problem.generic_string()}};
  if (m.hierarchy) j["hierarchy"] = m.hierarchy->generic_string();
  if (m.session) j["session"] = m.session->generic_string();
  if (m.ahp) j["ahp"] = m.ahp->generic_string();
  j["mode"] = std::string(to_string(m.mode));
  j["ranker"] = m.ranker;
  j["round_weights"] = m.round_weights;
  if (m.output) j["output"] = m.output->generic_string();
  return j;
}

RunManifest load_manifest(const fs::path& path) {
  const std::string origin = path.string();
  return with_origin(origin, [&] { return manifest_from_json(parse_json(read_file(path), origin)); });
}

ValidationReport validate_manifest(const RunManifest& m) {
  ValidationReport r;
  if (m.problem.empty()) r.error("missing_problem", "manifest needs a problem path");
  const bool needs_session = m.mode == WeightingMode::SubjectiveOnly || m.mode == WeightingMode::Combined;
  if (needs_session && !m.hierarchy && !m.session) {
    r.error("missing_session", fmt::format("mode '{}' needs a hierarchy or session path", to_string(m.mode)));
  }
  if (m.hierarchy && m.session) r.error("ambiguous_session", "give either a hierarchy or a session, not both");
  if (m.mode == WeightingMode::AHP && !m.ahp) r.error("missing_ahp", "mode 'ahp' needs an ahp matrix path");
  if (m.ranker != "topsis") r.error("unknown_ranker", fmt::format("unknown ranker '{}'", m.ranker));
  return r;
}

namespace {

template <typename F>
auto stage(std::string_view name, F&& f) -> decltype(f()) {
  const auto prefix = [&](const std::exception& e) { return fmt::format("stage '{}': {}", name, e.what()); };
  try {
    return f();
  } catch (const IoError& e) {
    throw IoError(prefix(e));
  } catch (const NumericError& e) {
    throw NumericError(prefix(e));
  } catch (const ValidationError& e) {
    throw ValidationError(prefix(e));
  }
}

}  // namespace

RunArtifact run_manifest(const RunManifest& m, const fs::path& base_dir) {
  const auto report = validate_manifest(m);
  if (!report.ok()) throw ValidationError("invalid manifest: " + report.summary());
  auto resolve = [&](const fs::path& p) { return p.is_absolute() ? p : base_dir / p; };

  Json inputs = Json::array();
  auto record = [&](std::string_view role, const fs::path& p) {
    const std::string bytes = read_file(resolve(p));
    inputs.push_back({{"role", role}, {"path", p.generic_string()}, {"sha256", sha256_hex(bytes)}});
  };

  const DecisionProblem problem = stage("load", [&] {
    record("problem", m.problem);
    return load_problem(resolve(m.problem));
  });
  const auto codes = problem.codes();

  Json weights = Json::object();
  Json warnings = Json::array();
  for (const auto& w : validate_problem(problem).warnings()) warnings.push_back(w.message);

  std::optional<WeightVector> subjective;
  std::optional<double> z;
  if (m.mode == WeightingMode::SubjectiveOnly || m.mode == WeightingMode::Combined) {
    subjective = stage("elicitation", [&] {
      if (m.hierarchy) {
        record("hierarchy", *m.hierarchy);
        const auto h = load_hierarchy(resolve(*m.hierarchy));
        for (const auto& g : h.groups) {
          if (g.session) {
            for (const auto& w : validate_session(*g.session).warnings()) {
              warnings.push_back(fmt::format("group '{}': {}", g.label, w.message));
            }
          }
        }
        return elicitation::compose_hierarchy(h, codes);
      }
      record("session", *m.session);
      const auto s = load_session(resolve(*m.session));
      for (const auto& w : validate_session(s).warnings()) warnings.push_back(w.message);
      auto sol = elicitation::solve_subjective(s);
      z = sol.z;
      return sol.weights.reordered(codes);
    });
    weights["subjective"] = weights_to_json(*subjective, z);
  }

  std::optional<WeightVector> used;
  switch (m.mode) {
    case WeightingMode::SubjectiveOnly:
      used = subjective;
      break;
    case WeightingMode::ObjectiveOnly:
      used = stage("weighting", [&] { return weighting::objective_weights(problem); });
      weights["objective"] = weights_to_json(*used);
      break;
    case WeightingMode::Combined: {
      const auto wo = stage("weighting", [&] { return weighting::objective_weights(problem); });
      weights["objective"] = weights_to_json(wo);
      used = stage("weighting", [&] { return weighting::combine(*subjective, wo); });
      for (const auto& code : weighting::erased_preferences(*subjective, wo)) {
        warnings.push_back(fmt::format("criterion '{}' has zero objective weight; its subjective weight is erased", code));
      }
      weights["final"] = weights_to_json(*used);
      break;
    }
    case WeightingMode::AHP:
      used = stage("baseline", [&] {
        record("ahp", *m.ahp);
        return baselines::ahp_hierarchy_weights(load_ahp(resolve(*m.ahp)), codes);
      });
      weights["ahp"] = weights_to_json(*used);
      break;
    case WeightingMode::CRITIC:
      used = stage("baseline", [&] { return baselines::critic_weights(problem); });
      weights["critic"] = weights_to_json(*used);
      break;
  }

  const auto result = stage("ranking", [&] {
    return ranking::make_ranker(m.ranker, {m.round_weights})->rank(problem, *used);
  });

  Json doc;
  doc["schema"] = kRunSchema;
  doc["tool"] = Json{{"name", kToolName}, {"version", tool_version()}};
  doc["manifest"] = Json{{"mode", to_string(m.mode)}, {"ranker", m.ranker}, {"round_weights", m.round_weights}};
  doc["inputs"] = std::move(inputs);
  doc["weights"] = std::move(weights);
  doc["ranking"] = ranking_to_json(result);
  doc["warnings"] = std::move(warnings);

  RunArtifact artifact{doc, doc.dump(2) + "\n"};
  if (m.output) write_file(resolve(*m.output), artifact.text);
  return artifact;
}

}  // namespace somit::io
