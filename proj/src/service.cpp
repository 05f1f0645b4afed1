#include "somit/service.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "somit/elicitation.hpp"
#include "somit/sensitivity.hpp"
#include "somit/weighting.hpp"
#include "somit/baselines.hpp"

namespace somit::service {

namespace fs = std::filesystem;

Json error_body(std::string_view code, std::string_view detail) {
  return Json{{"error", code}, {"detail", detail}};
}

namespace {

Response fail(int status, std::string_view code, std::string_view detail) {
  return {status, error_body(code, detail)};
}

std::string percent_decode(std::string_view s) {
  std::string out;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k] == '%' && k + 2 < s.size()) {
      const auto hex = std::string(s.substr(k + 1, 2));
      char* end = nullptr;
      const long v = std::strtol(hex.c_str(), &end, 16);
      if (end == hex.c_str() + 2) {
        out += static_cast<char>(v);
        k += 2;
        continue;
      }
    }
    out += s[k] == '+' ? ' ' : s[k];
  }
  return out;
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos < path.size()) {
    const auto slash = path.find('/', pos);
    const auto part = path.substr(pos, slash == std::string_view::npos ? std::string_view::npos : slash - pos);
    if (!part.empty()) parts.push_back(percent_decode(part));
    if (slash == std::string_view::npos) break;
    pos = slash + 1;
  }
  return parts;
}

Level make_level(std::string name, std::vector<std::string> items) {
  Level l;
  l.name = std::move(name);
  l.items = std::move(items);
  return l;
}

std::vector<Level> build_levels(const DecisionProblem& p, bool& hierarchical) {
  const bool any_group = std::any_of(p.criteria.begin(), p.criteria.end(), [](const auto& c) { return c.group.has_value(); });
  const bool all_group = std::all_of(p.criteria.begin(), p.criteria.end(), [](const auto& c) { return c.group.has_value(); });
  if (any_group && !all_group) {
    throw ValidationError("group labels must be given for all criteria or for none");
  }
  std::vector<Level> levels;
  if (!any_group) {
    hierarchical = false;
    levels.push_back(make_level("criteria", p.codes()));
    return levels;
  }
  std::vector<std::string> groups;
  std::map<std::string, std::vector<std::string>> members;
  for (const auto& c : p.criteria) {
    if (!members.count(*c.group)) groups.push_back(*c.group);
    members[*c.group].push_back(c.code);
  }
  if (groups.size() == 1) {
    hierarchical = false;
    levels.push_back(make_level(groups.front(), members[groups.front()]));
    return levels;
  }
  hierarchical = true;
  if (std::find(groups.begin(), groups.end(), "groups") != groups.end()) {
    throw ValidationError("'groups' is reserved and cannot be used as a group label");
  }
  levels.push_back(make_level("groups", groups));
  for (const auto& g : groups) {
    if (members[g].size() >= 2) levels.push_back(make_level(g, members[g]));
  }
  return levels;
}

std::vector<std::string> pending_items(const Level& l) {
  std::vector<std::string> out;
  if (l.equal || !l.median) return l.equal ? out : l.items;
  for (std::size_t i = 0; i < l.items.size(); ++i) {
    if (i != *l.median && !l.answers.count(l.items[i])) out.push_back(l.items[i]);
  }
  return out;
}

// Shares of one level. `relaxed` accepts an extreme pair that no longer spans
// the highest and lowest answers (what-if overrides).
elicitation::SubjectiveSolution level_solution(const Level& l, bool relaxed) {
  if (l.equal) {
    return {elicitation::even_split(l.items, Provenance::Subjective), 0.0, 0.0};
  }
  const ComparisonSession s = l.session();
  if (!relaxed) return elicitation::solve_subjective(s);
  return elicitation::solve_judgements(s.items, elicitation::judgements(s));
}

WeightVector compose_levels(const Snapshot& s, const std::vector<Level>& levels, bool relaxed) {
  const auto codes = s.problem.codes();
  if (!s.hierarchical) return level_solution(levels.front(), relaxed).weights.reordered(codes);

  const WeightVector group_weights = level_solution(levels.front(), relaxed).weights;
  std::map<std::string, WeightVector> shares;
  for (const auto& g : group_weights.labels()) {
    const auto it = std::find_if(levels.begin() + 1, levels.end(), [&](const Level& l) { return l.name == g; });
    if (it != levels.end()) {
      shares.emplace(g, level_solution(*it, relaxed).weights);
    } else {
      for (const auto& c : s.problem.criteria) {
        if (c.group == g) shares.emplace(g, WeightVector({c.code}, {1.0}, Provenance::Subjective));
      }
    }
  }
  return elicitation::compose(group_weights, shares, codes, Provenance::Subjective);
}

void recompute(Snapshot& s) {
  s.subjective.reset();
  s.objective.reset();
  s.final_weights.reset();
  s.final_ranking.reset();
  s.objective_ranking.reset();
  s.subjective_error.reset();
  s.objective_error.reset();
  s.ranking_error.reset();

  try {
    s.objective = weighting::objective_weights(s.problem);
    s.objective_ranking = ranking::topsis(s.problem, *s.objective);
  } catch (const Error& e) {
    (s.objective ? s.ranking_error : s.objective_error) = e.what();
  }
  if (!s.elicitation_complete()) return;
  try {
    s.subjective = compose_levels(s, s.levels, false);
  } catch (const Error& e) {
    s.subjective_error = e.what();
    return;
  }
  if (!s.objective) return;
  try {
    s.final_weights = weighting::combine(*s.subjective, *s.objective);
    s.final_ranking = ranking::topsis(s.problem, *s.final_weights);
  } catch (const Error& e) {
    s.ranking_error = e.what();
  }
}

Json level_json(const Level& l) {
  Json answered = Json::object();
  for (const auto& item : l.items) {
    if (const auto it = l.answers.find(item); it != l.answers.end()) answered[item] = it->second.token;
  }
  Json j{{"level", l.name},
         {"items", l.items},
         {"median", l.median ? Json(l.items[*l.median]) : Json(nullptr)},
         {"equal", l.equal},
         {"answered", std::move(answered)},
         {"extreme", l.extreme ? Json{{"high", l.extreme->high}, {"low", l.extreme->low},
                                      {"value", l.extreme->value.token}}
                               : Json(nullptr)},
         {"pending", pending_items(l)}};

  Json next;
  const auto pending = pending_items(l);
  if (l.complete()) {
    next = Json{{"kind", "done"}};
  } else if (!l.median) {
    next = Json{{"kind", "median"}};
  } else if (!pending.empty()) {
    next = Json{{"kind", "relative"}, {"item", pending.front()}, {"against", l.items[*l.median]}};
  } else {
    const auto pair = extreme_pair(l.session());
    next = Json{{"kind", "extreme"}, {"item", pair->high}, {"against", pair->low}};
  }
  j["next"] = std::move(next);
  j["complete"] = l.complete();
  j["question_count"] = l.equal ? 0 : l.answers.size() + (l.extreme ? 1 : 0);

  Json warnings = Json::array();
  if (l.median && !l.equal) {
    for (const auto& w : validate_session(l.session()).warnings()) warnings.push_back(w.message);
  }
  j["warnings"] = std::move(warnings);
  if (l.complete()) {
    try {
      const auto sol = level_solution(l, false);
      j["weights"] = io::weights_to_json(sol.weights, l.equal ? std::nullopt : std::optional<double>(sol.z));
    } catch (const Error& e) {
      j["weights_error"] = e.what();
    }
  }
  return j;
}

void require_body_keys(const Json& j, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw ValidationError("request body must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ValidationError(fmt::format("unknown field '{}'", key));
    }
  }
}

ScaleValue body_scale(const Json& v) {
  if (v.is_string()) return parse_scale(v.get<std::string>());
  if (v.is_number()) return ScaleValue::of(v.get<double>());
  throw ScaleError(ScaleError::Kind::Malformed, "'value' must be a scale token");
}

std::string body_string(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) {
    throw ValidationError(fmt::format("field '{}' must be a string", key));
  }
  return j[key].get<std::string>();
}

struct Conflict : Error {
  using Error::Error;
};
struct Unprocessable : Error {
  using Error::Error;
};

// Applies one comparison-endpoint body to a level. Throws Conflict (409),
// Unprocessable (422), ScaleError (422) or ValidationError (400).
void apply_submission(Level& l, const Json& body) {
  require_body_keys(body, {"median", "item", "against", "value", "equal", "replace"});
  bool replace = false;
  if (body.contains("replace")) {
    if (!body["replace"].is_boolean()) throw ValidationError("'replace' must be boolean");
    replace = body["replace"].get<bool>();
  }

  if (body.contains("equal")) {
    if (body.size() != 1 || !body["equal"].is_boolean() || !body["equal"].get<bool>()) {
      throw ValidationError("'equal' must be sent alone as true");
    }
    if (l.equal || l.median || !l.answers.empty()) throw Conflict(fmt::format("level '{}' already has answers", l.name));
    l.equal = true;
    return;
  }
  if (body.contains("median")) {
    if (body.size() != 1) throw ValidationError("'median' must be sent alone");
    const std::string item = body_string(body, "median");
    const auto it = std::find(l.items.begin(), l.items.end(), item);
    if (it == l.items.end()) throw Unprocessable(fmt::format("'{}' is not an item of level '{}'", item, l.name));
    if (l.median || l.equal) throw Conflict(fmt::format("median of level '{}' is already chosen", l.name));
    l.median = static_cast<std::size_t>(it - l.items.begin());
    return;
  }

  const std::string item = body_string(body, "item");
  if (!body.contains("value")) throw ValidationError("missing field 'value'");
  if (l.equal) throw Conflict(fmt::format("level '{}' is an even split and takes no comparisons", l.name));
  if (!l.median) throw Conflict(fmt::format("choose the median of level '{}' first", l.name));
  const auto idx = std::find(l.items.begin(), l.items.end(), item);
  if (idx == l.items.end()) throw Unprocessable(fmt::format("'{}' is not an item of level '{}'", item, l.name));
  const std::string& median = l.items[*l.median];
  const std::string against = body.contains("against") ? body_string(body, "against") : median;
  const ScaleValue value = body_scale(body["value"]);

  if (against == median) {
    if (item == median) throw Unprocessable("the median is not compared with itself");
    if (l.answers.count(item) && !replace) {
      throw Conflict(fmt::format("'{}' is already answered at level '{}'", item, l.name));
    }
    l.answers[item] = value;
    if (l.extreme) {
      const auto pair = extreme_pair(l.session());
      if (!pair || pair->high != l.extreme->high || pair->low != l.extreme->low) l.extreme.reset();
    }
    return;
  }

  if (l.items.size() < 3) throw Unprocessable("two-item levels take no extreme comparison");
  if (!pending_items(l).empty()) throw Conflict("answer every comparison against the median first");
  const auto pair = extreme_pair(l.session());
  if (pair->high != item || pair->low != against) {
    throw Unprocessable(fmt::format("extreme comparison must be '{}' against '{}'", pair->high, pair->low));
  }
  if (l.extreme && !replace) throw Conflict(fmt::format("level '{}' is already complete", l.name));
  l.extreme = ExtremeComparison{item, against, value};
}

Json weights_bundle(const std::optional<WeightVector>& ws, const std::optional<WeightVector>& wo,
                    const std::optional<WeightVector>& wf) {
  Json j = Json::object();
  if (ws) j["subjective"] = io::weights_to_json(*ws);
  if (wo) j["objective"] = io::weights_to_json(*wo);
  if (wf) j["final"] = io::weights_to_json(*wf);
  return j;
}

}  // namespace

// ---- Request ------------------------------------------------------------------

Request Request::from_target(std::string method, std::string_view target, std::string body) {
  Request r;
  r.method = std::move(method);
  r.body = std::move(body);
  const auto q = target.find('?');
  r.path = std::string(target.substr(0, q));
  if (q != std::string_view::npos) {
    std::string_view rest = target.substr(q + 1);
    while (!rest.empty()) {
      const auto amp = rest.find('&');
      const auto kv = rest.substr(0, amp);
      const auto eq = kv.find('=');
      r.query[percent_decode(kv.substr(0, eq))] = eq == std::string_view::npos ? "" : percent_decode(kv.substr(eq + 1));
      if (amp == std::string_view::npos) break;
      rest = rest.substr(amp + 1);
    }
  }
  return r;
}

// ---- Level / Snapshot -------------------------------------------------------------

bool Level::complete() const {
  if (equal) return true;
  if (!median) return false;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i != *median && !answers.count(items[i])) return false;
  }
  return items.size() < 3 || extreme.has_value();
}

ComparisonSession Level::session() const {
  return ComparisonSession{items, median.value(), answers, extreme};
}

bool Snapshot::elicitation_complete() const {
  return std::all_of(levels.begin(), levels.end(), [](const Level& l) { return l.complete(); });
}

// ---- Project -------------------------------------------------------------------

Project::Project(std::string id, DecisionProblem problem) : id_(std::move(id)) {
  require_valid(problem);
  state_.problem = std::move(problem);
  state_.levels = build_levels(state_.problem, state_.hierarchical);
  state_.revision = 1;
  recompute(state_);
}

Snapshot Project::snapshot() const {
  std::shared_lock lock(mutex_);
  return state_;
}

Response Project::submit(const std::string& level, const Json& body, const std::function<void()>& on_accept) {
  std::unique_lock lock(mutex_);
  const auto it = std::find_if(state_.levels.begin(), state_.levels.end(),
                               [&](const Level& l) { return l.name == level; });
  if (it == state_.levels.end()) return fail(404, "not_found", fmt::format("unknown level '{}'", level));

  Level updated = *it;
  try {
    apply_submission(updated, body);
  } catch (const Conflict& e) {
    return fail(409, "conflict", e.what());
  } catch (const Unprocessable& e) {
    return fail(422, "unprocessable", e.what());
  } catch (const ScaleError& e) {
    return fail(422, "invalid_scale", e.what());
  } catch (const ValidationError& e) {
    return fail(400, "bad_request", e.what());
  }

  *it = std::move(updated);
  ++state_.revision;
  recompute(state_);
  if (on_accept) on_accept();

  Json out{{"id", id_}, {"revision", state_.revision}, {"level", level_json(*it)},
           {"elicitation_complete", state_.elicitation_complete()}};
  if (state_.subjective) out["subjective"] = io::weights_to_json(*state_.subjective);
  if (state_.subjective_error) out["subjective_error"] = *state_.subjective_error;
  return {200, std::move(out)};
}

// ---- Service -------------------------------------------------------------------

Service::Service(std::optional<fs::path> store_dir) : store_dir_(std::move(store_dir)) {
  std::random_device rd;
  id_salt_ = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  if (store_dir_) {
    fs::create_directories(*store_dir_);
    replay();
  }
}

std::size_t Service::project_count() const {
  std::shared_lock lock(mutex_);
  return projects_.size();
}

std::string Service::new_id() {
  std::lock_guard lock(id_mutex_);
  std::mt19937_64 rng(id_salt_ + ++id_counter_);
  return fmt::format("p{:016x}", rng());
}

std::shared_ptr<Project> Service::find(const std::string& id) const {
  std::shared_lock lock(mutex_);
  const auto it = projects_.find(id);
  return it == projects_.end() ? nullptr : it->second;
}

void Service::persist(const std::string& id, const Json& record) {
  if (!store_dir_) return;
  std::lock_guard lock(persist_mutex_);
  std::ofstream out(*store_dir_ / (id + ".jsonl"), std::ios::app);
  out << record.dump() << '\n';
}

void Service::replay() {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(*store_dir_)) {
    if (entry.path().extension() == ".jsonl") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    std::ifstream in(file);
    std::string line;
    std::shared_ptr<Project> project;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const Json rec = Json::parse(line, nullptr, false);
      if (rec.is_discarded()) break;
      const std::string op = rec.value("op", "");
      if (op == "create") {
        project = std::make_shared<Project>(rec.at("id").get<std::string>(), io::problem_from_json(rec.at("problem")));
      } else if (op == "submit" && project) {
        project->submit(rec.at("level").get<std::string>(), rec.at("body"));
      }
    }
    if (project) projects_[project->id()] = project;
  }
}

Response Service::handle(const Request& r) {
  const auto parts = split_path(r.path);
  const auto method_not_allowed = [&] { return fail(405, "method_not_allowed", r.method + " " + r.path); };
  try {
    if (parts.size() < 2 || parts[0] != "v1") return fail(404, "not_found", r.path);
    if (parts.size() == 2 && parts[1] == "health") {
      if (r.method != "GET") return method_not_allowed();
      return {200, Json{{"status", "ok"}, {"version", io::tool_version()}}};
    }
    if (parts[1] != "projects") return fail(404, "not_found", r.path);
    if (parts.size() == 2) {
      if (r.method != "POST") return method_not_allowed();
      return create_project(r);
    }
    const std::string& id = parts[2];
    if (parts.size() == 3) {
      if (r.method != "GET") return method_not_allowed();
      return get_project(id);
    }
    if (parts.size() == 4 && parts[3] == "weights") {
      if (r.method != "GET") return method_not_allowed();
      return weights(id, r);
    }
    if (parts.size() == 4 && parts[3] == "ranking") {
      if (r.method != "GET") return method_not_allowed();
      return ranking(id, r);
    }
    if (parts.size() == 4 && parts[3] == "whatif") {
      if (r.method != "POST") return method_not_allowed();
      return whatif(id, r);
    }
    if (parts.size() == 6 && parts[3] == "sessions" && parts[5] == "comparisons") {
      if (r.method != "POST") return method_not_allowed();
      return submit(id, parts[4], r);
    }
    return fail(404, "not_found", r.path);
  } catch (const std::exception& e) {
    return fail(500, "internal", e.what());
  }
}

Response Service::create_project(const Request& r) {
  DecisionProblem problem;
  Json problem_json;
  try {
    problem_json = io::parse_json(r.body, "request body");
    problem = io::problem_from_json(problem_json);
  } catch (const Error& e) {
    return fail(400, "invalid_problem", e.what());
  }
  const auto report = validate_problem(problem);
  if (!report.ok()) {
    Json issues = Json::array();
    for (const auto& i : report.errors()) issues.push_back({{"code", i.code}, {"message", i.message}});
    Json body = error_body("invalid_problem", report.summary());
    body["issues"] = std::move(issues);
    return {400, std::move(body)};
  }
  std::shared_ptr<Project> project;
  const std::string id = new_id();
  try {
    project = std::make_shared<Project>(id, problem);
  } catch (const Error& e) {
    return fail(400, "invalid_problem", e.what());
  }
  {
    std::unique_lock lock(mutex_);
    projects_[id] = project;
  }
  persist(id, Json{{"op", "create"}, {"id", id}, {"problem", io::problem_to_json(problem)}});

  const Snapshot s = project->snapshot();
  Json levels = Json::array();
  for (const auto& l : s.levels) levels.push_back(l.name);
  Json warnings = Json::array();
  for (const auto& w : report.warnings()) warnings.push_back(w.message);
  return {201, Json{{"id", id}, {"revision", s.revision}, {"levels", std::move(levels)}, {"warnings", std::move(warnings)}}};
}

Response Service::get_project(const std::string& id) {
  const auto project = find(id);
  if (!project) return fail(404, "not_found", fmt::format("unknown project '{}'", id));
  const Snapshot s = project->snapshot();
  Json levels = Json::array();
  for (const auto& l : s.levels) levels.push_back(level_json(l));
  Json out{{"id", id},
           {"revision", s.revision},
           {"problem", io::problem_to_json(s.problem)},
           {"hierarchical", s.hierarchical},
           {"levels", std::move(levels)},
           {"elicitation_complete", s.elicitation_complete()},
           {"weights", weights_bundle(s.subjective, s.objective, s.final_weights)}};
  return {200, std::move(out)};
}

Response Service::submit(const std::string& id, const std::string& level, const Request& r) {
  const auto project = find(id);
  if (!project) return fail(404, "not_found", fmt::format("unknown project '{}'", id));
  Json body;
  try {
    body = io::parse_json(r.body, "request body");
  } catch (const Error& e) {
    return fail(400, "bad_request", e.what());
  }
  return project->submit(level, body, [&] {
    persist(id, Json{{"op", "submit"}, {"level", level}, {"body", body}});
  });
}

Response Service::weights(const std::string& id, const Request& r) {
  const auto project = find(id);
  if (!project) return fail(404, "not_found", fmt::format("unknown project '{}'", id));
  const Snapshot s = project->snapshot();
  const auto it = r.query.find("mode");
  const std::string mode = it == r.query.end() || it->second.empty() ? "final" : it->second;

  std::optional<WeightVector> w;
  if (mode == "objective") {
    if (!s.objective) return fail(422, "numeric_failure", s.objective_error.value_or("objective weights unavailable"));
    w = s.objective;
  } else if (mode == "subjective" || mode == "final") {
    if (!s.elicitation_complete()) return fail(409, "elicitation_incomplete", "answer every pending comparison first");
    if (s.subjective_error) return fail(422, "numeric_failure", *s.subjective_error);
    w = mode == "subjective" ? s.subjective : s.final_weights;
    if (!w) return fail(422, "numeric_failure", s.objective_error.value_or(s.ranking_error.value_or("final weights unavailable")));
  } else if (mode == "critic") {
    try {
      w = baselines::critic_weights(s.problem);
    } catch (const Error& e) {
      return fail(422, "numeric_failure", e.what());
    }
  } else {
    return fail(400, "bad_request", fmt::format("unknown mode '{}' (subjective, objective, final, critic)", mode));
  }
  return {200, Json{{"id", id}, {"revision", s.revision}, {"mode", mode}, {"weights", io::weights_to_json(*w)}}};
}

Response Service::ranking(const std::string& id, const Request& r) {
  const auto project = find(id);
  if (!project) return fail(404, "not_found", fmt::format("unknown project '{}'", id));
  const Snapshot s = project->snapshot();
  const auto it = r.query.find("mode");
  const std::string mode = it == r.query.end() || it->second.empty() ? "final" : it->second;
  const ranking::RankingResult* result = nullptr;
  if (mode == "objective") {
    if (!s.objective_ranking) {
      return fail(422, "numeric_failure", s.objective_error.value_or(s.ranking_error.value_or("ranking unavailable")));
    }
    result = &*s.objective_ranking;
  } else if (mode == "final") {
    if (!s.elicitation_complete()) return fail(409, "elicitation_incomplete", "answer every pending comparison first");
    if (!s.final_ranking) {
      return fail(422, "numeric_failure",
                  s.subjective_error.value_or(s.objective_error.value_or(s.ranking_error.value_or("ranking unavailable"))));
    }
    result = &*s.final_ranking;
  } else {
    return fail(400, "bad_request", fmt::format("unknown mode '{}' (final, objective)", mode));
  }
  return {200, Json{{"id", id}, {"revision", s.revision}, {"mode", mode}, {"ranking", io::ranking_to_json(*result)}}};
}

Response Service::whatif(const std::string& id, const Request& r) {
  const auto project = find(id);
  if (!project) return fail(404, "not_found", fmt::format("unknown project '{}'", id));
  const Snapshot s = project->snapshot();
  if (!s.final_ranking || !s.final_weights || !s.subjective || !s.objective) {
    return fail(409, "no_baseline", "complete the elicitation so a baseline ranking exists");
  }

  Json body;
  sensitivity::PerturbationScenario scenario;
  std::vector<Level> levels = s.levels;
  bool overridden = false;
  Json warnings = Json::array();
  try {
    body = io::parse_json(r.body, "request body");
    require_body_keys(body, {"scenario", "override"});
  } catch (const Error& e) {
    return fail(400, "bad_request", e.what());
  }
  try {
    if (body.contains("scenario")) scenario = io::scenario_from_json(body["scenario"]);
    if (body.contains("override")) {
      const Json& o = body["override"];
      require_body_keys(o, {"level", "item", "against", "value"});
      const std::string level = body_string(o, "level");
      const auto it = std::find_if(levels.begin(), levels.end(), [&](const Level& l) { return l.name == level; });
      if (it == levels.end()) throw Unprocessable(fmt::format("unknown level '{}'", level));
      if (it->equal) throw Unprocessable(fmt::format("level '{}' is an even split and has no comparisons", level));
      const std::string item = body_string(o, "item");
      if (std::find(it->items.begin(), it->items.end(), item) == it->items.end()) {
        throw Unprocessable(fmt::format("'{}' is not an item of level '{}'", item, level));
      }
      if (!o.contains("value")) throw ValidationError("override needs a 'value'");
      const ScaleValue value = body_scale(o["value"]);
      const std::string& median = it->items[*it->median];
      const std::string against = o.contains("against") ? body_string(o, "against") : median;
      if (against == median) {
        if (item == median) throw Unprocessable("the median is not compared with itself");
        it->answers[item] = value;
        const auto pair = extreme_pair(it->session());
        if (it->extreme && pair && (pair->high != it->extreme->high || pair->low != it->extreme->low)) {
          warnings.push_back(fmt::format(
              "level '{}': highest/lowest are now '{}'/'{}'; the answered '{}' vs '{}' comparison is kept",
              level, pair->high, pair->low, it->extreme->high, it->extreme->low));
        }
      } else {
        if (!it->extreme || it->extreme->high != item || it->extreme->low != against) {
          throw Unprocessable(fmt::format("no answered comparison of '{}' against '{}' at level '{}'", item, against, level));
        }
        it->extreme->value = value;
      }
      overridden = true;
    }
  } catch (const ScaleError& e) {
    return fail(422, "invalid_scale", e.what());
  } catch (const Unprocessable& e) {
    return fail(422, "unprocessable", e.what());
  } catch (const Error& e) {
    return fail(422, "invalid_scenario", e.what());
  }

  Json result;
  try {
    const DecisionProblem modified = sensitivity::apply_scenario(s.problem, scenario);
    const WeightVector ws = overridden ? compose_levels(s, levels, true) : *s.subjective;
    const WeightVector wo = weighting::objective_weights(modified);
    const WeightVector wf = weighting::combine(ws, wo);
    const auto ranked = ranking::topsis(modified, wf);

    Json score_delta = Json::object();
    for (std::size_t i = 0; i < ranked.alternatives.size(); ++i) {
      score_delta[ranked.alternatives[i]] = ranked.scores[i] - s.final_ranking->scores[i];
    }
    std::vector<std::size_t> old_rank(ranked.alternatives.size()), new_rank(ranked.alternatives.size());
    for (std::size_t k = 0; k < ranked.order.size(); ++k) {
      old_rank[s.final_ranking->order[k]] = k + 1;
      new_rank[ranked.order[k]] = k + 1;
    }
    Json changes = Json::array();
    for (std::size_t i = 0; i < ranked.alternatives.size(); ++i) {
      if (old_rank[i] != new_rank[i]) {
        changes.push_back({{"alternative", ranked.alternatives[i]}, {"from", old_rank[i]}, {"to", new_rank[i]}});
      }
    }
    result = Json{
        {"id", id},
        {"revision", s.revision},
        {"baseline", Json{{"weights", weights_bundle(s.subjective, s.objective, s.final_weights)},
                          {"ranking", io::ranking_to_json(*s.final_ranking)}}},
        {"whatif", Json{{"weights", weights_bundle(ws, wo, wf)}, {"ranking", io::ranking_to_json(ranked)}}},
        {"aafd", Json{{"subjective", sensitivity::aafd_w(*s.subjective, ws)},
                      {"objective", sensitivity::aafd_w(*s.objective, wo)},
                      {"final", sensitivity::aafd_w(*s.final_weights, wf)}}},
        {"score_delta", std::move(score_delta)},
        {"rank_changes", std::move(changes)},
        {"top_preserved", ranked.order.front() == s.final_ranking->order.front()},
        {"warnings", std::move(warnings)}};
  } catch (const Error& e) {
    return fail(422, "whatif_failed", e.what());
  }
  return {200, std::move(result)};
}

}  // namespace somit::service
