#include "somit/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "somit/baselines.hpp"
#include "somit/elicitation.hpp"
#include "somit/io.hpp"
#include "somit/ranking.hpp"
#include "somit/sensitivity.hpp"
#include "somit/service.hpp"
#include "somit/weighting.hpp"

namespace somit::cli {

namespace fs = std::filesystem;
using io::Json;

namespace {

struct UsageError : ValidationError {
  using ValidationError::ValidationError;
};

struct Context {
  std::istream& in;
  std::ostream& out;
  bool json = false;
};

// --out wins; otherwise $SOMIT_OUTPUT_DIR/<default_name>; otherwise nothing.
std::optional<fs::path> output_path(const std::string& flag, std::string_view default_name) {
  if (!flag.empty()) return fs::path(flag);
  if (const char* dir = std::getenv("SOMIT_OUTPUT_DIR"); dir != nullptr && *dir != '\0') {
    return fs::path(dir) / default_name;
  }
  return std::nullopt;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void print_weight_table(std::ostream& out, const std::vector<std::string>& codes,
                        const std::vector<std::pair<std::string, const WeightVector*>>& columns) {
  std::size_t width = 9;
  for (const auto& c : codes) width = std::max(width, c.size() + 2);
  std::string line = fmt::format("{:<{}}", "criterion", width);
  for (const auto& [name, _] : columns) line += fmt::format("{:>12}", name);
  out << line << '\n';
  for (const auto& c : codes) {
    line = fmt::format("{:<{}}", c, width);
    for (const auto& [_, w] : columns) line += fmt::format("{:>12}", io::fixed(w->weight_of(c)));
    out << line << '\n';
  }
}

// ---- elicit ---------------------------------------------------------------------

std::vector<std::string> split_answers(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  bool comment = false;
  const auto flush = [&] {
    const auto b = current.find_first_not_of(" \t\r");
    if (b != std::string::npos) tokens.push_back(current.substr(b, current.find_last_not_of(" \t\r") - b + 1));
    current.clear();
  };
  for (const char ch : text) {
    if (ch == '\n') {
      flush();
      comment = false;
    } else if (comment) {
      continue;
    } else if (ch == '#') {
      comment = true;
    } else if (ch == ';') {
      flush();
    } else {
      current += ch;
    }
  }
  flush();
  return tokens;
}

class Prompter {
 public:
  Prompter(std::istream& in, std::ostream& out, std::optional<std::deque<std::string>> script, bool quiet)
      : in_(in), out_(out), script_(std::move(script)), quiet_(quiet) {}

  bool scripted() const { return script_.has_value(); }
  std::ostream& out() { return quiet_ ? null_ : out_; }

  std::string ask(const std::string& prompt) {
    out() << prompt << std::flush;
    std::string answer;
    if (script_) {
      if (script_->empty()) throw ValidationError("answers ended before the elicitation was complete");
      answer = script_->front();
      script_->pop_front();
      out() << answer << '\n';
      return answer;
    }
    if (!std::getline(in_, answer)) throw ValidationError("input ended before the elicitation was complete");
    const auto b = answer.find_first_not_of(" \t\r");
    return b == std::string::npos ? std::string() : answer.substr(b, answer.find_last_not_of(" \t\r") - b + 1);
  }

  ScaleValue ask_scale(const std::string& prompt) {
    for (;;) {
      const std::string token = ask(prompt);
      try {
        return parse_scale(token);
      } catch (const ScaleError& e) {
        if (scripted()) throw;
        out() << "  " << e.what() << "; enter a value from 1/9 to 9 such as 3, 1/2 or 0.25\n";
      }
    }
  }

  std::size_t ask_index(const std::string& prompt, const std::vector<std::string>& items) {
    for (;;) {
      const std::string token = ask(prompt);
      int k = 0;
      const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), k);
      if (ec == std::errc() && ptr == token.data() + token.size() && k >= 1 && k <= static_cast<int>(items.size())) {
        return static_cast<std::size_t>(k - 1);
      }
      const auto it = std::find(items.begin(), items.end(), token);
      if (it != items.end()) return static_cast<std::size_t>(it - items.begin());
      const std::string msg = fmt::format("'{}' is not a criterion number from 1 to {}", token, items.size());
      if (scripted()) throw ValidationError(msg);
      out() << "  " << msg << '\n';
    }
  }

 private:
  std::istream& in_;
  std::ostream& out_;
  std::optional<std::deque<std::string>> script_;
  bool quiet_;
  std::ostream null_{nullptr};
};

int cmd_elicit(Context& ctx, std::string items_flag, std::size_t count, const std::string& answers_path,
               const std::string& out_flag) {
  std::vector<std::string> items;
  bool named = !items_flag.empty();
  if (named) {
    std::stringstream ss(items_flag);
    for (std::string item; std::getline(ss, item, ',');) {
      const auto b = item.find_first_not_of(' ');
      if (b != std::string::npos) items.push_back(item.substr(b, item.find_last_not_of(' ') - b + 1));
    }
  } else {
    if (count < 2) throw UsageError("give --items or --count (at least 2)");
    for (std::size_t i = 1; i <= count; ++i) items.push_back(fmt::format("C{}", i));
  }
  if (items.size() < 2) throw ValidationError("at least 2 items are needed");

  const auto target = output_path(out_flag, "session.json");
  if (!target && !ctx.json) throw UsageError("give --out, set SOMIT_OUTPUT_DIR, or use --json");

  std::optional<std::deque<std::string>> script;
  if (!answers_path.empty()) {
    const auto tokens = split_answers(io::read_file(answers_path));
    script.emplace(tokens.begin(), tokens.end());
  }
  Prompter p(ctx.in, ctx.out, std::move(script), ctx.json);
  const std::size_t n = items.size();
  const auto compare = [&](std::size_t a, std::size_t b) {
    return named ? fmt::format("Compare #{} {} with #{} {}: ", a + 1, items[a], b + 1, items[b])
                 : fmt::format("Compare Criterion #{} with #{}: ", a + 1, b + 1);
  };

  auto& out = p.out();
  out << fmt::format("You have {} criteria. Numbered 1 through {}.\n", n, n);
  if (named) {
    for (std::size_t i = 0; i < n; ++i) out << fmt::format("  {} {}\n", i + 1, items[i]);
  }
  ComparisonSession s;
  s.items = items;
  s.median_index = p.ask_index(fmt::format("->Which criterion (1-{}) you think is the median level of importance? ", n), items);
  out << fmt::format("--You chose criterion #{} as the median.\n\n", s.median_index + 1);
  out << "Enter importance of each criterion relative to the median.\n";
  for (std::size_t i = 0; i < n; ++i) {
    if (i == s.median_index) continue;
    s.comparisons[items[i]] = p.ask_scale(compare(i, s.median_index));
  }
  if (const auto pair = extreme_pair(s)) {
    const auto h = *s.index_of(pair->high);
    const auto l = *s.index_of(pair->low);
    out << fmt::format("\nHighest: {} ({}); Lowest: {} ({})\n", named ? items[h] : fmt::format("criterion #{}", h + 1),
                       s.comparisons.at(pair->high).token, named ? items[l] : fmt::format("criterion #{}", l + 1),
                       s.comparisons.at(pair->low).token);
    const ScaleValue v = p.ask_scale(compare(h, l));
    s.extreme = ExtremeComparison{pair->high, pair->low, v};
  }

  const std::string text = dump(io::session_to_json(s));
  if (target) io::write_file(*target, text);
  if (ctx.json) ctx.out << text;

  const auto sol = elicitation::solve_subjective(s);
  out << "\nOptimal subjective weights (w^s):\n";
  for (std::size_t i = 0; i < n; ++i) {
    out << fmt::format("w^s_{} = {}{}\n", i + 1, io::fixed(sol.weights.weights()[i]), named ? "  " + items[i] : "");
  }
  out << "Objective value z = " << io::fixed(sol.z, 6) << '\n';
  if (target) out << "session written to " << target->generic_string() << '\n';
  return kOk;
}

// ---- weights / rank -------------------------------------------------------------

int cmd_weights(Context& ctx, const std::string& problem_path, const std::string& session_path,
                const std::string& hierarchy_path, const std::string& mode_text, const std::string& out_flag,
                const std::string& dispersion_path) {
  const auto mode = io::parse_mode(mode_text);
  if (mode == io::WeightingMode::AHP || mode == io::WeightingMode::CRITIC) {
    throw UsageError("weights takes --mode subjective, objective or combined; use baseline-ahp or baseline-critic");
  }
  if (!session_path.empty() && !hierarchy_path.empty()) throw UsageError("give --session or --hierarchy, not both");
  const bool needs_subjective = mode != io::WeightingMode::ObjectiveOnly;
  if (needs_subjective && session_path.empty() && hierarchy_path.empty()) {
    throw UsageError(fmt::format("--mode {} needs --session or --hierarchy", mode_text));
  }

  const DecisionProblem problem = io::load_problem(problem_path);
  require_valid(problem);
  const auto codes = problem.codes();

  std::optional<WeightVector> ws, wo, wf;
  std::optional<double> z;
  if (needs_subjective) {
    if (!hierarchy_path.empty()) {
      ws = elicitation::compose_hierarchy(io::load_hierarchy(hierarchy_path), codes);
    } else {
      const auto sol = elicitation::solve_subjective(io::load_session(session_path));
      require_aligned(codes, sol.weights.labels(), "session items");
      ws = sol.weights.reordered(codes);
      z = sol.z;
    }
  }
  if (mode != io::WeightingMode::SubjectiveOnly) wo = weighting::objective_weights(problem);
  if (mode == io::WeightingMode::Combined) wf = weighting::combine(*ws, *wo);

  if (!dispersion_path.empty()) {
    std::ostringstream csv;
    weighting::write_dispersion_csv(problem, csv);
    io::write_file(dispersion_path, csv.str());
  }

  const WeightVector& primary = wf ? *wf : (wo ? *wo : *ws);
  const auto target = output_path(out_flag, "weights.json");
  if (target) io::write_file(*target, dump(io::weights_to_json(primary, wf || wo ? std::nullopt : z)));

  if (ctx.json) {
    Json j = Json::object();
    if (ws) j["subjective"] = io::weights_to_json(*ws, z);
    if (wo) j["objective"] = io::weights_to_json(*wo);
    if (wf) j["final"] = io::weights_to_json(*wf);
    ctx.out << dump(j);
    return kOk;
  }
  std::vector<std::pair<std::string, const WeightVector*>> columns;
  if (ws) columns.emplace_back("subjective", &*ws);
  if (wo) columns.emplace_back("objective", &*wo);
  if (wf) columns.emplace_back("final", &*wf);
  print_weight_table(ctx.out, codes, columns);
  if (wf) {
    for (const auto& c : weighting::erased_preferences(*ws, *wo)) {
      ctx.out << "note: objective weight of " << c << " is zero, so its subjective weight has no effect\n";
    }
  }
  if (target) ctx.out << "weights written to " << target->generic_string() << '\n';
  return kOk;
}

int cmd_rank(Context& ctx, const std::string& problem_path, const std::string& weights_path, bool round4,
             const std::string& ranker_name, const std::string& out_flag) {
  const DecisionProblem problem = io::load_problem(problem_path);
  require_valid(problem);
  const WeightVector w = io::load_weights(weights_path);
  const auto ranker = ranking::make_ranker(ranker_name, ranking::TopsisOptions{round4});
  const auto result = ranker->rank(problem, w);
  const Json j = io::ranking_to_json(result);
  if (const auto target = output_path(out_flag, "ranking.json")) io::write_file(*target, dump(j));
  if (ctx.json) {
    ctx.out << dump(j);
    return kOk;
  }
  std::size_t width = 11;
  for (const auto& a : result.alternatives) width = std::max(width, a.size() + 2);
  ctx.out << fmt::format("{:<6}{:<{}}{:>10}{:>10}{:>10}\n", "rank", "alternative", width, "score", "S+", "S-");
  for (std::size_t k = 0; k < result.order.size(); ++k) {
    const auto i = result.order[k];
    ctx.out << fmt::format("{:<6}{:<{}}{:>10}{:>10}{:>10}\n", k + 1, result.alternatives[i], width,
                           io::fixed(result.scores[i]), io::fixed(result.s_plus[i]), io::fixed(result.s_minus[i]));
  }
  return kOk;
}

// ---- sensitivity / baselines ----------------------------------------------------------

int cmd_sensitivity(Context& ctx, const std::string& problem_path, const std::string& scenario_path,
                    const std::string& methods_text, const std::string& out_flag) {
  const DecisionProblem problem = io::load_problem(problem_path);
  require_valid(problem);
  const auto scenario = io::load_scenario(scenario_path);
  std::vector<sensitivity::WeightingMethod> methods;
  std::stringstream ss(methods_text);
  for (std::string name; std::getline(ss, name, ',');) {
    if (!name.empty()) methods.push_back(sensitivity::method_by_name(name));
  }
  if (methods.empty()) throw UsageError("--methods lists no methods");
  const auto report = sensitivity::robustness_report(problem, scenario, methods);
  const Json j = io::report_to_json(report);
  if (const auto target = output_path(out_flag, "sensitivity.json")) io::write_file(*target, dump(j));
  if (ctx.json) {
    ctx.out << dump(j);
    return kOk;
  }
  ctx.out << fmt::format("{:<12}{:>10}{:>14}\n", "method", "AAFD %", "max |dw|");
  for (const auto& m : report.methods) {
    ctx.out << fmt::format("{:<12}{:>10}{:>14}\n", m.method, io::fixed(100.0 * m.aafd, 2), io::fixed(m.max_abs_change, 4));
  }
  return kOk;
}

int cmd_baseline_ahp(Context& ctx, const std::string& ahp_path, const std::string& problem_path,
                     const std::string& out_flag) {
  const auto h = io::load_ahp(ahp_path);
  std::vector<std::string> order;
  if (!problem_path.empty()) order = io::load_problem(problem_path).codes();
  const WeightVector w = baselines::ahp_hierarchy_weights(h, order);

  Json consistency = Json::array();
  const auto check = [&](const std::string& name, const baselines::PairwiseMatrix& m) {
    Json row{{"matrix", name}, {"n", m.size()}, {"lambda_max", baselines::lambda_max(m)}};
    row["cr"] = m.size() >= 3 ? Json(baselines::consistency_ratio(m)) : Json(0.0);
    consistency.push_back(std::move(row));
  };
  if (h.groups) check("groups", *h.groups);
  for (const auto& g : h.members) {
    if (g.matrix) check(g.label, *g.matrix);
  }

  if (const auto target = output_path(out_flag, "ahp_weights.json")) io::write_file(*target, dump(io::weights_to_json(w)));
  if (ctx.json) {
    ctx.out << dump(Json{{"weights", io::weights_to_json(w)}, {"consistency", std::move(consistency)}});
    return kOk;
  }
  print_weight_table(ctx.out, w.labels(), {{"ahp", &w}});
  for (const auto& row : consistency) {
    const double cr = row["cr"].get<double>();
    ctx.out << fmt::format("{}: lambda_max {} CR {}{}\n", row["matrix"].get<std::string>(),
                           io::fixed(row["lambda_max"].get<double>()), io::fixed(cr), cr > 0.1 ? " (above 0.10)" : "");
  }
  ctx.out << fmt::format("judgements required: {}\n", [&] {
    std::size_t q = h.groups ? baselines::ahp_question_count(h.groups->size()) : 0;
    for (const auto& g : h.members) q += baselines::ahp_question_count(g.members.size());
    return q;
  }());
  return kOk;
}

int cmd_baseline_critic(Context& ctx, const std::string& problem_path, const std::string& out_flag) {
  const DecisionProblem problem = io::load_problem(problem_path);
  require_valid(problem);
  const WeightVector w = baselines::critic_weights(problem);
  if (const auto target = output_path(out_flag, "critic_weights.json")) io::write_file(*target, dump(io::weights_to_json(w)));
  if (ctx.json) {
    ctx.out << dump(io::weights_to_json(w));
    return kOk;
  }
  print_weight_table(ctx.out, problem.codes(), {{"critic", &w}});
  return kOk;
}

// ---- run / serve ----------------------------------------------------------------

int cmd_run(Context& ctx, const std::string& manifest_path, const std::string& out_flag) {
  io::RunManifest m = io::load_manifest(manifest_path);
  const fs::path base = fs::path(manifest_path).parent_path();
  if (!out_flag.empty()) {
    m.output = fs::absolute(out_flag);
  } else if (!m.output) {
    if (const auto target = output_path("", "run.json")) m.output = fs::absolute(*target);
  }
  const auto artifact = io::run_manifest(m, base);
  if (ctx.json || !m.output) {
    ctx.out << artifact.text;
    return kOk;
  }
  const auto& doc = artifact.document;
  if (doc.contains("ranking")) {
    const auto& r = doc["ranking"];
    for (const auto& label : r["order"]) {
      ctx.out << fmt::format("{:<24}{:>10}\n", label.get<std::string>(), io::fixed(r["scores"][label.get<std::string>()].get<double>()));
    }
  }
  ctx.out << "artifact written to " << m.output->generic_string() << '\n';
  return kOk;
}

int cmd_serve(Context& ctx, const std::string& host, int port, const std::string& store) {
  service::Service svc(store.empty() ? std::nullopt : std::optional<fs::path>(store));
  service::HttpListener listener(svc);
  const int bound = listener.bind(host, port);
  if (bound < 0) throw IoError(fmt::format("cannot listen on {}:{}", host, port));
  ctx.out << fmt::format("listening on http://{}:{}/v1/\n", host, bound) << std::flush;
  return listener.run() ? kOk : kIo;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hybrid criteria weighting and ranking", "somit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(io::tool_version()));
  Context ctx{in, out};
  app.add_flag("--json", ctx.json, "Machine-readable output on stdout");

  std::string problem, session, hierarchy, mode = "combined", out_flag, weights_file, scenario, methods = "somit-ii,critic";
  std::string items, answers, ahp, manifest, dispersion, ranker = "topsis", host = "127.0.0.1", store;
  std::size_t count = 0;
  bool round4 = false;
  int port = 8080;

  auto* elicit = app.add_subcommand("elicit", "Median-anchored pairwise elicitation");
  elicit->add_option("--items", items, "Comma-separated item labels");
  elicit->add_option("--count", count, "Number of items, labelled C1..Cn");
  elicit->add_option("--answers", answers, "Scripted answers, separated by ';' or newlines")->check(CLI::ExistingFile);
  elicit->add_option("--out", out_flag, "Session file to write");

  auto* weights = app.add_subcommand("weights", "Subjective, objective and final weights");
  weights->add_option("--problem", problem, "Problem file (.json or .csv)")->required();
  weights->add_option("--session", session, "Flat comparison session");
  weights->add_option("--hierarchy", hierarchy, "Hierarchical comparison sessions");
  weights->add_option("--mode", mode, "subjective, objective or combined")->capture_default_str();
  weights->add_option("--out", out_flag, "Weights file to write");
  weights->add_option("--dispersion-csv", dispersion, "Write the normalized matrix, medians and dispersion");

  auto* rank = app.add_subcommand("rank", "Rank alternatives");
  rank->add_option("--problem", problem, "Problem file")->required();
  rank->add_option("--weights", weights_file, "Weights file")->required();
  rank->add_flag("--round4", round4, "Round weights to 4 decimals before ranking");
  rank->add_option("--ranker", ranker, "Ranking method")->capture_default_str();
  rank->add_option("--out", out_flag, "Ranking file to write");

  auto* sens = app.add_subcommand("sensitivity", "Weight shifts under a perturbation scenario");
  sens->add_option("--problem", problem, "Problem file")->required();
  sens->add_option("--scenario", scenario, "Scenario file")->required();
  sens->add_option("--methods", methods, "Comma-separated methods")->capture_default_str();
  sens->add_option("--out", out_flag, "Report file to write");

  auto* bahp = app.add_subcommand("baseline-ahp", "AHP weights and consistency");
  bahp->add_option("--ahp", ahp, "Pairwise matrix or AHP hierarchy file")->required();
  bahp->add_option("--problem", problem, "Problem file giving the criterion order");
  bahp->add_option("--out", out_flag, "Weights file to write");

  auto* bcritic = app.add_subcommand("baseline-critic", "CRITIC weights");
  bcritic->add_option("--problem", problem, "Problem file")->required();
  bcritic->add_option("--out", out_flag, "Weights file to write");

  auto* run = app.add_subcommand("run", "Execute a run manifest");
  run->add_option("manifest", manifest, "Manifest file")->required();
  run->add_option("--out", out_flag, "Artifact file to write");

  auto* serve = app.add_subcommand("serve", "Start the HTTP API");
  serve->add_option("--host", host)->capture_default_str();
  serve->add_option("--port", port)->capture_default_str();
  serve->add_option("--store", store, "Directory for per-project journals");

  const auto fail = [&](std::string_view kind, const std::string& message, int code) {
    std::string line = message;
    std::replace(line.begin(), line.end(), '\n', ' ');
    err << "error[" << kind << "]: " << line << '\n';
    return code;
  };

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << io::tool_version() << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), kValidation);
  }

  try {
    if (*elicit) return cmd_elicit(ctx, items, count, answers, out_flag);
    if (*weights) return cmd_weights(ctx, problem, session, hierarchy, mode, out_flag, dispersion);
    if (*rank) return cmd_rank(ctx, problem, weights_file, round4, ranker, out_flag);
    if (*sens) return cmd_sensitivity(ctx, problem, scenario, methods, out_flag);
    if (*bahp) return cmd_baseline_ahp(ctx, ahp, problem, out_flag);
    if (*bcritic) return cmd_baseline_critic(ctx, problem, out_flag);
    if (*run) return cmd_run(ctx, manifest, out_flag);
    if (*serve) return cmd_serve(ctx, host, port, store);
  } catch (const UsageError& e) {
    return fail("usage", e.what(), kValidation);
  } catch (const ValidationError& e) {
    return fail("validation", e.what(), kValidation);
  } catch (const NumericError& e) {
    return fail("numeric", e.what(), kNumeric);
  } catch (const IoError& e) {
    return fail("io", e.what(), kIo);
  } catch (const fs::filesystem_error& e) {
    return fail("io", e.what(), kIo);
  } catch (const std::exception& e) {
    return fail("validation", e.what(), kValidation);
  }
  return kValidation;
}

}  // namespace somit::cli
