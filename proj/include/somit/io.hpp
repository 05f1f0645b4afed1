#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "somit/baselines.hpp"
#include "somit/elicitation.hpp"
#include "somit/model.hpp"
#include "somit/ranking.hpp"
#include "somit/sensitivity.hpp"

namespace somit::io {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kToolName = "somit";
inline constexpr std::string_view kRunSchema = "somit-run/1";
std::string_view tool_version();

// ---- raw files ----------------------------------------------------------------

// Throws IoError when the file cannot be read or written.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);
std::string sha256_hex(std::string_view bytes);

// Parses text as JSON; syntax errors become ValidationError with the
// position and `origin` in the message.
Json parse_json(std::string_view text, std::string_view origin);

// ---- problems -----------------------------------------------------------------

enum class ProblemFormat { Json, Csv };

DecisionProblem problem_from_json(const Json& j);
Json problem_to_json(const DecisionProblem& p);
DecisionProblem parse_problem_csv(std::string_view text, std::string_view origin = "<csv>");
std::string problem_to_csv(const DecisionProblem& p);

// Format picked by extension (.csv), JSON otherwise. The result is validated.
DecisionProblem load_problem(const std::filesystem::path& path);
DecisionProblem parse_problem(std::string_view text, ProblemFormat format,
                              std::string_view origin = "<input>");

// ---- sessions and hierarchies -------------------------------------------------

ComparisonSession session_from_json(const Json& j);
Json session_to_json(const ComparisonSession& s);
ComparisonSession load_session(const std::filesystem::path& path);

HierarchySpec hierarchy_from_json(const Json& j);
Json hierarchy_to_json(const HierarchySpec& h);
HierarchySpec load_hierarchy(const std::filesystem::path& path);

// ---- weights, rankings, reports -----------------------------------------------

Json weights_to_json(const WeightVector& w, std::optional<double> z = std::nullopt);
WeightVector weights_from_json(const Json& j);
WeightVector load_weights(const std::filesystem::path& path);

Json ranking_to_json(const ranking::RankingResult& r);

// ---- baselines ----------------------------------------------------------------

baselines::PairwiseMatrix pairwise_from_json(const Json& j);
Json pairwise_to_json(const baselines::PairwiseMatrix& m);
// Accepts either a flat pairwise matrix or {"groups": ..., "members": {...}}.
baselines::AhpHierarchy ahp_from_json(const Json& j);
baselines::AhpHierarchy load_ahp(const std::filesystem::path& path);

// ---- scenarios ----------------------------------------------------------------

sensitivity::PerturbationScenario scenario_from_json(const Json& j);
Json scenario_to_json(const sensitivity::PerturbationScenario& s);
sensitivity::PerturbationScenario load_scenario(const std::filesystem::path& path);
Json report_to_json(const sensitivity::RobustnessReport& r);

// ---- formatting ---------------------------------------------------------------

// Fixed-point with '.' regardless of locale.
std::string fixed(double v, int decimals = 4);

// ---- manifests ----------------------------------------------------------------

enum class WeightingMode { SubjectiveOnly, ObjectiveOnly, Combined, AHP, CRITIC };

std::string_view to_string(WeightingMode m);
WeightingMode parse_mode(std::string_view text);

struct RunManifest {
  std::filesystem::path problem;
  std::optional<std::filesystem::path> hierarchy;
  std::optional<std::filesystem::path> session;
  std::optional<std::filesystem::path> ahp;
  WeightingMode mode = WeightingMode::Combined;
  std::string ranker = "topsis";
  bool round_weights = false;
  std::optional<std::filesystem::path> output;
};

// Relative paths stay relative; run_manifest resolves them against base_dir.
RunManifest manifest_from_json(const Json& j);
Json manifest_to_json(const RunManifest& m);
RunManifest load_manifest(const std::filesystem::path& path);
ValidationReport validate_manifest(const RunManifest& m);

struct RunArtifact {
  Json document;
  std::string text;  // serialized document, newline-terminated
};

// Executes the pipeline. Errors are rethrown with the failing stage named.
// Writes `output` (resolved against base_dir) when the manifest sets one.
RunArtifact run_manifest(const RunManifest& m, const std::filesystem::path& base_dir);

}  // namespace somit::io
