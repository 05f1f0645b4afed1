#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "somit/io.hpp"
#include "somit/model.hpp"
#include "somit/ranking.hpp"

// Project-oriented JSON API under /v1/. The Service class is transport-free
// (method, path, query, body in; status and JSON out) so it can be driven
// directly; serve() binds it to an HTTP listener.
namespace somit::service {

using io::Json;

struct Request {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;

  // Splits "path?key=value&..." into path and query.
  static Request from_target(std::string method, std::string_view target, std::string body = {});
};

struct Response {
  int status = 200;
  Json body;
};

// One elicitation level: the group level, one group's members, or the flat
// criteria list.
struct Level {
  std::string name;
  std::vector<std::string> items;
  std::optional<std::size_t> median;
  std::map<std::string, ScaleValue> answers;
  std::optional<ExtremeComparison> extreme;
  bool equal = false;

  bool complete() const;
  ComparisonSession session() const;  // requires a median
};

struct Snapshot {
  std::uint64_t revision = 0;
  DecisionProblem problem;
  std::vector<Level> levels;
  bool hierarchical = false;

  // Results for this revision. Failures are kept as messages.
  std::optional<WeightVector> subjective;
  std::optional<WeightVector> objective;
  std::optional<WeightVector> final_weights;
  std::optional<ranking::RankingResult> final_ranking;
  std::optional<ranking::RankingResult> objective_ranking;
  std::optional<std::string> subjective_error;
  std::optional<std::string> objective_error;
  std::optional<std::string> ranking_error;

  bool elicitation_complete() const;
};

class Project {
 public:
  Project(std::string id, DecisionProblem problem);

  const std::string& id() const { return id_; }
  Snapshot snapshot() const;

  // Applies one comparison-endpoint body. Returns the response; only 2xx
  // responses change state (and bump the revision). `on_accept` runs under
  // the project lock after an accepted change, so journal order matches
  // application order.
  Response submit(const std::string& level, const Json& body,
                  const std::function<void()>& on_accept = {});

 private:
  std::string id_;
  mutable std::shared_mutex mutex_;
  Snapshot state_;
};

class Service {
 public:
  // With a store directory, every accepted mutation is appended to
  // <dir>/<project id>.jsonl and replayed on construction.
  explicit Service(std::optional<std::filesystem::path> store_dir = std::nullopt);

  Response handle(const Request& request);
  Response handle(std::string method, std::string_view target, std::string body = {}) {
    return handle(Request::from_target(std::move(method), target, std::move(body)));
  }

  std::size_t project_count() const;

 private:
  Response create_project(const Request& r);
  Response get_project(const std::string& id);
  Response submit(const std::string& id, const std::string& level, const Request& r);
  Response weights(const std::string& id, const Request& r);
  Response ranking(const std::string& id, const Request& r);
  Response whatif(const std::string& id, const Request& r);

  std::shared_ptr<Project> find(const std::string& id) const;
  std::string new_id();
  void persist(const std::string& id, const Json& record);
  void replay();

  std::optional<std::filesystem::path> store_dir_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<Project>> projects_;
  std::mutex id_mutex_;
  std::uint64_t id_counter_ = 0;
  std::uint64_t id_salt_ = 0;
  std::mutex persist_mutex_;
};

Json error_body(std::string_view code, std::string_view detail);

// HTTP binding for a Service. bind() with port 0 picks a free port.
class HttpListener {
 public:
  explicit HttpListener(Service& service);
  ~HttpListener();
  HttpListener(const HttpListener&) = delete;
  HttpListener& operator=(const HttpListener&) = delete;

  int bind(const std::string& host, int port);  // bound port, or -1
  bool run();                                   // blocks until stop()
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Blocking convenience wrapper; false when the port cannot be bound.
bool serve(Service& service, const std::string& host, int port);

}  // namespace somit::service
