#pragma once

// Model pool, background customization jobs and query routing.
//
// Pool layout:
//   <pool_dir>/generic.model
//   <pool_dir>/<app_id>/v<N>.model
//   <pool_dir>/<app_id>/summary.json
//   <pool_dir>/registry.json
//
// Readers take an immutable snapshot per request; writers build a new
// snapshot and publish it with one pointer store.

#include <fcntl.h>
#include <unistd.h>

#include <cctype>
#include <condition_variable>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "chameleon/core.hpp"
#include "chameleon/model.hpp"
#include "chameleon/oracle.hpp"
#include "chameleon/trainer.hpp"

namespace chameleon {

enum class AppState : std::uint8_t { Pending, Training, Ready, Failed };

inline const char* to_string(AppState s) {
  switch (s) {
    case AppState::Pending: return "pending";
    case AppState::Training: return "training";
    case AppState::Ready: return "ready";
    case AppState::Failed: return "failed";
  }
  return "?";
}

inline AppState parse_app_state(std::string_view s) {
  if (s == "pending") return AppState::Pending;
  if (s == "training") return AppState::Training;
  if (s == "ready") return AppState::Ready;
  if (s == "failed") return AppState::Failed;
  throw Error(ErrorCode::InvalidInput, "unknown app state '" + std::string(s) + "'");
}

struct AppStatus {
  std::string app_id;
  AppState state = AppState::Pending;
  int version = 0;  // 0: nothing published yet
  std::optional<std::string> diagnostic;

  json to_json() const {
    json j;
    j["app_id"] = app_id;
    j["state"] = to_string(state);
    j["version"] = version;
    if (diagnostic) j["diagnostic"] = *diagnostic;
    return j;
  }
};

struct ServedModel {
  Model model;
  std::string name;  // "generic" or "custom:<app_id>:v<N>"
};

struct ClassifyResponse {
  ApiOutput labels;
  std::string model;

  json to_json() const {
    json j = chameleon::to_json(labels);
    j["model"] = model;
    return j;
  }
};

struct ServeOptions {
  std::size_t jobs = 1;
  TrainConfig train;  // scheme is forced to CHAMELEON
  // Test hook called at named points of swap_model; throwing simulates a crash.
  std::function<void(std::string_view)> fault_hook;
};

namespace serving_detail {

inline void fsync_path(const std::filesystem::path& p, bool directory) {
  const int fd = ::open(p.c_str(), directory ? O_RDONLY | O_DIRECTORY : O_RDONLY);
  if (fd < 0) return;
  ::fsync(fd);
  ::close(fd);
}

/// tmp file, fsync, rename over the target, fsync the directory.
inline void durable_write(const std::filesystem::path& path, std::string_view data) {
  auto tmp = path;
  tmp += ".tmp";
  write_file(tmp, data);
  fsync_path(tmp, false);
  std::filesystem::rename(tmp, path);
  fsync_path(path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path(), true);
}

}  // namespace serving_detail

class ModelPool {
 public:
  explicit ModelPool(std::filesystem::path pool_dir, ServeOptions options = {})
      : dir_(std::move(pool_dir)), options_(std::move(options)) {
    std::filesystem::create_directories(dir_);
    snapshot_ = std::make_shared<const Snapshot>();
    recover();
    const std::size_t n = std::max<std::size_t>(1, options_.jobs);
    for (std::size_t i = 0; i < n; ++i) workers_.emplace_back([this] { work(); });
  }

  ModelPool(const ModelPool&) = delete;
  ModelPool& operator=(const ModelPool&) = delete;

  ~ModelPool() {
    {
      std::lock_guard lock(queue_mu_);
      stopping_ = true;
    }
    queue_cv_.notify_all();
    for (auto& t : workers_) t.join();
  }

  const std::filesystem::path& dir() const { return dir_; }

  /// Installs (and persists) the generic model.
  void set_generic(const Model& model) {
    std::lock_guard lock(write_mu_);
    serving_detail::durable_write(dir_ / "generic.model", serialize_model(model));
    auto next = std::make_shared<Snapshot>(*snapshot());
    next->generic = std::make_shared<const ServedModel>(ServedModel{model, "generic"});
    publish(std::move(next));
  }

  bool has_generic() const { return snapshot()->generic != nullptr; }

  /// Queues a CHAMELEON fine-tuning job; returns the pending status.
  AppStatus register_app(const DecisionSummary& summary, const std::filesystem::path& dataset_ref) {
    const auto report = validate_summary(summary);
    CHAMELEON_REQUIRE(report.ok(), ErrorCode::InvalidInput, "invalid summary: " + report.to_string());
    CHAMELEON_REQUIRE(!summary.is_range_kind(), ErrorCode::Unsupported,
                      "value-range summaries cannot be used to customize a label model");
    CHAMELEON_REQUIRE(is_safe_app_id(summary.app_id), ErrorCode::InvalidInput,
                      "app_id '" + summary.app_id + "' is not usable as a pool directory name");
    std::error_code ec;
    CHAMELEON_REQUIRE(std::filesystem::is_regular_file(dataset_ref, ec), ErrorCode::InvalidInput,
                      "dataset '" + dataset_ref.string() + "' is not readable");
    AppStatus status;
    {
      std::lock_guard lock(write_mu_);
      auto it = apps_.find(summary.app_id);
      if (it != apps_.end()) {
        const auto s = it->second.status.state;
        CHAMELEON_REQUIRE(s != AppState::Pending && s != AppState::Training, ErrorCode::Conflict,
                          "training in progress for '" + summary.app_id + "'");
      }
      auto& entry = apps_[summary.app_id];
      entry.status.app_id = summary.app_id;
      entry.status.state = AppState::Pending;
      entry.status.diagnostic.reset();
      entry.summary = summary;
      entry.dataset_ref = dataset_ref;
      std::filesystem::create_directories(dir_ / summary.app_id);
      serving_detail::durable_write(dir_ / summary.app_id / "summary.json", serialize_summary(summary));
      persist_registry();
      status = entry.status;
    }
    {
      std::lock_guard lock(queue_mu_);
      queue_.push_back(summary.app_id);
    }
    queue_cv_.notify_one();
    return status;
  }

  AppStatus get_status(const std::string& app_id) const {
    std::lock_guard lock(write_mu_);
    auto it = apps_.find(app_id);
    CHAMELEON_REQUIRE(it != apps_.end(), ErrorCode::NotFound, "unknown app '" + app_id + "'");
    return it->second.status;
  }

  std::vector<AppStatus> list_apps() const {
    std::lock_guard lock(write_mu_);
    std::vector<AppStatus> out;
    for (const auto& [id, e] : apps_) out.push_back(e.status);
    return out;
  }

  /// Publishes `model` as the next version of `app_id`.
  int swap_model(const std::string& app_id, const Model& model) {
    return swap_model_bytes(app_id, serialize_model(model));
  }

  /// Same, from serialized bytes; a checksum failure leaves everything as is.
  int swap_model_bytes(const std::string& app_id, const std::string& bytes) {
    Model model = deserialize_model(bytes);
    std::lock_guard lock(write_mu_);
    auto it = apps_.find(app_id);
    CHAMELEON_REQUIRE(it != apps_.end(), ErrorCode::NotFound, "unknown app '" + app_id + "'");
    Entry& entry = it->second;
    const int version = entry.status.version + 1;
    const auto rel = std::filesystem::path(app_id) / ("v" + std::to_string(version) + ".model");
    std::filesystem::create_directories(dir_ / app_id);
    serving_detail::durable_write(dir_ / rel, bytes);
    hook("after_model_write");

    Entry updated = entry;
    updated.status.version = version;
    updated.status.state = AppState::Ready;
    updated.status.diagnostic.reset();
    updated.model_path = rel;
    std::swap(entry, updated);
    try {
      persist_registry();
    } catch (...) {
      std::swap(entry, updated);
      throw;
    }
    hook("after_registry_write");

    model.version = version;
    auto next = std::make_shared<Snapshot>(*snapshot());
    next->custom[app_id] =
        std::make_shared<const ServedModel>(ServedModel{std::move(model), custom_name(app_id, version)});
    publish(std::move(next));
    return version;
  }

  /// Routes to the app's published model when there is one, else generic.
  ClassifyResponse classify(const std::optional<std::string>& app_id, std::span<const double> features) const {
    const auto snap = snapshot();
    std::shared_ptr<const ServedModel> served = snap->generic;
    if (app_id) {
      auto it = snap->custom.find(*app_id);
      if (it != snap->custom.end()) served = it->second;
    }
    CHAMELEON_REQUIRE(served != nullptr, ErrorCode::Unavailable, "no generic model loaded");
    const auto scores = forward(served->model, features);
    ClassifyResponse r;
    r.labels = to_api_output(served->model.vocab, scores).keep_if_score_at_least(served->model.theta);
    r.model = served->name;
    return r;
  }

  /// Applies the app's registered summary to an output (debug path).
  DecisionOutcome decide_for(const std::string& app_id, const ApiOutput& output) const {
    DecisionSummary summary;
    {
      std::lock_guard lock(write_mu_);
      auto it = apps_.find(app_id);
      CHAMELEON_REQUIRE(it != apps_.end(), ErrorCode::NotFound, "unknown app '" + app_id + "'");
      summary = it->second.summary;
    }
    return decide(output, summary);
  }

  /// Blocks until no job is queued or running.
  void wait_idle() {
    std::unique_lock lock(queue_mu_);
    idle_cv_.wait(lock, [this] { return queue_.empty() && running_ == 0; });
  }

  static std::string custom_name(const std::string& app_id, int version) {
    return "custom:" + app_id + ":v" + std::to_string(version);
  }

 private:
  struct Snapshot {
    std::shared_ptr<const ServedModel> generic;
    std::map<std::string, std::shared_ptr<const ServedModel>> custom;
  };

  struct Entry {
    AppStatus status;
    DecisionSummary summary;
    std::filesystem::path dataset_ref;
    std::filesystem::path model_path;  // relative to the pool dir
  };

  static bool is_safe_app_id(const std::string& id) {
    if (id.empty() || id == "." || id == ".." || id.size() > 128) return false;
    return std::all_of(id.begin(), id.end(), [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
    });
  }

  std::shared_ptr<const Snapshot> snapshot() const { return std::atomic_load(&snapshot_); }
  void publish(std::shared_ptr<const Snapshot> next) { std::atomic_store(&snapshot_, std::move(next)); }

  void hook(std::string_view point) const {
    if (options_.fault_hook) options_.fault_hook(point);
  }

  // Caller holds write_mu_.
  void persist_registry() const {
    json j;
    j["generic"] = "generic.model";
    j["apps"] = json::object();
    for (const auto& [id, e] : apps_) {
      json a = e.status.to_json();
      a.erase("app_id");
      a["model"] = e.model_path.empty() ? json(nullptr) : json(e.model_path.generic_string());
      a["dataset_ref"] = e.dataset_ref.string();
      j["apps"][id] = a;
    }
    serving_detail::durable_write(dir_ / "registry.json", j.dump(2) + "\n");
  }

  void recover() {
    auto next = std::make_shared<Snapshot>();
    std::error_code ec;
    if (std::filesystem::is_regular_file(dir_ / "generic.model", ec))
      next->generic = std::make_shared<const ServedModel>(ServedModel{load_model(dir_ / "generic.model"), "generic"});

    const auto reg_path = dir_ / "registry.json";
    if (std::filesystem::is_regular_file(reg_path, ec)) {
      json j;
      try {
        j = json::parse(read_file(reg_path));
      } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidInput, std::string("corrupt registry.json: ") + e.what());
      }
      for (const auto& [id, a] : j.at("apps").items()) {
        Entry e;
        e.status.app_id = id;
        e.status.state = parse_app_state(a.at("state").get<std::string>());
        e.status.version = a.at("version").get<int>();
        if (a.contains("diagnostic")) e.status.diagnostic = a.at("diagnostic").get<std::string>();
        if (!a.at("model").is_null()) e.model_path = a.at("model").get<std::string>();
        e.dataset_ref = a.value("dataset_ref", std::string());
        try {
          e.summary = load_valid_summary(read_file(dir_ / id / "summary.json"));
        } catch (const Error& err) {
          e.status.state = AppState::Failed;
          e.status.diagnostic = std::string("summary unreadable: ") + err.what();
        }
        if (e.status.state == AppState::Pending || e.status.state == AppState::Training) {
          e.status.state = AppState::Failed;
          e.status.diagnostic = "job interrupted by restart";
        }
        if (!e.model_path.empty()) {
          try {
            Model m = load_model(dir_ / e.model_path);
            m.version = e.status.version;
            next->custom[id] =
                std::make_shared<const ServedModel>(ServedModel{std::move(m), custom_name(id, e.status.version)});
          } catch (const Error& err) {
            e.status.state = AppState::Failed;
            e.status.diagnostic = std::string("model unreadable: ") + err.what();
          }
        }
        apps_[id] = std::move(e);
      }
      std::lock_guard lock(write_mu_);
      persist_registry();
    }
    publish(std::move(next));
  }

  void set_state(const std::string& app_id, AppState state, std::optional<std::string> diagnostic = std::nullopt) {
    std::lock_guard lock(write_mu_);
    auto& st = apps_.at(app_id).status;
    st.state = state;
    st.diagnostic = std::move(diagnostic);
    persist_registry();
  }

  void work() {
    while (true) {
      std::string app_id;
      {
        std::unique_lock lock(queue_mu_);
        queue_cv_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
        if (stopping_) return;
        app_id = queue_.front();
        queue_.pop_front();
        ++running_;
      }
      run_job(app_id);
      {
        std::lock_guard lock(queue_mu_);
        --running_;
      }
      idle_cv_.notify_all();
    }
  }

  void run_job(const std::string& app_id) {
    DecisionSummary summary;
    std::filesystem::path dataset;
    {
      std::lock_guard lock(write_mu_);
      const Entry& e = apps_.at(app_id);
      summary = e.summary;
      dataset = e.dataset_ref;
    }
    try {
      set_state(app_id, AppState::Training);
      auto generic = snapshot()->generic;
      CHAMELEON_REQUIRE(generic != nullptr, ErrorCode::Unavailable, "no generic model loaded");
      auto data = read_samples_jsonl(dataset);
      drop_ambiguous(data, summary);
      TrainConfig cfg = options_.train;
      cfg.scheme = Scheme::Chameleon;
      cfg.init = generic->model;
      cfg.hidden = generic->model.hidden;
      Model model = train(data, Vocabulary(generic->model.vocab), cfg, summary);
      swap_model(app_id, model);
    } catch (const std::exception& e) {
      try {
        set_state(app_id, AppState::Failed, e.what());
      } catch (...) {
      }
    }
  }

  std::filesystem::path dir_;
  ServeOptions options_;

  std::shared_ptr<const Snapshot> snapshot_;  // accessed only through atomic_load/atomic_store

  mutable std::mutex write_mu_;  // registry, files, entries
  std::map<std::string, Entry> apps_;

  std::mutex queue_mu_;
  std::condition_variable queue_cv_;
  std::condition_variable idle_cv_;
  std::deque<std::string> queue_;
  std::size_t running_ = 0;
  bool stopping_ = false;
  std::vector<std::thread> workers_;
};

}  // namespace chameleon
