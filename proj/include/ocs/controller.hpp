// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "ocs/errors.hpp"
#include "ocs/events/manager.hpp"
#include "ocs/fpce/fpce.hpp"
#include "ocs/model/store.hpp"
#include "ocs/model/topology_file.hpp"
#include "ocs/render/renderer.hpp"
#include "ocs/sbi/session.hpp"
#include "ocs/wal/wal.hpp"

namespace ocs {

enum class ReconcilePolicy { RECONFIGURE, MARK_UNAVAILABLE };

ReconcilePolicy reconcile_policy_from_string(const std::string& s);

struct ControllerConfig {
  std::string wal_path = "ocs-wal.jsonl";
  std::string journal_path = "ocs-actions.jsonl";
  std::chrono::milliseconds rpc_timeout{3000};
  std::chrono::milliseconds health_period{5000};
  bool auto_restore_on_hello = false;
  ReconcilePolicy reconcile_policy = ReconcilePolicy::MARK_UNAVAILABLE;
  uint64_t wal_compact_threshold = 20000;
};

/// Thrown by the kill-point hook in crash-injection tests; it must escape the
/// normal cleanup paths the way a real crash would.
struct CrashError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The controller: resource store, path computation, atomic rendering,
/// event-driven automation, persistence and crash recovery behind the
/// Table-1 service surface. All methods are thread-safe and report failures
/// through NbiError.
class Controller {
 public:
  explicit Controller(ControllerConfig cfg);
  ~Controller();

  /// Replays the WAL, reopens device sessions, reconciles persisted paths
  /// against live device state and starts the event dispatcher. Must run
  /// before the first service call. Returns the reconciliation report.
  model::json recover();

  void start_health_checker();
  void shutdown();

  // --- resource registration and management ---------------------------
  void add_switch(const model::OcsNode& node);
  void add_terminal(const model::Terminal& t);
  void add_link(const model::FiberLink& l);
  void create_network(const std::string& topology_text);
  void update_resource_status(const std::string& object_id, const std::string& object_type,
                              const std::string& status);

  // --- fiber-path control ---------------------------------------------
  model::json create_fiber_path(const std::string& svc_id, const std::string& a,
                                const std::string& z,
                                std::optional<std::string> pce_alg = std::nullopt,
                                std::optional<std::vector<std::string>> ocs_list = std::nullopt);
  void delete_fiber_path(const std::string& svc_id);
  model::json restore_fiber_path(const std::string& svc_id, const std::string& a,
                                 const std::string& z,
                                 std::optional<std::string> pce_alg = std::nullopt,
                                 std::optional<std::vector<std::string>> ocs_list = std::nullopt);
  void update_path_availability(const std::string& svc_id, const std::string& status);

  // --- event and alarm handling ----------------------------------------
  void add_event(const std::string& event_id, const std::string& event_type,
                 const std::string& ocs, const std::string& port, double threshold_dbm);
  void create_action(const std::string& act_id, const std::string& svc_id,
                     const std::string& a, const std::string& z,
                     std::optional<std::string> pce_alg = std::nullopt,
                     std::optional<std::vector<std::string>> ocs_list = std::nullopt);
  void delete_action(const std::string& act_id, const std::string& svc_id);
  void create_event_handler(const std::string& event_id, const std::string& act_id);
  void create_alarm_handler(const std::string& svc_id, const std::string& act_id);

  // --- introspection ----------------------------------------------------
  model::json reconcile_report() const;
  model::json audit() const;
  model::ResourceStore& store() { return store_; }
  fpce::Engine& engine() { return fpce_; }
  events::Manager& events() { return *events_; }
  render::RenderMetrics last_render_metrics() const { return renderer_->last_metrics(); }

  /// Crash-injection hook; stages: "create:before-device-config",
  /// "create:before-persist", "create:after-persist" (and the delete twins).
  void set_kill_hook(std::function<void(const std::string&)> hook);

 private:
  sbi::SbiSession& session(const std::string& device_id);
  std::unique_ptr<sbi::SbiSession> probe_device(const std::string& id,
                                                const model::ConnInfo& conn);
  void adopt_session(const std::string& id, std::unique_ptr<sbi::SbiSession> s);
  void mark_unavailable_and_persist(const std::string& ocs_id);
  void kill_point(const std::string& stage);
  void apply_record(const wal::Record& r);
  model::json reconcile();
  void health_loop();

  void exclude_degraded_strand(const std::string& device, const std::string& port);
  std::vector<std::string> paths_touching_port(const std::string& device,
                                               const std::string& port) const;

  ControllerConfig cfg_;
  model::ResourceStore store_;
  fpce::Engine fpce_;
  wal::Wal wal_;
  std::unique_ptr<events::Manager> events_;
  std::unique_ptr<render::OcsRenderer> renderer_;

  std::mutex sessions_mu_;
  std::map<std::string, std::unique_ptr<sbi::SbiSession>> sessions_;

  std::thread health_thread_;
  std::atomic<bool> health_running_{false};

  mutable std::mutex report_mu_;
  model::json last_reconcile_;

  std::function<void(const std::string&)> kill_hook_;
};

}  // namespace ocs
