// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <condition_variable>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "ocs/errors.hpp"
#include "ocs/sbi/protocol.hpp"

namespace ocs::events {

struct EventSpec {
  std::string event_id;
  enum class Type { SIGNAL_DETECTION, SIGNAL_DEGRADATION } type = Type::SIGNAL_DETECTION;
  std::string ocs;
  std::string port;
  double threshold_dbm = 0.0;
};

EventSpec::Type event_type_from_string(const std::string& s);
const char* to_string(EventSpec::Type t);

struct ActionSpec {
  std::string act_id;
  std::string svc_id;
  std::string a;
  std::string z;
  std::optional<std::string> pce_alg;
  std::optional<std::vector<std::string>> ocs_list;
};

/// Append-only record of every dispatched action; the observability surface
/// restoration tests read.
class ActionJournal {
 public:
  explicit ActionJournal(std::string path);
  void write(const std::string& trigger, const std::string& act_id, const std::string& svc_id,
             const std::string& outcome, double elapsed_s);
  std::vector<model::json> read_all() const;
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  mutable std::mutex mu_;
};

/// Event-driven automation: holds events, actions and handler bindings,
/// consumes device notifications from one ingestion queue and launches the
/// bound fiber-path actions asynchronously. No polling anywhere: with no
/// notifications arriving this module generates zero device I/O.
class Manager {
 public:
  struct Hooks {
    /// CreateFiberPath for detection-triggered actions.
    std::function<void(const ActionSpec&)> create_path;
    /// RestoreFiberPath for degradation/path-alarm actions.
    std::function<void(const ActionSpec&)> restore_path;
    /// Mark the strand feeding (device, port) UNAVAILABLE before recompute.
    std::function<void(const std::string&, const std::string&)> exclude_degraded;
    /// Paths whose resources include (device, port).
    std::function<std::vector<std::string>(const std::string&, const std::string&)>
        paths_touching;
  };

  Manager(std::string journal_path, Hooks hooks);
  ~Manager();

  void start();
  void stop();

  // --- registry (validation and persistence live in the controller) ----
  void put_event(const EventSpec& e);
  bool has_event(const std::string& id) const;
  std::optional<EventSpec> find_event(const std::string& id) const;
  void put_action(const ActionSpec& a);
  void erase_action(const std::string& id);
  std::optional<ActionSpec> find_action(const std::string& id) const;
  void bind_event_handler(const std::string& event_id, const std::string& act_id);
  void bind_alarm_handler(const std::string& svc_id, const std::string& act_id);
  bool has_event_binding(const std::string& event_id, const std::string& act_id) const;
  bool has_alarm_binding(const std::string& svc_id, const std::string& act_id) const;

  /// Ingestion entry point; wired as every session's notification sink.
  void on_notification(const sbi::Notification& n);

  ActionJournal& journal() { return journal_; }

  // --- introspection for tests ---------------------------------------
  uint64_t received_count() const { return received_.load(); }
  uint64_t dispatched_count() const { return dispatched_.load(); }
  uint64_t dropped_count() const { return dropped_.load(); }
  /// Waits until the queue is empty and no action is in flight.
  bool wait_idle(std::chrono::milliseconds timeout) const;

 private:
  void dispatch_loop();
  void run_action(const std::string& trigger, const ActionSpec& act, bool restore,
                  const sbi::Notification& n);
  void launch(const std::string& trigger, const std::string& suppress_key,
              const ActionSpec& act, bool restore, const sbi::Notification& n);

  ActionJournal journal_;
  Hooks hooks_;

  mutable std::mutex mu_;
  std::map<std::string, EventSpec> events_;
  std::map<std::string, ActionSpec> actions_;
  std::map<std::string, std::vector<std::string>> event_handlers_;  // event -> acts
  std::map<std::string, std::vector<std::string>> alarm_handlers_;  // svc -> acts
  std::set<std::string> in_flight_keys_;  // re-trigger suppression

  mutable std::mutex q_mu_;
  mutable std::condition_variable q_cv_;
  std::deque<sbi::Notification> queue_;
  bool running_ = false;
  std::thread dispatcher_;

  std::atomic<uint64_t> received_{0};
  std::atomic<uint64_t> dispatched_{0};
  std::atomic<uint64_t> dropped_{0};
  mutable std::atomic<int> in_flight_{0};
  mutable std::mutex idle_mu_;
  mutable std::condition_variable idle_cv_;
};

}  // namespace ocs::events
