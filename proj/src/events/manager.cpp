// SPDX-License-Identifier: Apache-2.0
#include "ocs/events/manager.hpp"

#include <chrono>
#include <fstream>

namespace ocs::events {

using Clock = std::chrono::steady_clock;

EventSpec::Type event_type_from_string(const std::string& s) {
  if (s == "signal_detection") return EventSpec::Type::SIGNAL_DETECTION;
  if (s == "signal_degradation") return EventSpec::Type::SIGNAL_DEGRADATION;
  throw NbiError(ErrorCode::InvalidRange, "unknown event_type: " + s);
}

const char* to_string(EventSpec::Type t) {
  return t == EventSpec::Type::SIGNAL_DETECTION ? "signal_detection" : "signal_degradation";
}

ActionJournal::ActionJournal(std::string path) : path_(std::move(path)) {}

void ActionJournal::write(const std::string& trigger, const std::string& act_id,
                          const std::string& svc_id, const std::string& outcome,
                          double elapsed_s) {
  model::json rec{{"ts", sbi::unix_now()}, {"trigger", trigger},   {"act_id", act_id},
                  {"svc_id", svc_id},      {"outcome", outcome},   {"elapsed_s", elapsed_s}};
  std::lock_guard lk(mu_);
  std::ofstream out(path_, std::ios::app);
  out << rec.dump() << "\n";
}

std::vector<model::json> ActionJournal::read_all() const {
  std::lock_guard lk(mu_);
  std::vector<model::json> out;
  std::ifstream in(path_);
  std::string line;
  while (std::getline(in, line)) {
    auto j = model::json::parse(line, nullptr, false);
    if (!j.is_discarded()) out.push_back(std::move(j));
  }
  return out;
}

Manager::Manager(std::string journal_path, Hooks hooks)
    : journal_(std::move(journal_path)), hooks_(std::move(hooks)) {}

Manager::~Manager() { stop(); }

void Manager::start() {
  std::lock_guard lk(q_mu_);
  if (running_) return;
  running_ = true;
  dispatcher_ = std::thread([this] { dispatch_loop(); });
}

void Manager::stop() {
  {
    std::lock_guard lk(q_mu_);
    if (!running_) return;
    running_ = false;
    q_cv_.notify_all();
  }
  if (dispatcher_.joinable()) dispatcher_.join();
  // actions are detached; wait for stragglers so teardown is safe
  wait_idle(std::chrono::milliseconds(30000));
}

void Manager::put_event(const EventSpec& e) {
  std::lock_guard lk(mu_);
  events_[e.event_id] = e;
}

bool Manager::has_event(const std::string& id) const {
  std::lock_guard lk(mu_);
  return events_.count(id) > 0;
}

std::optional<EventSpec> Manager::find_event(const std::string& id) const {
  std::lock_guard lk(mu_);
  auto it = events_.find(id);
  if (it == events_.end()) return std::nullopt;
  return it->second;
}

void Manager::put_action(const ActionSpec& a) {
  std::lock_guard lk(mu_);
  actions_[a.act_id] = a;
}

void Manager::erase_action(const std::string& id) {
  std::lock_guard lk(mu_);
  actions_.erase(id);
}

std::optional<ActionSpec> Manager::find_action(const std::string& id) const {
  std::lock_guard lk(mu_);
  auto it = actions_.find(id);
  if (it == actions_.end()) return std::nullopt;
  return it->second;
}

void Manager::bind_event_handler(const std::string& event_id, const std::string& act_id) {
  std::lock_guard lk(mu_);
  event_handlers_[event_id].push_back(act_id);
}

void Manager::bind_alarm_handler(const std::string& svc_id, const std::string& act_id) {
  std::lock_guard lk(mu_);
  alarm_handlers_[svc_id].push_back(act_id);
}

bool Manager::has_event_binding(const std::string& event_id, const std::string& act_id) const {
  std::lock_guard lk(mu_);
  auto it = event_handlers_.find(event_id);
  if (it == event_handlers_.end()) return false;
  for (const auto& a : it->second)
    if (a == act_id) return true;
  return false;
}

bool Manager::has_alarm_binding(const std::string& svc_id, const std::string& act_id) const {
  std::lock_guard lk(mu_);
  auto it = alarm_handlers_.find(svc_id);
  if (it == alarm_handlers_.end()) return false;
  for (const auto& a : it->second)
    if (a == act_id) return true;
  return false;
}

void Manager::on_notification(const sbi::Notification& n) {
  received_++;
  std::lock_guard lk(q_mu_);
  if (!running_) return;
  queue_.push_back(n);
  q_cv_.notify_all();
}

void Manager::dispatch_loop() {
  for (;;) {
    sbi::Notification n;
    {
      std::unique_lock lk(q_mu_);
      q_cv_.wait(lk, [&] { return !queue_.empty() || !running_; });
      if (!running_ && queue_.empty()) return;
      n = std::move(queue_.front());
      queue_.pop_front();
    }
    in_flight_++;  // the notification being matched counts as in flight

    int matches = 0;
    // user-defined events on (ocs, port, kind)
    std::vector<std::pair<EventSpec, std::vector<std::string>>> hits;
    {
      std::lock_guard lk(mu_);
      for (const auto& [id, e] : events_) {
        const bool kind_match =
            (e.type == EventSpec::Type::SIGNAL_DETECTION &&
             n.kind == sbi::NotifKind::SIGNAL_DETECTED) ||
            (e.type == EventSpec::Type::SIGNAL_DEGRADATION &&
             n.kind == sbi::NotifKind::SIGNAL_DEGRADED);
        if (!kind_match || e.ocs != n.device_id || e.port != n.port) continue;
        auto hit = event_handlers_.find(id);
        if (hit != event_handlers_.end()) hits.push_back({e, hit->second});
      }
    }
    for (const auto& [e, act_ids] : hits) {
      for (const auto& act_id : act_ids) {
        auto act = find_action(act_id);
        if (!act) continue;
        ++matches;
        const bool restore = e.type == EventSpec::Type::SIGNAL_DEGRADATION;
        launch("event:" + e.event_id, "event:" + e.event_id, *act, restore, n);
      }
    }

    // path alarms: anything on a provisioned path
    if (hooks_.paths_touching) {
      for (const auto& svc : hooks_.paths_touching(n.device_id, n.port)) {
        std::vector<std::string> act_ids;
        {
          std::lock_guard lk(mu_);
          auto it = alarm_handlers_.find(svc);
          if (it != alarm_handlers_.end()) act_ids = it->second;
        }
        for (const auto& act_id : act_ids) {
          auto act = find_action(act_id);
          if (!act) continue;
          ++matches;
          launch("alarm:" + svc, "alarm:" + svc, *act, /*restore=*/true, n);
        }
      }
    }

    if (matches == 0) dropped_++;
    in_flight_--;
    idle_cv_.notify_all();
  }
}

void Manager::launch(const std::string& trigger, const std::string& suppress_key,
                     const ActionSpec& act, bool restore, const sbi::Notification& n) {
  {
    std::lock_guard lk(mu_);
    // identical triggers are coalesced while their action is in flight
    if (!in_flight_keys_.insert(suppress_key).second) return;
  }
  in_flight_++;
  dispatched_++;
  std::thread([this, trigger, suppress_key, act, restore, n] {
    run_action(trigger, act, restore, n);
    {
      std::lock_guard lk(mu_);
      in_flight_keys_.erase(suppress_key);
    }
    in_flight_--;
    idle_cv_.notify_all();
  }).detach();
}

void Manager::run_action(const std::string& trigger, const ActionSpec& act, bool restore,
                         const sbi::Notification& n) {
  const auto t0 = Clock::now();
  std::string outcome = "ok";
  try {
    if (restore) {
      if (hooks_.exclude_degraded) hooks_.exclude_degraded(n.device_id, n.port);
      hooks_.restore_path(act);
    } else {
      hooks_.create_path(act);
    }
  } catch (const NbiError& e) {
    outcome = std::string(to_string(e.code())) + ": " + e.what();
  } catch (const std::exception& e) {
    outcome = std::string("error: ") + e.what();
  }
  const double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
  journal_.write(trigger, act.act_id, act.svc_id, outcome, elapsed);
}

bool Manager::wait_idle(std::chrono::milliseconds timeout) const {
  std::unique_lock lk(idle_mu_);
  return idle_cv_.wait_for(lk, timeout, [&] {
    std::lock_guard qlk(q_mu_);
    return queue_.empty() && in_flight_.load() == 0;
  });
}

}  // namespace ocs::events
