// SPDX-License-Identifier: Apache-2.0
#include "ocs/controller.hpp"

#include <algorithm>
#include <set>

namespace ocs {

using model::json;
using model::ResourceStatus;

ReconcilePolicy reconcile_policy_from_string(const std::string& s) {
  if (s == "RECONFIGURE" || s == "reconfigure") return ReconcilePolicy::RECONFIGURE;
  if (s == "MARK_UNAVAILABLE" || s == "mark_unavailable")
    return ReconcilePolicy::MARK_UNAVAILABLE;
  throw NbiError(ErrorCode::InvalidRange, "unknown reconcile policy: " + s);
}

Controller::Controller(ControllerConfig cfg) : cfg_(std::move(cfg)), wal_(cfg_.wal_path) {
  renderer_ = std::make_unique<render::OcsRenderer>(
      [this](const std::string& id) -> sbi::SbiSession& { return session(id); },
      [this](const std::string& id) { mark_unavailable_and_persist(id); });
  events::Manager::Hooks hooks;
  hooks.create_path = [this](const events::ActionSpec& a) {
    create_fiber_path(a.svc_id, a.a, a.z, a.pce_alg, a.ocs_list);
  };
  hooks.restore_path = [this](const events::ActionSpec& a) {
    restore_fiber_path(a.svc_id, a.a, a.z, a.pce_alg, a.ocs_list);
  };
  hooks.exclude_degraded = [this](const std::string& dev, const std::string& port) {
    exclude_degraded_strand(dev, port);
  };
  hooks.paths_touching = [this](const std::string& dev, const std::string& port) {
    return paths_touching_port(dev, port);
  };
  events_ = std::make_unique<events::Manager>(cfg_.journal_path, std::move(hooks));
}

Controller::~Controller() { shutdown(); }

void Controller::shutdown() {
  health_running_ = false;
  if (health_thread_.joinable()) health_thread_.join();
  events_->stop();
  std::lock_guard lk(sessions_mu_);
  for (auto& [id, s] : sessions_) s->close();
}

void Controller::set_kill_hook(std::function<void(const std::string&)> hook) {
  kill_hook_ = std::move(hook);
}

void Controller::kill_point(const std::string& stage) {
  if (kill_hook_) kill_hook_(stage);
}

// --- sessions -----------------------------------------------------------

sbi::SbiSession& Controller::session(const std::string& device_id) {
  {
    std::lock_guard lk(sessions_mu_);
    auto it = sessions_.find(device_id);
    if (it != sessions_.end()) return *it->second;
  }
  // lazily wire a session for a device known to the store (recovery path)
  model::ConnInfo conn;
  if (auto sw = store_.find_switch(device_id)) {
    conn = sw->conn;
  } else if (auto t = store_.find_terminal(device_id)) {
    conn = t->conn;
  } else {
    throw NbiError(ErrorCode::NotFound, "no such device: " + device_id);
  }
  auto s = std::make_unique<sbi::SbiSession>(device_id, conn, cfg_.rpc_timeout);
  s->set_notification_sink(
      [this](const sbi::Notification& n) { events_->on_notification(n); });
  std::lock_guard lk(sessions_mu_);
  auto [it, inserted] = sessions_.emplace(device_id, std::move(s));
  return *it->second;
}

std::unique_ptr<sbi::SbiSession> Controller::probe_device(const std::string& id,
                                                          const model::ConnInfo& conn) {
  auto s = std::make_unique<sbi::SbiSession>(id, conn, cfg_.rpc_timeout);
  s->set_notification_sink(
      [this](const sbi::Notification& n) { events_->on_notification(n); });
  try {
    s->open();
  } catch (const sbi::ConnError& e) {
    throw NbiError(ErrorCode::ConnectionFailed, e.what());
  }
  if (!s->hello())
    throw NbiError(ErrorCode::ConnectionFailed, id + " did not answer hello");
  s->subscribe();
  return s;
}

void Controller::adopt_session(const std::string& id, std::unique_ptr<sbi::SbiSession> s) {
  std::lock_guard lk(sessions_mu_);
  sessions_[id] = std::move(s);
}

void Controller::mark_unavailable_and_persist(const std::string& ocs_id) {
  store_.mark_switch_status(ocs_id, ResourceStatus::UNAVAILABLE);
  wal_.append(wal::RecordKind::RESOURCE, "status",
              json{{"object_id", ocs_id}, {"object_type", "switch"}, {"status", "UNAVAILABLE"}});
}

// --- registration ---------------------------------------------------------

void Controller::add_switch(const model::OcsNode& node) {
  if (store_.has_id(node.id))
    throw NbiError(ErrorCode::AlreadyExist, "resource id already exists: " + node.id);
  if (!node.conn.valid() || node.tx_ports.empty() || node.rx_ports.empty())
    throw NbiError(ErrorCode::InvalidRange, "malformed switch registration");
  auto s = probe_device(node.id, node.conn);
  store_.add_switch(node);
  wal_.append(wal::RecordKind::RESOURCE, "put", json{{"type", "switch"}, {"obj", to_json(node)}});
  adopt_session(node.id, std::move(s));
}

void Controller::add_terminal(const model::Terminal& t) {
  if (store_.has_id(t.id))
    throw NbiError(ErrorCode::AlreadyExist, "resource id already exists: " + t.id);
  if (!t.conn.valid())
    throw NbiError(ErrorCode::InvalidRange, "malformed terminal registration");
  auto s = probe_device(t.id, t.conn);
  store_.add_terminal(t);
  wal_.append(wal::RecordKind::RESOURCE, "put",
              json{{"type", "terminal"}, {"obj", to_json(t)}});
  adopt_session(t.id, std::move(s));
}

void Controller::add_link(const model::FiberLink& l) {
  store_.add_link(l);
  wal_.append(wal::RecordKind::RESOURCE, "put", json{{"type", "link"}, {"obj", to_json(l)}});
}

void Controller::create_network(const std::string& topology_text) {
  model::Topology topo = model::parse_topology_text(topology_text);
  // probe every device before touching the store: a failure mid-file must
  // leave no trace
  std::map<std::string, std::unique_ptr<sbi::SbiSession>> probed;
  for (const auto& [id, node] : topo.nodes) {
    if (store_.has_id(id))
      throw NbiError(ErrorCode::AlreadyExist, "resource id already exists: " + id);
    probed[id] = probe_device(id, node.conn);
  }
  for (const auto& [id, term] : topo.terminals) {
    if (store_.has_id(id))
      throw NbiError(ErrorCode::AlreadyExist, "resource id already exists: " + id);
    probed[id] = probe_device(id, term.conn);
  }
  store_.add_network(topo);  // atomic: throws with the store unchanged
  wal_.append(wal::RecordKind::RESOURCE, "put",
              json{{"type", "network"}, {"doc", model::topology_to_doc(topo)}});
  for (auto& [id, s] : probed) adopt_session(id, std::move(s));
}

void Controller::update_resource_status(const std::string& object_id,
                                        const std::string& object_type,
                                        const std::string& status) {
  auto type = model::object_type_from_string(object_type);
  ResourceStatus st;
  try {
    st = model::status_from_string(status);
  } catch (const std::exception&) {
    throw NbiError(ErrorCode::InvalidRange, "status must be AVAILABLE or UNAVAILABLE");
  }
  store_.update_resource_status(object_id, type, st);
  wal_.append(wal::RecordKind::RESOURCE, "status",
              json{{"object_id", object_id}, {"object_type", object_type}, {"status", status}});
}

// --- fiber-path control -----------------------------------------------------

json Controller::create_fiber_path(const std::string& svc_id, const std::string& a,
                                   const std::string& z, std::optional<std::string> pce_alg,
                                   std::optional<std::vector<std::string>> ocs_list) {
  if (store_.find_path(svc_id))
    throw NbiError(ErrorCode::AlreadyExist, "path already exists: " + svc_id);
  fpce::PathRequest req;
  req.a = a;
  req.z = z;
  if (pce_alg) req.algorithm = *pce_alg;
  req.forced_hops = std::move(ocs_list);
  auto route = fpce_.compute_path(req, store_.view());
  auto path = fpce::make_fiber_path(svc_id, a, z, route);
  store_.allocate_path_resources(path);
  try {
    kill_point("create:before-device-config");
    render::AtomicCommand cmd;
    cmd.deadline = cfg_.rpc_timeout;
    for (auto& payload : fpce::Engine::generate_create_configs(route, svc_id)) {
      render::OcsCommand oc;
      oc.ocs_id = payload.ocs_id;
      oc.forward = payload;
      oc.revert = render::OcsRenderer::invert(payload, {});
      cmd.commands.push_back(std::move(oc));
    }
    renderer_->execute_atomic(cmd);
    kill_point("create:before-persist");
    wal_.append(wal::RecordKind::PATH, "put", to_json(path));
    store_.put_path(path);
    kill_point("create:after-persist");
  } catch (...) {
    store_.release_path_resources(svc_id);
    store_.erase_path(svc_id);
    throw;
  }
  return to_json(path);
}

void Controller::delete_fiber_path(const std::string& svc_id) {
  auto path = store_.find_path(svc_id);
  if (!path) throw NbiError(ErrorCode::NotFound, "path not found: " + svc_id);

  kill_point("delete:before-device-config");
  render::AtomicCommand cmd;
  cmd.deadline = cfg_.rpc_timeout;
  for (auto& payload : fpce::Engine::generate_delete_configs(*path)) {
    render::OcsCommand oc;
    oc.ocs_id = payload.ocs_id;
    oc.forward = payload;
    oc.revert = render::OcsRenderer::invert(payload, path->per_ocs_configs.at(payload.ocs_id));
    cmd.commands.push_back(std::move(oc));
  }
  renderer_->execute_atomic(cmd);  // on failure the path stays provisioned
  kill_point("delete:before-persist");
  wal_.append(wal::RecordKind::PATH, "delete", json{{"svc_id", svc_id}});
  store_.erase_path(svc_id);
  store_.release_path_resources(svc_id);
  kill_point("delete:after-persist");
}

json Controller::restore_fiber_path(const std::string& svc_id, const std::string& a,
                                    const std::string& z, std::optional<std::string> pce_alg,
                                    std::optional<std::vector<std::string>> ocs_list) {
  auto path = store_.find_path(svc_id);
  if (!path) throw NbiError(ErrorCode::NotFound, "path not found: " + svc_id);
  if (path->a != a || path->z != z)
    throw NbiError(ErrorCode::NotFound,
                   "path " + svc_id + " does not run between " + a + " and " + z);
  delete_fiber_path(svc_id);
  // a blocked re-create leaves the old path deleted by design: the signal is
  // already gone and resurrecting the broken route would mask the failure
  return create_fiber_path(svc_id, a, z, std::move(pce_alg), std::move(ocs_list));
}

void Controller::update_path_availability(const std::string& svc_id,
                                          const std::string& status) {
  ResourceStatus st;
  try {
    st = model::status_from_string(status);
  } catch (const std::exception&) {
    throw NbiError(ErrorCode::InvalidRange, "status must be AVAILABLE or UNAVAILABLE");
  }
  store_.update_path_availability(svc_id, st);
  wal_.append(wal::RecordKind::PATH, "availability",
              json{{"svc_id", svc_id}, {"status", status}});
}

// --- events -----------------------------------------------------------------

void Controller::add_event(const std::string& event_id, const std::string& event_type,
                           const std::string& ocs, const std::string& port,
                           double threshold_dbm) {
  if (events_->has_event(event_id))
    throw NbiError(ErrorCode::AlreadyExist, "event already exists: " + event_id);
  events::EventSpec spec;
  spec.event_id = event_id;
  spec.type = events::event_type_from_string(event_type);
  spec.ocs = ocs;
  spec.port = port;
  spec.threshold_dbm = threshold_dbm;

  bool port_known = false;
  if (auto sw = store_.find_switch(ocs)) {
    port_known = sw->tx_ports.count(port) || sw->rx_ports.count(port);
  } else if (store_.find_terminal(ocs)) {
    port_known = true;  // terminal port labels are free-form
  } else {
    throw NbiError(ErrorCode::NotFound, "no such device: " + ocs);
  }
  if (!port_known)
    throw NbiError(ErrorCode::InvalidRange, "no such port on " + ocs + ": " + port);
  if (!sbi::threshold_in_range(threshold_dbm))
    throw NbiError(ErrorCode::InvalidRange, "threshold out of representable range");

  sbi::EditPayload payload;
  payload.monitors.push_back({port, true, std::nullopt});
  sbi::AlarmConfig alarm;
  alarm.port = port;
  if (spec.type == events::EventSpec::Type::SIGNAL_DETECTION)
    alarm.high_dbm = threshold_dbm;
  else
    alarm.low_dbm = threshold_dbm;
  payload.alarms.push_back(alarm);
  try {
    auto& s = session(ocs);
    s.edit_config(payload);
    s.subscribe();
  } catch (const std::exception& e) {
    throw NbiError(ErrorCode::PathOperFailed,
                   std::string("device rejected monitor/alarm configuration: ") + e.what());
  }

  events_->put_event(spec);
  wal_.append(wal::RecordKind::EVENT, "put",
              json{{"event_id", event_id},
                   {"event_type", event_type},
                   {"ocs", ocs},
                   {"port", port},
                   {"threshold", threshold_dbm}});
}

void Controller::create_action(const std::string& act_id, const std::string& svc_id,
                               const std::string& a, const std::string& z,
                               std::optional<std::string> pce_alg,
                               std::optional<std::vector<std::string>> ocs_list) {
  if (events_->find_action(act_id))
    throw NbiError(ErrorCode::AlreadyExist, "action already exists: " + act_id);
  if (!store_.find_terminal(a))
    throw NbiError(ErrorCode::NotFound, "terminal not found: " + a);
  if (!store_.find_terminal(z))
    throw NbiError(ErrorCode::NotFound, "terminal not found: " + z);
  events::ActionSpec spec{act_id, svc_id, a, z, pce_alg, ocs_list};
  events_->put_action(spec);
  json body{{"act_id", act_id}, {"svc_id", svc_id}, {"a", a}, {"z", z}};
  if (pce_alg) body["pce_alg"] = *pce_alg;
  if (ocs_list) body["ocs_list"] = *ocs_list;
  wal_.append(wal::RecordKind::ACTION, "put", body);
}

void Controller::delete_action(const std::string& act_id, const std::string& svc_id) {
  auto act = events_->find_action(act_id);
  // Table 1 passes both ids; treat the pair as a consistency check
  if (!act || act->svc_id != svc_id)
    throw NbiError(ErrorCode::NotFound, "no action " + act_id + " for service " + svc_id);
  events_->erase_action(act_id);
  wal_.append(wal::RecordKind::ACTION, "delete", json{{"act_id", act_id}});
}

void Controller::create_event_handler(const std::string& event_id, const std::string& act_id) {
  if (!events_->has_event(event_id))
    throw NbiError(ErrorCode::NotFound, "event not found: " + event_id);
  if (!events_->find_action(act_id))
    throw NbiError(ErrorCode::NotFound, "action not found: " + act_id);
  if (events_->has_event_binding(event_id, act_id))
    throw NbiError(ErrorCode::AlreadyExist, "handler already bound");
  events_->bind_event_handler(event_id, act_id);
  wal_.append(wal::RecordKind::HANDLER, "put",
              json{{"kind", "event"}, {"key", event_id}, {"act_id", act_id}});
}

void Controller::create_alarm_handler(const std::string& svc_id, const std::string& act_id) {
  if (!store_.find_path(svc_id))
    throw NbiError(ErrorCode::NotFound, "path not found: " + svc_id);
  if (!events_->find_action(act_id))
    throw NbiError(ErrorCode::NotFound, "action not found: " + act_id);
  if (events_->has_alarm_binding(svc_id, act_id))
    throw NbiError(ErrorCode::AlreadyExist, "handler already bound");
  events_->bind_alarm_handler(svc_id, act_id);
  wal_.append(wal::RecordKind::HANDLER, "put",
              json{{"kind", "alarm"}, {"key", svc_id}, {"act_id", act_id}});
}

// --- event-manager hooks ------------------------------------------------------

void Controller::exclude_degraded_strand(const std::string& device, const std::string& port) {
  for (const auto& [id, l] : store_.topology().links) {
    const bool feeds = l.dst == device && l.dst_port == port;
    const bool sources = l.src == device && l.src_port == port;
    if (!feeds && !sources) continue;
    store_.update_resource_status(id, model::ObjectType::Link, ResourceStatus::UNAVAILABLE);
    wal_.append(wal::RecordKind::RESOURCE, "status",
                json{{"object_id", id}, {"object_type", "link"}, {"status", "UNAVAILABLE"}});
    return;
  }
}

std::vector<std::string> Controller::paths_touching_port(const std::string& device,
                                                         const std::string& port) const {
  std::vector<std::string> out;
  for (const auto& p : store_.all_paths()) {
    if (p.a == device || p.z == device) {
      out.push_back(p.svc_id);
      continue;
    }
    auto it = p.per_ocs_configs.find(device);
    if (it == p.per_ocs_configs.end()) continue;
    for (const auto& c : it->second) {
      if (c.rx_port == port || c.tx_port == port) {
        out.push_back(p.svc_id);
        break;
      }
    }
  }
  return out;
}

// --- recovery -----------------------------------------------------------------

void Controller::apply_record(const wal::Record& r) {
  switch (r.kind) {
    case wal::RecordKind::RESOURCE: {
      if (r.op == "status") {
        store_.update_resource_status(r.body.at("object_id").get<std::string>(),
                                      model::object_type_from_string(
                                          r.body.at("object_type").get<std::string>()),
                                      model::status_from_string(
                                          r.body.at("status").get<std::string>()));
        return;
      }
      const std::string type = r.body.at("type").get<std::string>();
      if (type == "switch") store_.add_switch(model::node_from_json(r.body.at("obj")));
      else if (type == "terminal") store_.add_terminal(model::terminal_from_json(r.body.at("obj")));
      else if (type == "link") store_.add_link(model::link_from_json(r.body.at("obj")));
      else if (type == "network") store_.add_network(model::parse_topology_doc(r.body.at("doc")));
      return;
    }
    case wal::RecordKind::PATH: {
      if (r.op == "put") {
        auto p = model::path_from_json(r.body);
        store_.allocate_path_resources(p);
        store_.put_path(p);
      } else if (r.op == "delete") {
        const auto svc = r.body.at("svc_id").get<std::string>();
        store_.erase_path(svc);
        store_.release_path_resources(svc);
      } else if (r.op == "availability") {
        store_.update_path_availability(r.body.at("svc_id").get<std::string>(),
                                        model::status_from_string(
                                            r.body.at("status").get<std::string>()));
      }
      return;
    }
    case wal::RecordKind::EVENT: {
      events::EventSpec e;
      e.event_id = r.body.at("event_id").get<std::string>();
      e.type = events::event_type_from_string(r.body.at("event_type").get<std::string>());
      e.ocs = r.body.at("ocs").get<std::string>();
      e.port = r.body.at("port").get<std::string>();
      e.threshold_dbm = r.body.at("threshold").get<double>();
      events_->put_event(e);
      return;
    }
    case wal::RecordKind::ACTION: {
      if (r.op == "delete") {
        events_->erase_action(r.body.at("act_id").get<std::string>());
        return;
      }
      events::ActionSpec a;
      a.act_id = r.body.at("act_id").get<std::string>();
      a.svc_id = r.body.at("svc_id").get<std::string>();
      a.a = r.body.at("a").get<std::string>();
      a.z = r.body.at("z").get<std::string>();
      if (r.body.contains("pce_alg")) a.pce_alg = r.body.at("pce_alg").get<std::string>();
      if (r.body.contains("ocs_list"))
        a.ocs_list = r.body.at("ocs_list").get<std::vector<std::string>>();
      events_->put_action(a);
      return;
    }
    case wal::RecordKind::HANDLER: {
      const std::string kind = r.body.at("kind").get<std::string>();
      const std::string key = r.body.at("key").get<std::string>();
      const std::string act = r.body.at("act_id").get<std::string>();
      if (kind == "event")
        events_->bind_event_handler(key, act);
      else
        events_->bind_alarm_handler(key, act);
      return;
    }
  }
}

model::json Controller::recover() {
  for (const auto& r : wal_.replay()) {
    try {
      apply_record(r);
    } catch (const std::exception&) {
      // a record that no longer applies must not block recovery
    }
  }
  // reconnect to every registered device; unreachable ones are handled by
  // the reconciliation pass
  auto topo = store_.topology();
  for (const auto& [id, node] : topo.nodes) {
    try {
      auto& s = session(id);
      s.open();
      s.subscribe();
    } catch (const std::exception&) {
    }
  }
  for (const auto& [id, term] : topo.terminals) {
    try {
      auto& s = session(id);
      s.open();
      s.subscribe();
    } catch (const std::exception&) {
    }
  }
  auto report = reconcile();
  if (wal_.record_count() > cfg_.wal_compact_threshold) {
    // full-state snapshot replaces the historical log
    std::vector<wal::Record> live;
    auto dump = store_.dump();
    wal::Record net;
    net.kind = wal::RecordKind::RESOURCE;
    net.op = "put";
    net.body = json{{"type", "network"},
                    {"doc", model::topology_to_doc(store_.topology())}};
    live.push_back(net);
    // statuses and ports are embedded in the topology objects already;
    // paths/events/actions/handlers follow as puts
    for (const auto& p : store_.all_paths())
      live.push_back({0, wal::RecordKind::PATH, "put", to_json(p)});
    wal_.compact(live);
  }
  events_->start();
  return report;
}

model::json Controller::reconcile() {
  json paths_report = json::array();
  json orphans_removed = json::array();
  json unreachable = json::array();

  // one state fetch per device
  std::map<std::string, std::optional<sbi::DeviceState>> states;
  auto topo = store_.topology();
  for (const auto& [id, node] : topo.nodes) {
    try {
      states[id] = session(id).get_state();
    } catch (const std::exception&) {
      states[id] = std::nullopt;
      unreachable.push_back(id);
      mark_unavailable_and_persist(id);
    }
  }

  // intended connection sets per device, from persisted paths
  std::map<std::string, std::map<std::string, model::InternalConnection>> intended;
  for (const auto& p : store_.all_paths()) {
    for (const auto& [dev, conns] : p.per_ocs_configs) {
      for (const auto& c : conns) intended[dev][c.name] = c;
    }
  }

  // orphan sweep first so a later repair cannot collide with leftovers
  for (auto& [dev, st] : states) {
    if (!st) continue;
    std::vector<std::string> orphans;
    for (const auto& c : st->connections) {
      auto it = intended.find(dev);
      if (it == intended.end() || !it->second.count(c.name)) orphans.push_back(c.name);
    }
    if (orphans.empty()) continue;
    sbi::EditPayload wipe;
    wipe.deletes = orphans;
    try {
      session(dev).edit_config(wipe);
      for (const auto& name : orphans)
        orphans_removed.push_back(json{{"ocs", dev}, {"name", name}});
      st = session(dev).get_state();
    } catch (const std::exception&) {
      mark_unavailable_and_persist(dev);
    }
  }

  for (const auto& p : store_.all_paths()) {
    std::string classification = "CONSISTENT";
    for (const auto& hop : p.hops) {
      auto& st = states[hop];
      if (!st) {
        classification = "QUARANTINED";
        continue;
      }
      std::set<model::InternalConnection> actual(st->connections.begin(),
                                                 st->connections.end());
      std::vector<model::InternalConnection> missing;
      for (const auto& c : p.per_ocs_configs.at(hop)) {
        if (!actual.count(c)) missing.push_back(c);
      }
      if (missing.empty()) continue;
      if (cfg_.reconcile_policy == ReconcilePolicy::RECONFIGURE) {
        sbi::EditPayload fix;
        fix.creates = missing;
        try {
          session(hop).edit_config(fix);
          st = session(hop).get_state();
          if (classification == "CONSISTENT") classification = "REPAIRED";
        } catch (const std::exception&) {
          classification = "QUARANTINED";
          mark_unavailable_and_persist(hop);
        }
      } else {
        classification = "QUARANTINED";
        mark_unavailable_and_persist(hop);
      }
    }
    if (classification == "QUARANTINED" &&
        cfg_.reconcile_policy == ReconcilePolicy::MARK_UNAVAILABLE) {
      auto stored = store_.find_path(p.svc_id);
      if (stored) {
        stored->status = ResourceStatus::UNAVAILABLE;
        store_.put_path(*stored);
      }
    }
    paths_report.push_back(json{{"svc_id", p.svc_id}, {"status", classification}});
  }

  json report{{"policy", cfg_.reconcile_policy == ReconcilePolicy::RECONFIGURE
                             ? "RECONFIGURE"
                             : "MARK_UNAVAILABLE"},
              {"paths", paths_report},
              {"orphans_removed", orphans_removed},
              {"unreachable", unreachable}};
  {
    std::lock_guard lk(report_mu_);
    last_reconcile_ = report;
  }
  return report;
}

model::json Controller::reconcile_report() const {
  std::lock_guard lk(report_mu_);
  return last_reconcile_.is_null() ? json{{"paths", json::array()}} : last_reconcile_;
}

model::json Controller::audit() const {
  auto violations = store_.audit();
  return json{{"violations", violations}, {"clean", violations.empty()}};
}

// --- health -----------------------------------------------------------------

void Controller::start_health_checker() {
  if (health_running_.exchange(true)) return;
  health_thread_ = std::thread([this] { health_loop(); });
}

void Controller::health_loop() {
  while (health_running_.load()) {
    auto topo = store_.topology();
    for (const auto& [id, node] : topo.nodes) {
      if (!health_running_.load()) return;
      bool up = false;
      try {
        up = session(id).hello();
      } catch (const std::exception&) {
      }
      if (!up && node.status == ResourceStatus::AVAILABLE) {
        mark_unavailable_and_persist(id);
      } else if (up && node.status == ResourceStatus::UNAVAILABLE &&
                 cfg_.auto_restore_on_hello) {
        store_.mark_switch_status(id, ResourceStatus::AVAILABLE);
        wal_.append(wal::RecordKind::RESOURCE, "status",
                    json{{"object_id", id},
                         {"object_type", "switch"},
                         {"status", "AVAILABLE"}});
      }
    }
    for (int i = 0; i < 50 && health_running_.load(); ++i)
      std::this_thread::sleep_for(cfg_.health_period / 50);
  }
}

}  // namespace ocs
