// SPDX-License-Identifier: Apache-2.0
#include "ocs/xlat/translator.hpp"

namespace ocs::xlat {

using model::json;

Translator::Translator(std::string device_id, emu::Vendor vendor, model::ConnInfo target)
    : device_id_(std::move(device_id)),
      client_(Converter::make(vendor), std::move(target)) {
  client_.set_event_callback([this](const sbi::Notification& n) { on_vendor_event(n); });
}

Translator::~Translator() { stop(); }

void Translator::start(int north_port) {
  north_.start(north_port, [this](net::LineSocket& s) { handle_north(s); });
}

void Translator::stop() {
  north_.stop();
  client_.close();
}

void Translator::on_vendor_event(const sbi::Notification& raw) {
  sbi::Notification n = raw;
  n.ts = sbi::unix_now();  // vendor protocols carry no timestamps
  const std::string line = sbi::notification_to_json(n).dump();
  std::lock_guard lk(subs_mu_);
  for (auto* s : subs_) s->write_line(line);
}

json Translator::do_edit_config(const json& payload) {
  auto p = sbi::edit_payload_from_json(payload);
  std::lock_guard lk(ds_mu_);

  if (!p.creates.empty() || !p.deletes.empty()) {
    // remember what a failed batch must restore
    std::map<std::string, model::InternalConnection> deleted_backup;
    for (const auto& d : p.deletes) {
      auto it = ds_connections_.find(d);
      if (it != ds_connections_.end()) deleted_backup[d] = it->second;
    }
    auto results = client_.apply_edits(p.creates, p.deletes);
    size_t idx = 0;
    std::string first_err;
    std::vector<model::InternalConnection> undo_creates;  // re-create deleted ones
    std::vector<std::string> undo_deletes;                // drop created ones
    for (size_t i = 0; i < p.creates.size(); ++i, ++idx) {
      if (results[idx].first)
        undo_deletes.push_back(p.creates[i].name);
      else if (first_err.empty())
        first_err = results[idx].second;
    }
    for (size_t i = 0; i < p.deletes.size(); ++i, ++idx) {
      if (results[idx].first) {
        auto it = deleted_backup.find(p.deletes[i]);
        if (it != deleted_backup.end()) undo_creates.push_back(it->second);
      } else if (first_err.empty()) {
        first_err = results[idx].second;
      }
    }
    if (!first_err.empty()) {
      // keep the payload all-or-nothing on the device
      try {
        client_.apply_edits(undo_creates, undo_deletes);
      } catch (const VendorError&) {
        // device is already failing; the sanity check will catch the residue
      }
      throw VendorError(first_err);
    }
    for (const auto& c : p.creates) ds_connections_[c.name] = c;
    for (const auto& d : p.deletes) ds_connections_.erase(d);
  }

  for (const auto& m : p.monitors) {
    client_.set_monitor(m);
    if (m.enabled)
      ds_monitors_[m.port] = m;
    else {
      ds_monitors_.erase(m.port);
      ds_alarms_.erase(m.port);
    }
  }
  for (const auto& a : p.alarms) {
    client_.set_alarm(a);
    auto& stored = ds_alarms_[a.port];
    stored.port = a.port;
    if (a.high_dbm) stored.high_dbm = a.high_dbm;
    if (a.low_dbm) stored.low_dbm = a.low_dbm;
  }
  return "ok";
}

json Translator::do_get() {
  std::lock_guard lk(ds_mu_);
  sbi::DeviceState st;
  st.connections = client_.list();  // actual device state, not the intent
  for (const auto& [port, m] : ds_monitors_) {
    try {
      st.power.push_back({port, client_.power(port)});
    } catch (const VendorError&) {
      // monitor vanished on the device; omit the reading
    }
  }
  return sbi::device_state_to_json(st);
}

void Translator::handle_north(net::LineSocket& s) {
  bool subscribed = false;
  while (auto line = s.read_line()) {
    auto j = json::parse(*line, nullptr, false);
    if (j.is_discarded() || !j.contains("rpc-id") || !j.contains("rpc")) continue;
    const auto id = j["rpc-id"];
    const std::string rpc = j["rpc"].get<std::string>();
    auto reply = [&](const json& body) {
      s.write_line(json{{"rpc-id", id}, {"reply", body}}.dump());
    };
    auto fail = [&](const std::string& msg) {
      s.write_line(
          json{{"rpc-id", id}, {"error", {{"code", "rpc-error"}, {"message", msg}}}}.dump());
    };
    try {
      if (rpc == "hello") {
        // south-side liveness; no vendor traffic
        if (client_.alive())
          reply("ok");
        else
          fail("vendor device unreachable");
      } else if (rpc == "edit-config") {
        reply(do_edit_config(j.value("payload", json::object())));
      } else if (rpc == "get") {
        reply(do_get());
      } else if (rpc == "subscribe") {
        if (!subscribed) {
          std::lock_guard lk(subs_mu_);
          subs_.insert(&s);
          subscribed = true;
        }
        client_.ensure_open();  // events only flow while the south side lives
        reply("ok");
      } else {
        fail("unknown rpc: " + rpc);
      }
    } catch (const std::exception& e) {
      fail(e.what());
    }
  }
  if (subscribed) {
    std::lock_guard lk(subs_mu_);
    subs_.erase(&s);
  }
}

}  // namespace ocs::xlat
