// SPDX-License-Identifier: Apache-2.0
#include "ocs/sbi/protocol.hpp"

#include <chrono>

namespace ocs::sbi {

json edit_payload_to_json(const EditPayload& p) {
  json out = json::object();
  if (!p.creates.empty()) {
    json arr = json::array();
    for (const auto& c : p.creates)
      arr.push_back(json{{"name", c.name}, {"rx", c.rx_port}, {"tx", c.tx_port}});
    out["create"] = arr;
  }
  if (!p.deletes.empty()) out["delete"] = p.deletes;
  if (!p.monitors.empty()) {
    json arr = json::array();
    for (const auto& m : p.monitors) {
      json e{{"port", m.port}, {"enabled", m.enabled}};
      if (m.wavelength_nm) e["wavelength"] = *m.wavelength_nm;
      arr.push_back(e);
    }
    out["monitor"] = arr;
  }
  if (!p.alarms.empty()) {
    json arr = json::array();
    for (const auto& a : p.alarms) {
      json e{{"port", a.port}};
      if (a.high_dbm) e["high"] = *a.high_dbm;
      if (a.low_dbm) e["low"] = *a.low_dbm;
      arr.push_back(e);
    }
    out["alarm"] = arr;
  }
  return out;
}

EditPayload edit_payload_from_json(const json& j) {
  EditPayload p;
  for (const auto& c : j.value("create", json::array())) {
    p.creates.push_back({c.at("name").get<std::string>(), c.at("rx").get<std::string>(),
                         c.at("tx").get<std::string>()});
  }
  if (j.contains("delete")) p.deletes = j.at("delete").get<std::vector<std::string>>();
  for (const auto& m : j.value("monitor", json::array())) {
    MonitorConfig mc;
    mc.port = m.at("port").get<std::string>();
    mc.enabled = m.value("enabled", true);
    if (m.contains("wavelength") && !m.at("wavelength").is_null())
      mc.wavelength_nm = m.at("wavelength").get<double>();
    p.monitors.push_back(mc);
  }
  for (const auto& a : j.value("alarm", json::array())) {
    AlarmConfig ac;
    ac.port = a.at("port").get<std::string>();
    if (a.contains("high") && !a.at("high").is_null()) ac.high_dbm = a.at("high").get<double>();
    if (a.contains("low") && !a.at("low").is_null()) ac.low_dbm = a.at("low").get<double>();
    p.alarms.push_back(ac);
  }
  return p;
}

json device_state_to_json(const DeviceState& s) {
  json conns = json::array(), power = json::array();
  for (const auto& c : s.connections)
    conns.push_back(json{{"name", c.name}, {"rx", c.rx_port}, {"tx", c.tx_port}});
  for (const auto& p : s.power) power.push_back(json{{"port", p.port}, {"dbm", p.dbm}});
  return json{{"connections", conns}, {"power", power}};
}

DeviceState device_state_from_json(const json& j) {
  DeviceState s;
  for (const auto& c : j.value("connections", json::array())) {
    s.connections.push_back({c.at("name").get<std::string>(), c.at("rx").get<std::string>(),
                             c.at("tx").get<std::string>()});
  }
  for (const auto& p : j.value("power", json::array()))
    s.power.push_back({p.at("port").get<std::string>(), p.at("dbm").get<double>()});
  return s;
}

json notification_to_json(const Notification& n) {
  return json{{"notification",
               json{{"port", n.port},
                    {"kind", to_string(n.kind)},
                    {"dbm", n.measured_dbm},
                    {"ts", n.ts}}}};
}

Notification notification_from_json(const json& j) {
  const json& body = j.contains("notification") ? j.at("notification") : j;
  Notification n;
  n.port = body.at("port").get<std::string>();
  n.kind = body.at("kind").get<std::string>() == "signal-degraded"
               ? NotifKind::SIGNAL_DEGRADED
               : NotifKind::SIGNAL_DETECTED;
  n.measured_dbm = body.at("dbm").get<double>();
  n.ts = body.value("ts", 0.0);
  return n;
}

double unix_now() {
  auto now = std::chrono::system_clock::now().time_since_epoch();
  return std::chrono::duration<double>(now).count();
}

}  // namespace ocs::sbi
