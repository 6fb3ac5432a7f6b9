// SPDX-License-Identifier: Apache-2.0
#include "ocs/xlat/converter.hpp"

#include <cstdio>
#include <sstream>

namespace ocs::xlat {

namespace {

using model::json;

std::string fmt_dbm(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

class VendorA final : public Converter {
 public:
  std::string tag() const override { return "A"; }

  std::vector<std::string> edit_lines(const std::vector<InternalConnection>& creates,
                                      const std::vector<std::string>& deletes) const override {
    std::vector<std::string> lines;
    for (const auto& c : creates)
      lines.push_back("XC ADD " + c.name + " " + c.rx_port + " " + c.tx_port);
    for (const auto& d : deletes) lines.push_back("XC DEL " + d);
    return lines;
  }

  bool parse_result(const std::string& line, std::string& err) const override {
    if (line.rfind("OK", 0) == 0) return true;
    err = line.rfind("ERR ", 0) == 0 ? line.substr(4) : line;
    return false;
  }

  std::string list_query() const override { return "XC LIST"; }

  std::vector<InternalConnection> read_list(
      const std::function<std::optional<std::string>()>& next_line) const override {
    std::vector<InternalConnection> out;
    for (;;) {
      auto line = next_line();
      if (!line) throw VendorError("list reply truncated");
      if (*line == "OK") return out;
      if (line->rfind("ERR ", 0) == 0) throw VendorError(line->substr(4));
      std::istringstream is(*line);
      InternalConnection c;
      if (is >> c.name >> c.rx_port >> c.tx_port) out.push_back(c);
    }
  }

  std::string monitor_line(const sbi::MonitorConfig& m) const override {
    if (!m.enabled) return "MON " + m.port + " OFF";
    std::string line = "MON " + m.port + " ON";
    if (m.wavelength_nm) line += " WL " + fmt_dbm(*m.wavelength_nm);
    return line;
  }

  std::vector<std::string> alarm_lines(const sbi::AlarmConfig& a) const override {
    // one threshold per command on this vendor
    std::vector<std::string> lines;
    if (a.high_dbm) lines.push_back("ALARM " + a.port + " HI " + fmt_dbm(*a.high_dbm));
    if (a.low_dbm) lines.push_back("ALARM " + a.port + " LO " + fmt_dbm(*a.low_dbm));
    return lines;
  }

  std::string power_query(const std::string& port) const override { return "PWR " + port; }

  bool parse_power_reply(const std::string& line, double& dbm,
                         std::string& err) const override {
    if (line.rfind("OK ", 0) == 0) {
      dbm = std::stod(line.substr(3));
      return true;
    }
    err = line.rfind("ERR ", 0) == 0 ? line.substr(4) : line;
    return false;
  }

  bool is_event_line(const std::string& line) const override {
    return line.rfind("EVT ", 0) == 0;
  }

  std::optional<sbi::Notification> parse_event(const std::string& line) const override {
    std::istringstream is(line);
    std::string evt, port, edge, dbm;
    if (!(is >> evt >> port >> edge >> dbm)) return std::nullopt;
    sbi::Notification n;
    n.port = port;
    n.kind = edge == "HI" ? sbi::NotifKind::SIGNAL_DETECTED : sbi::NotifKind::SIGNAL_DEGRADED;
    n.measured_dbm = std::stod(dbm);
    return n;
  }
};

class VendorB final : public Converter {
 public:
  std::string tag() const override { return "B"; }

  std::vector<std::string> edit_lines(const std::vector<InternalConnection>& creates,
                                      const std::vector<std::string>& deletes) const override {
    std::vector<std::string> lines;
    for (const auto& c : creates) {
      lines.push_back(json{{"op", "connect"},
                           {"label", c.name},
                           {"in", c.rx_port},
                           {"out", c.tx_port}}
                          .dump());
    }
    for (const auto& d : deletes)
      lines.push_back(json{{"op", "disconnect"}, {"label", d}}.dump());
    return lines;
  }

  bool parse_result(const std::string& line, std::string& err) const override {
    auto j = json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      err = "malformed vendor reply";
      return false;
    }
    if (j.value("ok", false)) return true;
    err = j.value("error", "vendor error");
    return false;
  }

  std::string list_query() const override { return json{{"op", "list"}}.dump(); }

  std::vector<InternalConnection> read_list(
      const std::function<std::optional<std::string>()>& next_line) const override {
    auto line = next_line();  // the whole list arrives in one JSON reply
    if (!line) throw VendorError("list reply truncated");
    auto j = json::parse(*line, nullptr, false);
    if (j.is_discarded() || !j.value("ok", false))
      throw VendorError(j.is_discarded() ? "malformed vendor reply"
                                         : j.value("error", "vendor error"));
    std::vector<InternalConnection> out;
    for (const auto& c : j.value("connections", json::array()))
      out.push_back({c.value("label", ""), c.value("in", ""), c.value("out", "")});
    return out;
  }

  std::string monitor_line(const sbi::MonitorConfig& m) const override {
    json j{{"op", "monitor"}, {"port", m.port}, {"enabled", m.enabled}};
    if (m.wavelength_nm) j["wavelength"] = *m.wavelength_nm;
    return j.dump();
  }

  std::vector<std::string> alarm_lines(const sbi::AlarmConfig& a) const override {
    json j{{"op", "alarm"}, {"port", a.port}};
    if (a.high_dbm) j["hi"] = *a.high_dbm;
    if (a.low_dbm) j["lo"] = *a.low_dbm;
    return {j.dump()};
  }

  std::string power_query(const std::string& port) const override {
    return json{{"op", "power"}, {"port", port}}.dump();
  }

  bool parse_power_reply(const std::string& line, double& dbm,
                         std::string& err) const override {
    auto j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.value("ok", false)) {
      err = j.is_discarded() ? "malformed vendor reply" : j.value("error", "vendor error");
      return false;
    }
    dbm = j.value("dbm", sbi::kDarkDbm);
    return true;
  }

  bool is_event_line(const std::string& line) const override {
    auto j = json::parse(line, nullptr, false);
    return !j.is_discarded() && j.is_object() && j.contains("event");
  }

  std::optional<sbi::Notification> parse_event(const std::string& line) const override {
    auto j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("event")) return std::nullopt;
    const auto& e = j["event"];
    sbi::Notification n;
    n.port = e.value("port", "");
    n.kind = e.value("edge", "hi") == "hi" ? sbi::NotifKind::SIGNAL_DETECTED
                                           : sbi::NotifKind::SIGNAL_DEGRADED;
    n.measured_dbm = e.value("dbm", sbi::kDarkDbm);
    return n;
  }

};

class VendorC final : public Converter {
 public:
  std::string tag() const override { return "C"; }

  std::vector<std::string> edit_lines(const std::vector<InternalConnection>& creates,
                                      const std::vector<std::string>& deletes) const override {
    std::vector<std::string> lines;
    for (const auto& c : creates)
      lines.push_back("SET /xc/" + c.name + " rx=" + c.rx_port + " tx=" + c.tx_port);
    for (const auto& d : deletes) lines.push_back("DEL /xc/" + d);
    return lines;
  }

  bool parse_result(const std::string& line, std::string& err) const override {
    if (line.rfind("OK", 0) == 0) return true;
    err = line.rfind("ERR ", 0) == 0 ? line.substr(4) : line;
    return false;
  }

  std::string list_query() const override { return "GET /xc"; }

  std::vector<InternalConnection> read_list(
      const std::function<std::optional<std::string>()>& next_line) const override {
    std::vector<InternalConnection> out;
    for (;;) {
      auto line = next_line();
      if (!line) throw VendorError("list reply truncated");
      if (*line == "OK") return out;
      if (line->rfind("ERR ", 0) == 0) throw VendorError(line->substr(4));
      // "/xc/<name> rx=<p> tx=<p>"
      std::istringstream is(*line);
      std::string path, rx, tx;
      if (!(is >> path >> rx >> tx) || path.rfind("/xc/", 0) != 0) continue;
      InternalConnection c;
      c.name = path.substr(4);
      c.rx_port = rx.rfind("rx=", 0) == 0 ? rx.substr(3) : rx;
      c.tx_port = tx.rfind("tx=", 0) == 0 ? tx.substr(3) : tx;
      out.push_back(c);
    }
  }

  std::string monitor_line(const sbi::MonitorConfig& m) const override {
    if (!m.enabled) return "SET /mon/" + m.port + " off";
    std::string line = "SET /mon/" + m.port + " on";
    if (m.wavelength_nm) line += " wl=" + fmt_dbm(*m.wavelength_nm);
    return line;
  }

  std::vector<std::string> alarm_lines(const sbi::AlarmConfig& a) const override {
    std::string line = "SET /alarm/" + a.port;
    if (a.high_dbm) line += " hi=" + fmt_dbm(*a.high_dbm);
    if (a.low_dbm) line += " lo=" + fmt_dbm(*a.low_dbm);
    return {line};
  }

  std::string power_query(const std::string& port) const override {
    return "GET /pwr/" + port;
  }

  bool parse_power_reply(const std::string& line, double& dbm,
                         std::string& err) const override {
    if (line.rfind("OK ", 0) == 0) {
      dbm = std::stod(line.substr(3));
      return true;
    }
    err = line.rfind("ERR ", 0) == 0 ? line.substr(4) : line;
    return false;
  }

  bool is_event_line(const std::string& line) const override {
    return line.rfind("EVT /alarm/", 0) == 0;
  }

  std::optional<sbi::Notification> parse_event(const std::string& line) const override {
    std::istringstream is(line);
    std::string evt, path, edge, dbm;
    if (!(is >> evt >> path >> edge >> dbm) || path.rfind("/alarm/", 0) != 0)
      return std::nullopt;
    sbi::Notification n;
    n.port = path.substr(7);
    n.kind = edge == "hi" ? sbi::NotifKind::SIGNAL_DETECTED : sbi::NotifKind::SIGNAL_DEGRADED;
    n.measured_dbm = std::stod(dbm);
    return n;
  }
};

}  // namespace

std::unique_ptr<Converter> Converter::make(emu::Vendor v) {
  switch (v) {
    case emu::Vendor::A: return std::make_unique<VendorA>();
    case emu::Vendor::B: return std::make_unique<VendorB>();
    case emu::Vendor::C: return std::make_unique<VendorC>();
  }
  return std::make_unique<VendorA>();
}

}  // namespace ocs::xlat
