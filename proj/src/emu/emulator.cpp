// SPDX-License-Identifier: Apache-2.0
#include "ocs/emu/emulator.hpp"

#include <cstdio>
#include <sstream>

#include "ocs/sbi/protocol.hpp"

namespace ocs::emu {

namespace {

std::string fmt_dbm(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

// key=value extractor for vendor C ("rx=R1")
std::optional<std::string> kv(const std::vector<std::string>& toks, const std::string& key) {
  for (const auto& t : toks) {
    if (t.rfind(key + "=", 0) == 0) return t.substr(key.size() + 1);
  }
  return std::nullopt;
}

bool is_edit_a(const std::string& line) {
  return line.rfind("XC ADD ", 0) == 0 || line.rfind("XC DEL ", 0) == 0;
}

bool is_edit_b(const std::string& line) {
  auto j = model::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return false;
  auto op = j.value("op", "");
  return op == "connect" || op == "disconnect";
}

bool is_edit_c(const std::string& line) {
  return line.rfind("SET /xc/", 0) == 0 || line.rfind("DEL /xc/", 0) == 0;
}

/// Gathers the pipelined burst of edit lines that arrived together with
/// `first`; a non-edit line ends the burst and is handed back via `stash`.
template <typename IsEdit>
std::vector<std::string> gather_burst(net::LineSocket& s, const std::string& first,
                                      IsEdit is_edit, std::optional<std::string>& stash) {
  std::vector<std::string> batch{first};
  for (;;) {
    if (!s.has_buffered_line() && !s.poll_readable(std::chrono::milliseconds(2))) break;
    auto next = s.read_line(std::chrono::milliseconds(5));
    if (!next) break;
    if (is_edit(*next)) {
      batch.push_back(*next);
    } else {
      stash = *next;
      break;
    }
  }
  return batch;
}

}  // namespace

Vendor vendor_from_string(const std::string& s) {
  if (s == "A" || s == "a") return Vendor::A;
  if (s == "B" || s == "b") return Vendor::B;
  if (s == "C" || s == "c") return Vendor::C;
  throw std::invalid_argument("unknown vendor: " + s);
}

const char* to_string(Vendor v) {
  switch (v) {
    case Vendor::A: return "A";
    case Vendor::B: return "B";
    case Vendor::C: return "C";
  }
  return "A";
}

Emulator::Emulator(std::string id, std::set<std::string> tx_ports,
                   std::set<std::string> rx_ports, EmulatorProfile profile)
    : profile_(profile),
      core_(std::move(id), std::move(tx_ports), std::move(rx_ports), profile.latency,
            profile.seed) {
  core_.set_fault(profile.fault);
  core_.set_event_hook(
      [this](const std::string& port, bool rising, double dbm) { emit_event(port, rising, dbm); });
}

void Emulator::start(int port) {
  server_.start(port, [this](net::LineSocket& s) {
    switch (profile_.vendor) {
      case Vendor::A: handle_vendor_a(s); break;
      case Vendor::B: handle_vendor_b(s); break;
      case Vendor::C: handle_vendor_c(s); break;
    }
  });
  if (profile_.fault == FaultMode::SERVER_DOWN) server_.pause();
}

void Emulator::stop() { server_.stop(); }

void Emulator::set_fault(FaultMode m) {
  FaultMode prev = core_.fault();
  core_.set_fault(m);
  if (m == FaultMode::SERVER_DOWN) {
    server_.pause();
  } else if (prev == FaultMode::SERVER_DOWN && server_.running()) {
    server_.resume();
  }
}

void Emulator::emit_event(const std::string& port, bool rising, double dbm) {
  std::string line;
  switch (profile_.vendor) {
    case Vendor::A:
      line = "EVT " + port + (rising ? " HI " : " LO ") + fmt_dbm(dbm);
      break;
    case Vendor::B:
      line = model::json{
          {"event", {{"port", port}, {"edge", rising ? "hi" : "lo"}, {"dbm", dbm}}}}.dump();
      break;
    case Vendor::C:
      line = "EVT /alarm/" + port + (rising ? " hi " : " lo ") + fmt_dbm(dbm);
      break;
  }
  std::lock_guard lk(sinks_mu_);
  for (auto* s : sinks_) s->write_line(line);
}

void Emulator::handle_vendor_a(net::LineSocket& s) {
  {
    std::lock_guard lk(sinks_mu_);
    sinks_.insert(&s);
  }
  std::optional<std::string> stash;
  for (;;) {
    std::string line;
    if (stash) {
      line = *stash;
      stash.reset();
    } else {
      auto l = s.read_line();
      if (!l) break;
      line = *l;
    }
    if (core_.fault() == FaultMode::TIMEOUT_ALL) continue;

    if (is_edit_a(line)) {
      auto batch = gather_burst(s, line, is_edit_a, stash);
      std::vector<DeviceCore::EditOp> ops;
      for (const auto& b : batch) {
        auto t = split_ws(b);
        if (t[1] == "ADD" && t.size() == 5) {
          ops.push_back(DeviceCore::EditOp::create({t[2], t[3], t[4]}));
        } else if (t[1] == "DEL" && t.size() == 3) {
          ops.push_back(DeviceCore::EditOp::del(t[2]));
        } else {
          ops.push_back(DeviceCore::EditOp::del("\x01malformed"));
        }
      }
      auto results = core_.apply_ops(ops);
      std::vector<std::string> replies;
      for (const auto& r : results) replies.push_back(r.ok ? "OK" : "ERR " + r.err);
      s.write_lines(replies);
      continue;
    }

    auto t = split_ws(line);
    if (t.size() == 2 && t[0] == "XC" && t[1] == "LIST") {
      std::vector<std::string> lines;
      for (const auto& c : core_.list_connections())
        lines.push_back(c.name + " " + c.rx_port + " " + c.tx_port);
      lines.push_back("OK");
      s.write_lines(lines);
    } else if (t.size() == 2 && t[0] == "PWR") {
      auto [r, v] = core_.read_power(t[1]);
      s.write_line(r.ok ? "OK " + fmt_dbm(v) : "ERR " + r.err);
    } else if (t.size() == 4 && t[0] == "ALARM" && (t[2] == "HI" || t[2] == "LO")) {
      double v = std::stod(t[3]);
      auto r = t[2] == "HI" ? core_.set_alarm(t[1], v, std::nullopt)
                            : core_.set_alarm(t[1], std::nullopt, v);
      s.write_line(r.ok ? "OK" : "ERR " + r.err);
    } else if (t.size() >= 3 && t[0] == "MON" && t[2] == "ON") {
      std::optional<double> wl;
      if (t.size() == 5 && t[3] == "WL") wl = std::stod(t[4]);
      auto r = core_.set_monitor(t[1], true, wl);
      s.write_line(r.ok ? "OK" : "ERR " + r.err);
    } else if (t.size() == 3 && t[0] == "MON" && t[2] == "OFF") {
      auto r = core_.set_monitor(t[1], false, std::nullopt);
      s.write_line(r.ok ? "OK" : "ERR " + r.err);
    } else {
      s.write_line("ERR unknown command");
    }
  }
  std::lock_guard lk(sinks_mu_);
  sinks_.erase(&s);
}

void Emulator::handle_vendor_b(net::LineSocket& s) {
  {
    std::lock_guard lk(sinks_mu_);
    sinks_.insert(&s);
  }
  auto reply_ok = [&](model::json extra = model::json::object()) {
    extra["ok"] = true;
    s.write_line(extra.dump());
  };
  auto reply_err = [&](const std::string& e) {
    s.write_line(model::json{{"ok", false}, {"error", e}}.dump());
  };

  std::optional<std::string> stash;
  for (;;) {
    std::string line;
    if (stash) {
      line = *stash;
      stash.reset();
    } else {
      auto l = s.read_line();
      if (!l) break;
      line = *l;
    }
    if (core_.fault() == FaultMode::TIMEOUT_ALL) continue;

    if (is_edit_b(line)) {
      auto batch = gather_burst(s, line, is_edit_b, stash);
      std::vector<DeviceCore::EditOp> ops;
      for (const auto& b : batch) {
        auto j = model::json::parse(b);
        if (j.value("op", "") == "connect") {
          ops.push_back(DeviceCore::EditOp::create({j.value("label", ""), j.value("in", ""),
                                                    j.value("out", "")}));
        } else {
          ops.push_back(DeviceCore::EditOp::del(j.value("label", "")));
        }
      }
      auto results = core_.apply_ops(ops);
      std::vector<std::string> replies;
      for (const auto& r : results) {
        replies.push_back(r.ok ? model::json{{"ok", true}}.dump()
                               : model::json{{"ok", false}, {"error", r.err}}.dump());
      }
      s.write_lines(replies);
      continue;
    }

    auto j = model::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      reply_err("malformed json");
      continue;
    }
    auto op = j.value("op", "");
    if (op == "list") {
      model::json arr = model::json::array();
      for (const auto& c : core_.list_connections())
        arr.push_back({{"label", c.name}, {"in", c.rx_port}, {"out", c.tx_port}});
      reply_ok({{"connections", arr}});
    } else if (op == "power") {
      auto [r, v] = core_.read_power(j.value("port", ""));
      if (r.ok)
        reply_ok({{"dbm", v}});
      else
        reply_err(r.err);
    } else if (op == "alarm") {
      std::optional<double> hi, lo;
      if (j.contains("hi") && !j["hi"].is_null()) hi = j["hi"].get<double>();
      if (j.contains("lo") && !j["lo"].is_null()) lo = j["lo"].get<double>();
      auto r = core_.set_alarm(j.value("port", ""), hi, lo);
      r.ok ? reply_ok() : reply_err(r.err);
    } else if (op == "monitor") {
      std::optional<double> wl;
      if (j.contains("wavelength") && !j["wavelength"].is_null())
        wl = j["wavelength"].get<double>();
      auto r = core_.set_monitor(j.value("port", ""), j.value("enabled", true), wl);
      r.ok ? reply_ok() : reply_err(r.err);
    } else {
      reply_err("unknown op");
    }
  }
  std::lock_guard lk(sinks_mu_);
  sinks_.erase(&s);
}

void Emulator::handle_vendor_c(net::LineSocket& s) {
  {
    std::lock_guard lk(sinks_mu_);
    sinks_.insert(&s);
  }
  std::optional<std::string> stash;
  for (;;) {
    std::string line;
    if (stash) {
      line = *stash;
      stash.reset();
    } else {
      auto l = s.read_line();
      if (!l) break;
      line = *l;
    }
    if (core_.fault() == FaultMode::TIMEOUT_ALL) continue;

    if (is_edit_c(line)) {
      auto batch = gather_burst(s, line, is_edit_c, stash);
      std::vector<DeviceCore::EditOp> ops;
      for (const auto& b : batch) {
        auto t = split_ws(b);
        std::string name = t[1].substr(4);  // "/xc/<name>"
        if (t[0] == "SET") {
          auto rx = kv(t, "rx").value_or("");
          auto tx = kv(t, "tx").value_or("");
          ops.push_back(DeviceCore::EditOp::create({name, rx, tx}));
        } else {
          ops.push_back(DeviceCore::EditOp::del(name));
        }
      }
      auto results = core_.apply_ops(ops);
      std::vector<std::string> replies;
      for (const auto& r : results) replies.push_back(r.ok ? "OK" : "ERR " + r.err);
      s.write_lines(replies);
      continue;
    }

    auto t = split_ws(line);
    if (t.size() == 2 && t[0] == "GET" && t[1] == "/xc") {
      std::vector<std::string> lines;
      for (const auto& c : core_.list_connections())
        lines.push_back("/xc/" + c.name + " rx=" + c.rx_port + " tx=" + c.tx_port);
      lines.push_back("OK");
      s.write_lines(lines);
    } else if (t.size() == 2 && t[0] == "GET" && t[1].rfind("/pwr/", 0) == 0) {
      auto [r, v] = core_.read_power(t[1].substr(5));
      s.write_line(r.ok ? "OK " + fmt_dbm(v) : "ERR " + r.err);
    } else if (t.size() >= 2 && t[0] == "SET" && t[1].rfind("/alarm/", 0) == 0) {
      std::optional<double> hi, lo;
      if (auto v = kv(t, "hi")) hi = std::stod(*v);
      if (auto v = kv(t, "lo")) lo = std::stod(*v);
      auto r = core_.set_alarm(t[1].substr(7), hi, lo);
      s.write_line(r.ok ? "OK" : "ERR " + r.err);
    } else if (t.size() >= 3 && t[0] == "SET" && t[1].rfind("/mon/", 0) == 0) {
      std::string port = t[1].substr(5);
      if (t[2] == "on") {
        std::optional<double> wl;
        if (auto v = kv(t, "wl")) wl = std::stod(*v);
        auto r = core_.set_monitor(port, true, wl);
        s.write_line(r.ok ? "OK" : "ERR " + r.err);
      } else {
        auto r = core_.set_monitor(port, false, std::nullopt);
        s.write_line(r.ok ? "OK" : "ERR " + r.err);
      }
    } else {
      s.write_line("ERR unknown command");
    }
  }
  std::lock_guard lk(sinks_mu_);
  sinks_.erase(&s);
}

// --- terminal ---------------------------------------------------------

TerminalEmulator::TerminalEmulator(std::string id, EmulatorProfile profile)
    : profile_(profile),
      core_(std::move(id), {kTxPort}, {kRxPort}, profile.latency, profile.seed) {
  core_.set_fault(profile.fault);
  core_.set_event_hook(
      [this](const std::string& port, bool rising, double dbm) { emit_event(port, rising, dbm); });
}

void TerminalEmulator::start(int port) {
  server_.start(port, [this](net::LineSocket& s) { handle_unified(s); });
  if (profile_.fault == FaultMode::SERVER_DOWN) server_.pause();
}

void TerminalEmulator::stop() { server_.stop(); }

void TerminalEmulator::set_fault(FaultMode m) {
  FaultMode prev = core_.fault();
  core_.set_fault(m);
  if (m == FaultMode::SERVER_DOWN) {
    server_.pause();
  } else if (prev == FaultMode::SERVER_DOWN && server_.running()) {
    server_.resume();
  }
}

void TerminalEmulator::emit_event(const std::string& port, bool rising, double dbm) {
  sbi::Notification n;
  n.port = port;
  n.kind = rising ? sbi::NotifKind::SIGNAL_DETECTED : sbi::NotifKind::SIGNAL_DEGRADED;
  n.measured_dbm = dbm;
  n.ts = sbi::unix_now();
  const std::string line = sbi::notification_to_json(n).dump();
  std::lock_guard lk(sinks_mu_);
  for (auto* s : sinks_) s->write_line(line);
}

void TerminalEmulator::handle_unified(net::LineSocket& s) {
  bool subscribed = false;
  while (auto line = s.read_line()) {
    if (core_.fault() == FaultMode::TIMEOUT_ALL) continue;
    auto j = model::json::parse(*line, nullptr, false);
    if (j.is_discarded() || !j.contains("rpc-id") || !j.contains("rpc")) continue;
    const auto id = j["rpc-id"];
    const std::string rpc = j["rpc"].get<std::string>();
    auto reply = [&](const model::json& body) {
      s.write_line(model::json{{"rpc-id", id}, {"reply", body}}.dump());
    };
    auto fail = [&](const std::string& msg) {
      s.write_line(model::json{{"rpc-id", id},
                               {"error", {{"code", "rpc-error"}, {"message", msg}}}}
                       .dump());
    };
    try {
      if (rpc == "hello") {
        core_.count("hello");
        reply("ok");
      } else if (rpc == "get") {
        sbi::DeviceState st;
        st.connections = core_.list_connections();
        st.power = core_.monitored_powers();
        reply(sbi::device_state_to_json(st));
      } else if (rpc == "subscribe") {
        core_.count("subscribe");
        if (!subscribed) {
          std::lock_guard lk(sinks_mu_);
          sinks_.insert(&s);
          subscribed = true;
        }
        reply("ok");
      } else if (rpc == "edit-config") {
        auto payload = sbi::edit_payload_from_json(j.value("payload", model::json::object()));
        if (!payload.creates.empty() || !payload.deletes.empty()) {
          fail("terminal has no cross-connects");
          continue;
        }
        std::string err;
        for (const auto& m : payload.monitors) {
          auto r = core_.set_monitor(m.port, m.enabled, m.wavelength_nm);
          if (!r.ok) err = r.err;
        }
        for (const auto& a : payload.alarms) {
          auto r = core_.set_alarm(a.port, a.high_dbm, a.low_dbm);
          if (!r.ok) err = r.err;
        }
        if (err.empty())
          reply("ok");
        else
          fail(err);
      } else {
        fail("unknown rpc: " + rpc);
      }
    } catch (const std::exception& e) {
      fail(e.what());
    }
  }
  if (subscribed) {
    std::lock_guard lk(sinks_mu_);
    sinks_.erase(&s);
  }
}

}  // namespace ocs::emu
