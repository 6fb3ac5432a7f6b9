// SPDX-License-Identifier: Apache-2.0
#include "ocs/emu/device_core.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace ocs::emu {

LatencyModel LatencyModel::parse(const std::string& spec) {
  std::istringstream is(spec);
  std::string kind;
  std::getline(is, kind, ':');
  if (kind == "fixed") {
    double d = 0;
    is >> d;
    return fixed(d);
  }
  if (kind == "normal") {
    std::string m, s;
    std::getline(is, m, ':');
    std::getline(is, s, ':');
    return normal(std::stod(m), std::stod(s));
  }
  throw std::invalid_argument("latency spec must be fixed:<s> or normal:<mean>:<std>");
}

std::string LatencyModel::to_string() const {
  std::ostringstream os;
  if (kind == Kind::Fixed)
    os << "fixed:" << a;
  else
    os << "normal:" << a << ":" << b;
  return os.str();
}

FaultMode fault_mode_from_string(const std::string& s) {
  if (s == "none" || s == "NONE") return FaultMode::NONE;
  if (s == "server_down" || s == "SERVER_DOWN") return FaultMode::SERVER_DOWN;
  if (s == "timeout_all" || s == "TIMEOUT_ALL") return FaultMode::TIMEOUT_ALL;
  if (s == "lie_on_apply" || s == "LIE_ON_APPLY") return FaultMode::LIE_ON_APPLY;
  throw std::invalid_argument("unknown fault mode: " + s);
}

const char* to_string(FaultMode m) {
  switch (m) {
    case FaultMode::NONE: return "NONE";
    case FaultMode::SERVER_DOWN: return "SERVER_DOWN";
    case FaultMode::TIMEOUT_ALL: return "TIMEOUT_ALL";
    case FaultMode::LIE_ON_APPLY: return "LIE_ON_APPLY";
  }
  return "NONE";
}

DeviceCore::DeviceCore(std::string id, std::set<std::string> tx_ports,
                       std::set<std::string> rx_ports, LatencyModel latency, uint64_t seed)
    : id_(std::move(id)),
      tx_ports_(std::move(tx_ports)),
      rx_ports_(std::move(rx_ports)),
      latency_(latency),
      seed_(seed),
      rng_(seed) {
  for (const auto& p : tx_ports_) powers_[p] = sbi::kDarkDbm;
  for (const auto& p : rx_ports_) powers_[p] = sbi::kDarkDbm;
}

void DeviceCore::reseed(uint64_t seed) {
  std::lock_guard lk(mu_);
  seed_ = seed;
  rng_.seed(seed);
}

double DeviceCore::sample_latency() {
  std::lock_guard lk(mu_);
  if (latency_.kind == LatencyModel::Kind::Fixed) return latency_.a;
  std::normal_distribution<double> dist(latency_.a, latency_.b);
  return std::max(0.0, dist(rng_));
}

void DeviceCore::count(const std::string& op) {
  std::lock_guard lk(mu_);
  counters_[op]++;
}

std::map<std::string, int> DeviceCore::counters() const {
  std::lock_guard lk(mu_);
  return counters_;
}

DeviceCore::OpResult DeviceCore::create_locked(const InternalConnection& c) {
  if (!rx_ports_.count(c.rx_port)) return OpResult::fail("unknown rx port " + c.rx_port);
  if (!tx_ports_.count(c.tx_port)) return OpResult::fail("unknown tx port " + c.tx_port);
  if (connections_.count(c.name)) return OpResult::fail("connection exists " + c.name);
  if (rx_used_.count(c.rx_port)) return OpResult::fail("rx port busy " + c.rx_port);
  if (tx_used_.count(c.tx_port)) return OpResult::fail("tx port busy " + c.tx_port);
  connections_[c.name] = c;
  rx_used_.insert(c.rx_port);
  tx_used_.insert(c.tx_port);
  return {};
}

DeviceCore::OpResult DeviceCore::delete_locked(const std::string& name) {
  auto it = connections_.find(name);
  if (it == connections_.end()) return OpResult::fail("no such connection " + name);
  rx_used_.erase(it->second.rx_port);
  tx_used_.erase(it->second.tx_port);
  connections_.erase(it);
  return {};
}

std::vector<DeviceCore::OpResult> DeviceCore::apply_ops(const std::vector<EditOp>& ops) {
  count("edit");
  double delay = sample_latency();
  if (delay > 0)
    std::this_thread::sleep_for(std::chrono::duration<double>(delay));

  std::vector<OpResult> results;
  bool changed = false;
  ChangeHook hook;
  {
    std::lock_guard lk(mu_);
    const bool lie = fault_ == FaultMode::LIE_ON_APPLY;
    for (const auto& op : ops) {
      if (lie) {
        results.push_back({});
        continue;
      }
      auto r = op.is_create ? create_locked(op.conn) : delete_locked(op.name);
      changed |= r.ok;
      results.push_back(std::move(r));
    }
    hook = on_change_;
  }
  if (changed && hook) hook();
  return results;
}

DeviceCore::OpResult DeviceCore::set_monitor(const std::string& port, bool enabled,
                                             std::optional<double> wl) {
  count("monitor");
  std::lock_guard lk(mu_);
  if (!powers_.count(port)) return OpResult::fail("unknown port " + port);
  if (enabled) {
    monitors_[port] = sbi::MonitorConfig{port, true, wl};
  } else {
    monitors_.erase(port);
    alarms_.erase(port);
  }
  return {};
}

DeviceCore::OpResult DeviceCore::set_alarm(const std::string& port, std::optional<double> hi,
                                           std::optional<double> lo) {
  count("alarm");
  std::lock_guard lk(mu_);
  if (!powers_.count(port)) return OpResult::fail("unknown port " + port);
  if (!monitors_.count(port)) return OpResult::fail("monitor disabled on " + port);
  for (auto v : {hi, lo}) {
    if (v && !sbi::threshold_in_range(*v))
      return OpResult::fail("threshold out of range");
  }
  auto& a = alarms_[port];
  a.port = port;
  if (hi) a.high_dbm = hi;
  if (lo) a.low_dbm = lo;
  return {};
}

std::pair<DeviceCore::OpResult, double> DeviceCore::read_power(const std::string& port) const {
  const_cast<DeviceCore*>(this)->count("power");
  std::lock_guard lk(mu_);
  if (!powers_.count(port)) return {OpResult::fail("unknown port " + port), sbi::kDarkDbm};
  if (!monitors_.count(port)) return {OpResult::fail("monitor disabled on " + port), sbi::kDarkDbm};
  return {{}, powers_.at(port)};
}

std::vector<InternalConnection> DeviceCore::list_connections() const {
  const_cast<DeviceCore*>(this)->count("get");
  std::lock_guard lk(mu_);
  std::vector<InternalConnection> out;
  for (const auto& [name, c] : connections_) out.push_back(c);
  return out;
}

std::vector<sbi::PowerReading> DeviceCore::monitored_powers() const {
  std::lock_guard lk(mu_);
  std::vector<sbi::PowerReading> out;
  for (const auto& [port, m] : monitors_) out.push_back({port, powers_.at(port)});
  return out;
}

bool DeviceCore::has_port(const std::string& port) const {
  std::lock_guard lk(mu_);
  return powers_.count(port) > 0;
}

void DeviceCore::set_port_power(const std::string& port, double dbm) {
  EventHook hook;
  bool rising = false, falling = false;
  double measured = dbm;
  {
    std::lock_guard lk(mu_);
    auto it = powers_.find(port);
    if (it == powers_.end()) return;
    double old = it->second;
    if (old == dbm) return;
    it->second = dbm;
    auto al = alarms_.find(port);
    if (al != alarms_.end() && monitors_.count(port)) {
      // edge-triggered on crossing; re-arms when power re-crosses back
      if (al->second.high_dbm && old < *al->second.high_dbm && dbm >= *al->second.high_dbm)
        rising = true;
      if (al->second.low_dbm && old > *al->second.low_dbm && dbm <= *al->second.low_dbm)
        falling = true;
    }
    hook = on_event_;
  }
  if (hook && rising) hook(port, true, measured);
  if (hook && falling) hook(port, false, measured);
}

std::map<std::string, double> DeviceCore::lit_tx_ports() const {
  std::lock_guard lk(mu_);
  std::map<std::string, double> out;
  for (const auto& p : tx_ports_) {
    auto it = powers_.find(p);
    if (it != powers_.end() && it->second > sbi::kDarkDbm) out[p] = it->second;
  }
  return out;
}

std::map<std::string, std::string> DeviceCore::routing() const {
  std::lock_guard lk(mu_);
  std::map<std::string, std::string> out;
  for (const auto& [name, c] : connections_) out[c.rx_port] = c.tx_port;
  return out;
}

json DeviceCore::snapshot() const {
  std::lock_guard lk(mu_);
  json conns = json::array();
  for (const auto& [name, c] : connections_)
    conns.push_back(json{{"name", c.name}, {"rx", c.rx_port}, {"tx", c.tx_port}});
  json monitors = json::object();
  for (const auto& [port, m] : monitors_) {
    json e{{"enabled", m.enabled}};
    if (m.wavelength_nm) e["wavelength"] = *m.wavelength_nm;
    monitors[port] = e;
  }
  json alarms = json::object();
  for (const auto& [port, a] : alarms_) {
    json e = json::object();
    if (a.high_dbm) e["high"] = *a.high_dbm;
    if (a.low_dbm) e["low"] = *a.low_dbm;
    alarms[port] = e;
  }
  json powers = json::object();
  for (const auto& [port, p] : powers_) powers[port] = p;
  return json{{"id", id_},
              {"connections", conns},
              {"monitors", monitors},
              {"alarms", alarms},
              {"powers", powers}};
}

}  // namespace ocs::emu
