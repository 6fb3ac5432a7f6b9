// SPDX-License-Identifier: Apache-2.0
#include "ocs/emu/fleet.hpp"

#include <functional>
#include <stdexcept>

namespace ocs::emu {

Fleet::Fleet(FleetConfig cfg) : cfg_(std::move(cfg)) {}

Fleet::~Fleet() { stop(); }

uint64_t Fleet::device_seed(uint64_t fleet_seed, const std::string& device_id) {
  // stable per-device stream so nested route sets stay coupled across runs
  uint64_t h = std::hash<std::string>{}(device_id);
  return fleet_seed * 0x9e3779b97f4a7c15ULL ^ h;
}

void Fleet::start() {
  if (started_) return;
  static const Vendor kRoundRobin[] = {Vendor::A, Vendor::B, Vendor::C};
  size_t idx = 0;
  for (const auto& [id, node] : cfg_.topo.nodes) {
    EmulatorProfile profile;
    auto vit = cfg_.vendors.find(id);
    profile.vendor = vit != cfg_.vendors.end() ? vit->second : kRoundRobin[idx % 3];
    ++idx;
    profile.latency = cfg_.latency;
    profile.seed = device_seed(cfg_.seed, id);
    if (auto fit = cfg_.faults.find(id); fit != cfg_.faults.end()) profile.fault = fit->second;
    auto emu = std::make_unique<Emulator>(id, node.tx_ports, node.rx_ports, profile);
    emu->start(0);
    emu->core().set_change_hook([this] { recompute_power(); });
    auto xl = std::make_unique<xlat::Translator>(
        id, profile.vendor, model::ConnInfo{"127.0.0.1", emu->port()});
    xl->start(0);
    emulators_[id] = std::move(emu);
    translators_[id] = std::move(xl);
  }
  for (const auto& [id, term] : cfg_.topo.terminals) {
    EmulatorProfile profile;
    profile.latency = LatencyModel::fixed(0.0);  // terminals configure instantly
    profile.seed = device_seed(cfg_.seed, id);
    if (auto fit = cfg_.faults.find(id); fit != cfg_.faults.end()) profile.fault = fit->second;
    auto t = std::make_unique<TerminalEmulator>(id, profile);
    t->start(0);
    terminals_[id] = std::move(t);
  }
  for (const auto& [lid, link] : cfg_.topo.links) by_src_[{link.src, link.src_port}] = &link;
  started_ = true;
  recompute_power();
}

void Fleet::stop() {
  if (!started_) return;
  for (auto& [id, xl] : translators_) xl->stop();
  for (auto& [id, e] : emulators_) e->stop();
  for (auto& [id, t] : terminals_) t->stop();
  translators_.clear();
  emulators_.clear();
  terminals_.clear();
  by_src_.clear();
  started_ = false;
}

model::ConnInfo Fleet::unified_endpoint(const std::string& device_id) const {
  if (auto it = translators_.find(device_id); it != translators_.end())
    return {"127.0.0.1", it->second->north_port()};
  if (auto it = terminals_.find(device_id); it != terminals_.end())
    return {"127.0.0.1", it->second->port()};
  throw std::out_of_range("no such device: " + device_id);
}

model::Topology Fleet::registration_topology() const {
  model::Topology t = cfg_.topo;
  for (auto& [id, node] : t.nodes) node.conn = unified_endpoint(id);
  for (auto& [id, term] : t.terminals) term.conn = unified_endpoint(id);
  return t;
}

void Fleet::set_fault(const std::string& device_id, FaultMode m) {
  if (auto it = emulators_.find(device_id); it != emulators_.end()) {
    it->second->set_fault(m);
    return;
  }
  if (auto it = terminals_.find(device_id); it != terminals_.end()) {
    it->second->set_fault(m);
    return;
  }
  throw std::out_of_range("no such device: " + device_id);
}

void Fleet::set_laser(const std::string& terminal, std::optional<double> dbm) {
  if (!terminals_.count(terminal)) throw std::out_of_range("no such terminal: " + terminal);
  {
    std::lock_guard lk(mu_);
    if (dbm)
      lasers_[terminal] = *dbm;
    else
      lasers_.erase(terminal);
  }
  recompute_power();
}

void Fleet::pull_link(const std::string& link_id) {
  if (!cfg_.topo.links.count(link_id)) throw std::out_of_range("no such link: " + link_id);
  {
    std::lock_guard lk(mu_);
    pulled_.insert(link_id);
  }
  recompute_power();
}

void Fleet::restore_link(const std::string& link_id) {
  {
    std::lock_guard lk(mu_);
    pulled_.erase(link_id);
  }
  recompute_power();
}

model::json Fleet::snapshot(const std::string& device_id) const {
  if (auto it = emulators_.find(device_id); it != emulators_.end())
    return it->second->core().snapshot();
  if (auto it = terminals_.find(device_id); it != terminals_.end())
    return it->second->core().snapshot();
  throw std::out_of_range("no such device: " + device_id);
}

std::map<std::string, int> Fleet::counters(const std::string& device_id) const {
  if (auto it = emulators_.find(device_id); it != emulators_.end())
    return it->second->core().counters();
  if (auto it = terminals_.find(device_id); it != terminals_.end())
    return it->second->core().counters();
  throw std::out_of_range("no such device: " + device_id);
}

void Fleet::reseed(uint64_t seed) {
  for (auto& [id, e] : emulators_) e->core().reseed(device_seed(seed, id));
  for (auto& [id, t] : terminals_) t->core().reseed(device_seed(seed, id));
}

Vendor Fleet::vendor_of(const std::string& device_id) const {
  auto it = emulators_.find(device_id);
  if (it == emulators_.end()) throw std::out_of_range("no such switch: " + device_id);
  return it->second->vendor();
}

double Fleet::port_power(const std::string& device_id, const std::string& port) const {
  auto snap = snapshot(device_id);
  const auto& powers = snap.at("powers");
  if (!powers.contains(port)) throw std::out_of_range("no such port: " + port);
  return powers.at(port).get<double>();
}

std::vector<std::string> Fleet::device_ids() const {
  std::vector<std::string> out;
  for (const auto& [id, e] : emulators_) out.push_back(id);
  for (const auto& [id, t] : terminals_) out.push_back(id);
  return out;
}

void Fleet::recompute_power() {
  std::lock_guard lk(mu_);
  if (!started_) return;
  // lossless model: every port a lit chain reaches carries the launch power
  std::map<std::pair<std::string, std::string>, double> lit;
  for (const auto& [term, dbm] : lasers_) {
    std::set<std::pair<std::string, std::string>> visited;
    std::string dev = term;
    std::string port = TerminalEmulator::kTxPort;
    double power = dbm;
    lit[{dev, port}] = power;
    for (;;) {
      if (!visited.insert({dev, port}).second) break;
      auto link_it = by_src_.find({dev, port});
      if (link_it == by_src_.end()) break;
      const model::FiberLink* link = link_it->second;
      if (pulled_.count(link->id)) break;
      dev = link->dst;
      port = link->dst_port;
      lit[{dev, port}] = power;
      auto emu_it = emulators_.find(dev);
      if (emu_it == emulators_.end()) break;  // reached a terminal rx
      auto routing = emu_it->second->core().routing();
      auto out = routing.find(port);
      if (out == routing.end()) break;  // no deflection configured
      port = out->second;
      lit[{dev, port}] = power;
    }
  }
  auto apply = [&](const std::string& id, DeviceCore& core, const std::set<std::string>& ports) {
    for (const auto& p : ports) {
      auto it = lit.find({id, p});
      core.set_port_power(p, it != lit.end() ? it->second : sbi::kDarkDbm);
    }
  };
  for (auto& [id, node] : cfg_.topo.nodes) {
    auto& core = emulators_.at(id)->core();
    apply(id, core, node.tx_ports);
    apply(id, core, node.rx_ports);
  }
  for (auto& [id, t] : terminals_) {
    auto& core = t->core();
    apply(id, core, {TerminalEmulator::kTxPort, TerminalEmulator::kRxPort});
  }
}

}  // namespace ocs::emu
