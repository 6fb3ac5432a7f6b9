// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>

#include "ocs/emu/emulator.hpp"
#include "ocs/model/types.hpp"
#include "ocs/xlat/translator.hpp"

namespace ocs::emu {

struct FleetConfig {
  model::Topology topo;
  LatencyModel latency = LatencyModel::fixed(0.0);
  uint64_t seed = 1;
  std::map<std::string, Vendor> vendors;    // per-switch override; default round-robin
  std::map<std::string, FaultMode> faults;  // initial fault injection
};

/// An emulated multi-vendor device fleet wired by a topology: one vendor
/// emulator + one translator per OCS, one unified-SBI terminal emulator per
/// terminal, and a lossless light-propagation engine that drives port powers
/// (and hence threshold alarms) from laser states and applied cross-connects.
/// The control surface here is the test harness's side channel; none of it is
/// reachable over the device protocols.
class Fleet {
 public:
  explicit Fleet(FleetConfig cfg);
  ~Fleet();

  void start();
  void stop();

  /// Where the controller should connect for this device (translator north
  /// port for OCSes, the unified server for terminals).
  model::ConnInfo unified_endpoint(const std::string& device_id) const;

  /// The configured topology with conn fields rewritten to live endpoints,
  /// ready to feed the controller's registration services.
  model::Topology registration_topology() const;

  // --- control side channel -----------------------------------------
  void set_fault(const std::string& device_id, FaultMode m);
  void set_laser(const std::string& terminal, std::optional<double> dbm);
  void pull_link(const std::string& link_id);
  void restore_link(const std::string& link_id);
  model::json snapshot(const std::string& device_id) const;
  std::map<std::string, int> counters(const std::string& device_id) const;
  /// Restarts every device's latency stream from (seed, device id).
  void reseed(uint64_t seed);
  Vendor vendor_of(const std::string& device_id) const;
  double port_power(const std::string& device_id, const std::string& port) const;
  std::vector<std::string> device_ids() const;

  static uint64_t device_seed(uint64_t fleet_seed, const std::string& device_id);

 private:
  void recompute_power();

  FleetConfig cfg_;
  std::map<std::string, std::unique_ptr<Emulator>> emulators_;
  std::map<std::string, std::unique_ptr<xlat::Translator>> translators_;
  std::map<std::string, std::unique_ptr<TerminalEmulator>> terminals_;

  mutable std::mutex mu_;
  std::map<std::string, double> lasers_;                       // terminal -> launch dBm
  std::set<std::string> pulled_;                               // dark links
  std::map<std::pair<std::string, std::string>, const model::FiberLink*> by_src_;
  bool started_ = false;
};

}  // namespace ocs::emu
