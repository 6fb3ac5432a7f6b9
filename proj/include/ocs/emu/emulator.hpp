// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>

#include "ocs/emu/device_core.hpp"
#include "ocs/net/server.hpp"

namespace ocs::emu {

enum class Vendor { A, B, C };

Vendor vendor_from_string(const std::string& s);
const char* to_string(Vendor v);

struct EmulatorProfile {
  Vendor vendor = Vendor::A;
  LatencyModel latency = LatencyModel::fixed(0.0);
  FaultMode fault = FaultMode::NONE;
  uint64_t seed = 1;
};

/// An emulated OCS serving exactly one vendor-proprietary protocol.
/// Control operations (fault injection, power, snapshots) go through core()
/// and are never reachable from the vendor port.
class Emulator {
 public:
  Emulator(std::string id, std::set<std::string> tx_ports, std::set<std::string> rx_ports,
           EmulatorProfile profile);

  void start(int port = 0);
  void stop();
  int port() const { return server_.port(); }

  DeviceCore& core() { return core_; }
  const DeviceCore& core() const { return core_; }
  Vendor vendor() const { return profile_.vendor; }

  /// SERVER_DOWN closes the listener (TCP refused); other modes flag the core.
  void set_fault(FaultMode m);

 private:
  void handle_vendor_a(net::LineSocket& s);
  void handle_vendor_b(net::LineSocket& s);
  void handle_vendor_c(net::LineSocket& s);
  void emit_event(const std::string& port, bool rising, double dbm);

  EmulatorProfile profile_;
  DeviceCore core_;
  net::Server server_;

  std::mutex sinks_mu_;
  std::set<net::LineSocket*> sinks_;
};

/// An emulated terminal: a two-port device (laser Tx, monitored Rx) that
/// speaks the unified SBI directly.
class TerminalEmulator {
 public:
  TerminalEmulator(std::string id, EmulatorProfile profile);

  void start(int port = 0);
  void stop();
  int port() const { return server_.port(); }

  DeviceCore& core() { return core_; }
  void set_fault(FaultMode m);

  static constexpr const char* kTxPort = "tx";
  static constexpr const char* kRxPort = "rx";

 private:
  void handle_unified(net::LineSocket& s);
  void emit_event(const std::string& port, bool rising, double dbm);

  EmulatorProfile profile_;
  DeviceCore core_;
  net::Server server_;

  std::mutex sinks_mu_;
  std::set<net::LineSocket*> sinks_;
};

}  // namespace ocs::emu
