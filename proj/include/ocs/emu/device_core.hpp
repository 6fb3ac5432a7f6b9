// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ocs/model/types.hpp"
#include "ocs/sbi/protocol.hpp"

namespace ocs::emu {

using model::InternalConnection;
using model::json;

struct LatencyModel {
  enum class Kind { Fixed, Normal };
  Kind kind = Kind::Fixed;
  double a = 0.0;  // fixed delay / mean
  double b = 0.0;  // unused / stddev

  static LatencyModel fixed(double seconds) { return {Kind::Fixed, seconds, 0.0}; }
  static LatencyModel normal(double mean, double std) { return {Kind::Normal, mean, std}; }
  /// "fixed:0.7" or "normal:0.7:0.07"
  static LatencyModel parse(const std::string& spec);
  std::string to_string() const;
};

enum class FaultMode { NONE, SERVER_DOWN, TIMEOUT_ALL, LIE_ON_APPLY };

FaultMode fault_mode_from_string(const std::string& s);
const char* to_string(FaultMode m);

/// Vendor-independent emulated OCS state machine: cross-connect table with
/// port exclusivity, per-port power and edge-triggered threshold alarms.
/// The protocol frontends call in; the fleet's propagation engine drives
/// port powers through the control surface.
class DeviceCore {
 public:
  struct OpResult {
    bool ok = true;
    std::string err;
    static OpResult fail(std::string e) { return {false, std::move(e)}; }
  };

  /// (port, rising-edge?, measured dBm)
  using EventHook = std::function<void(const std::string&, bool, double)>;
  using ChangeHook = std::function<void()>;

  /// One cross-connect edit as it appears on the wire, order-preserving.
  struct EditOp {
    bool is_create = true;
    InternalConnection conn;  // when is_create
    std::string name;         // when delete
    static EditOp create(InternalConnection c) { return {true, std::move(c), {}}; }
    static EditOp del(std::string n) { return {false, {}, std::move(n)}; }
  };

  DeviceCore(std::string id, std::set<std::string> tx_ports, std::set<std::string> rx_ports,
             LatencyModel latency, uint64_t seed);

  const std::string& id() const { return id_; }

  // --- configuration path (vendor/unified frontends) ------------------
  /// Applies a contiguous batch of cross-connect edits after ONE sampled
  /// configuration latency (the per-OCS configuration time of a path
  /// operation). Results are per-op, in order. LIE_ON_APPLY acknowledges
  /// without touching state.
  std::vector<OpResult> apply_ops(const std::vector<EditOp>& ops);
  OpResult set_monitor(const std::string& port, bool enabled, std::optional<double> wl);
  OpResult set_alarm(const std::string& port, std::optional<double> hi,
                     std::optional<double> lo);
  std::pair<OpResult, double> read_power(const std::string& port) const;
  std::vector<InternalConnection> list_connections() const;
  std::vector<sbi::PowerReading> monitored_powers() const;

  // --- control surface (never exposed on the vendor port) -------------
  void set_port_power(const std::string& port, double dbm);
  bool has_port(const std::string& port) const;
  json snapshot() const;
  void set_fault(FaultMode m) { std::lock_guard lk(mu_); fault_ = m; }
  FaultMode fault() const { std::lock_guard lk(mu_); return fault_; }
  void reseed(uint64_t seed);
  double sample_latency();
  std::map<std::string, int> counters() const;
  void count(const std::string& op);

  void set_event_hook(EventHook h) { std::lock_guard lk(mu_); on_event_ = std::move(h); }
  void set_change_hook(ChangeHook h) { std::lock_guard lk(mu_); on_change_ = std::move(h); }

  /// Port -> power map of tx ports carrying light, for propagation.
  std::map<std::string, double> lit_tx_ports() const;
  /// rx port -> tx port of applied connections.
  std::map<std::string, std::string> routing() const;

 private:
  OpResult create_locked(const InternalConnection& c);
  OpResult delete_locked(const std::string& name);

  std::string id_;
  std::set<std::string> tx_ports_;
  std::set<std::string> rx_ports_;
  LatencyModel latency_;
  uint64_t seed_;
  std::mt19937_64 rng_;

  mutable std::mutex mu_;
  std::map<std::string, InternalConnection> connections_;
  std::set<std::string> rx_used_, tx_used_;
  std::map<std::string, sbi::MonitorConfig> monitors_;
  std::map<std::string, sbi::AlarmConfig> alarms_;
  std::map<std::string, double> powers_;
  FaultMode fault_ = FaultMode::NONE;
  std::map<std::string, int> counters_;
  EventHook on_event_;
  ChangeHook on_change_;
};

}  // namespace ocs::emu
