// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "ocs/errors.hpp"
#include "ocs/model/types.hpp"

namespace ocs::model {

enum class ObjectType { Switch, Terminal, Link, Port };

/// Parses switch/terminal/link/port; throws NbiError(InvalidRange) otherwise.
ObjectType object_type_from_string(const std::string& s);

/// Read-only view handed to the path computation engine: the topology plus
/// the availability/occupancy predicates frozen at snapshot time.
struct TopologyView {
  Topology topo;
  std::set<std::pair<std::string, std::string>> unavailable_ports;  // (device, port)
  std::set<std::pair<std::string, std::string>> occupied_rx;        // (ocs, rx_port)
  std::set<std::pair<std::string, std::string>> occupied_tx;        // (ocs, tx_port)

  bool node_usable(const std::string& id) const;
  bool link_usable(const FiberLink& l) const;
};

/// The resource-management DB: fiber-layer inventory, provisioned paths and
/// the port-occupancy ledger. Single-writer/concurrent-reader; every mutation
/// is all-or-nothing. Persistence hooks are installed by the controller so
/// committed mutations reach the write-ahead log before the caller's response.
class ResourceStore {
 public:
  // --- registrations -------------------------------------------------
  void add_switch(const OcsNode& node);
  void add_terminal(const Terminal& t);
  void add_link(const FiberLink& l);

  /// Registers a whole parsed topology document atomically: on any error the
  /// store is left untouched.
  void add_network(const Topology& t);

  void update_resource_status(const std::string& object_id, ObjectType type,
                              ResourceStatus status);

  // --- paths ----------------------------------------------------------
  /// Records port occupancy for every strand the path uses; throws
  /// NbiError(BlockingOccured) and changes nothing if any port is taken
  /// or any touched resource is UNAVAILABLE.
  void allocate_path_resources(const FiberPath& path);
  void release_path_resources(const std::string& svc_id);

  void put_path(const FiberPath& path);
  void erase_path(const std::string& svc_id);
  std::optional<FiberPath> find_path(const std::string& svc_id) const;
  std::vector<FiberPath> all_paths() const;

  /// Sets the path status plus every OCS, port and link on the path.
  void update_path_availability(const std::string& svc_id, ResourceStatus status);

  // --- lookups ---------------------------------------------------------
  bool has_id(const std::string& id) const;
  std::optional<OcsNode> find_switch(const std::string& id) const;
  std::optional<Terminal> find_terminal(const std::string& id) const;
  std::optional<FiberLink> find_link(const std::string& id) const;
  Topology topology() const;
  TopologyView view() const;

  /// Paths whose hops or endpoints involve the given device (any port).
  std::vector<std::string> paths_touching(const std::string& device_id) const;

  /// Canonical dump of everything (sorted keys) for equivalence checks.
  json dump() const;

  /// Verifies referential integrity and port exclusivity across all
  /// allocated paths; returns human-readable violations (empty == clean).
  std::vector<std::string> audit() const;

  void mark_switch_status(const std::string& id, ResourceStatus st);

 private:
  void add_switch_locked(const OcsNode& node);
  void add_terminal_locked(const Terminal& t);
  void add_link_locked(const FiberLink& l);
  void occupy_ports_locked(const FiberPath& path, bool check_only);
  std::vector<std::pair<std::string, std::string>> path_ports(const FiberPath& p) const;

  mutable std::shared_mutex mu_;
  Topology topo_;
  std::map<std::string, FiberPath> paths_;
  std::set<std::pair<std::string, std::string>> unavailable_ports_;
  std::set<std::pair<std::string, std::string>> occupied_rx_;
  std::set<std::pair<std::string, std::string>> occupied_tx_;
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> alloc_rx_;
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> alloc_tx_;
};

}  // namespace ocs::model
