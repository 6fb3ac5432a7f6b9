// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

namespace ocs::model {

using nlohmann::json;

struct ConnInfo {
  std::string host;
  int port = 0;

  bool valid() const { return !host.empty() && port >= 1 && port <= 65535; }
  bool operator==(const ConnInfo&) const = default;
};

enum class ResourceStatus { AVAILABLE, UNAVAILABLE };

inline const char* to_string(ResourceStatus s) {
  return s == ResourceStatus::AVAILABLE ? "AVAILABLE" : "UNAVAILABLE";
}

/// Parses AVAILABLE/UNAVAILABLE; throws std::invalid_argument otherwise.
ResourceStatus status_from_string(const std::string& s);

struct OcsNode {
  std::string id;
  ConnInfo conn;
  std::set<std::string> tx_ports;
  std::set<std::string> rx_ports;
  ResourceStatus status = ResourceStatus::AVAILABLE;
};

struct Terminal {
  std::string id;
  ConnInfo conn;
  ResourceStatus status = ResourceStatus::AVAILABLE;
};

/// One unidirectional fiber strand. Runs Tx(src) -> Rx(dst) when an OCS is
/// on either end; terminal-side port labels are free-form.
struct FiberLink {
  std::string id;
  std::string src;
  std::string dst;
  std::string src_port;
  std::string dst_port;
  ResourceStatus status = ResourceStatus::AVAILABLE;
};

/// Named unidirectional rx->tx cross-connect inside one OCS; the unit of
/// device configuration.
struct InternalConnection {
  std::string name;
  std::string rx_port;
  std::string tx_port;

  bool operator==(const InternalConnection&) const = default;
  auto operator<=>(const InternalConnection&) const = default;
};

/// One hop of a computed duplex route with the ports realizing both strands.
struct PathHop {
  std::string ocs_id;
  std::string fwd_rx;  // carries a->z
  std::string fwd_tx;
  std::string rev_rx;  // carries z->a
  std::string rev_tx;
  // links used around this hop are tracked on the FiberPath
};

struct FiberPath {
  std::string svc_id;
  std::string a;
  std::string z;
  std::vector<std::string> hops;
  std::map<std::string, std::vector<InternalConnection>> per_ocs_configs;
  std::vector<std::string> links;  // every strand id the duplex route uses
  ResourceStatus status = ResourceStatus::AVAILABLE;
};

struct Topology {
  std::map<std::string, OcsNode> nodes;
  std::map<std::string, Terminal> terminals;
  std::map<std::string, FiberLink> links;
};

/// Per-OCS grouped configuration: everything one device receives in one
/// payload for one path operation.
struct ConfigPayload {
  std::string ocs_id;
  std::vector<InternalConnection> connections_to_create;
  std::vector<std::string> connections_to_delete;
};

json to_json(const ConnInfo& c);
json to_json(const OcsNode& n);
json to_json(const Terminal& t);
json to_json(const FiberLink& l);
json to_json(const InternalConnection& c);
json to_json(const FiberPath& p);

ConnInfo conn_info_from_json(const json& j);
OcsNode node_from_json(const json& j);
Terminal terminal_from_json(const json& j);
FiberLink link_from_json(const json& j);
InternalConnection connection_from_json(const json& j);
FiberPath path_from_json(const json& j);

}  // namespace ocs::model
