// SPDX-License-Identifier: Apache-2.0
#include "ocs/model/store.hpp"

#include <algorithm>
#include <mutex>

namespace ocs::model {

namespace {

void require(bool cond, ErrorCode code, const std::string& msg) {
  if (!cond) throw NbiError(code, msg);
}

}  // namespace

ObjectType object_type_from_string(const std::string& s) {
  if (s == "switch") return ObjectType::Switch;
  if (s == "terminal") return ObjectType::Terminal;
  if (s == "link") return ObjectType::Link;
  if (s == "port") return ObjectType::Port;
  throw NbiError(ErrorCode::InvalidRange, "unknown object_type: " + s);
}

bool TopologyView::node_usable(const std::string& id) const {
  if (auto it = topo.nodes.find(id); it != topo.nodes.end())
    return it->second.status == ResourceStatus::AVAILABLE;
  if (auto it = topo.terminals.find(id); it != topo.terminals.end())
    return it->second.status == ResourceStatus::AVAILABLE;
  return false;
}

bool TopologyView::link_usable(const FiberLink& l) const {
  if (l.status != ResourceStatus::AVAILABLE) return false;
  if (!node_usable(l.src) || !node_usable(l.dst)) return false;
  if (unavailable_ports.count({l.src, l.src_port}) ||
      unavailable_ports.count({l.dst, l.dst_port}))
    return false;
  // a strand is free only when both of its OCS-side ports are unoccupied
  if (topo.nodes.count(l.src) && occupied_tx.count({l.src, l.src_port})) return false;
  if (topo.nodes.count(l.dst) && occupied_rx.count({l.dst, l.dst_port})) return false;
  return true;
}

void ResourceStore::add_switch_locked(const OcsNode& node) {
  require(!node.id.empty() && node.conn.valid(), ErrorCode::InvalidRange,
          "switch id/conn_info malformed");
  require(!topo_.nodes.count(node.id) && !topo_.terminals.count(node.id) &&
              !topo_.links.count(node.id),
          ErrorCode::AlreadyExist, "resource id already exists: " + node.id);
  require(!node.tx_ports.empty() && !node.rx_ports.empty(), ErrorCode::InvalidRange,
          "tx_ports/rx_ports must be non-empty");
  for (const auto& p : node.tx_ports)
    require(!node.rx_ports.count(p), ErrorCode::InvalidRange,
            "port label in both tx and rx sets: " + p);
  topo_.nodes[node.id] = node;
}

void ResourceStore::add_terminal_locked(const Terminal& t) {
  require(!t.id.empty() && t.conn.valid(), ErrorCode::InvalidRange,
          "terminal id/conn_info malformed");
  require(!topo_.nodes.count(t.id) && !topo_.terminals.count(t.id) && !topo_.links.count(t.id),
          ErrorCode::AlreadyExist, "resource id already exists: " + t.id);
  topo_.terminals[t.id] = t;
}

void ResourceStore::add_link_locked(const FiberLink& l) {
  require(!l.id.empty() && !l.src_port.empty() && !l.dst_port.empty(),
          ErrorCode::InvalidRange, "link fields malformed");
  require(!topo_.nodes.count(l.id) && !topo_.terminals.count(l.id) && !topo_.links.count(l.id),
          ErrorCode::AlreadyExist, "resource id already exists: " + l.id);
  require(l.src != l.dst, ErrorCode::InvalidRange, "link endpoints must differ");
  const bool src_is_node = topo_.nodes.count(l.src) > 0;
  const bool dst_is_node = topo_.nodes.count(l.dst) > 0;
  require(src_is_node || topo_.terminals.count(l.src), ErrorCode::NotFound,
          "link src not registered: " + l.src);
  require(dst_is_node || topo_.terminals.count(l.dst), ErrorCode::NotFound,
          "link dst not registered: " + l.dst);
  // a strand runs Tx -> Rx
  if (src_is_node)
    require(topo_.nodes[l.src].tx_ports.count(l.src_port), ErrorCode::InvalidRange,
            "src_port is not a Tx port of " + l.src + ": " + l.src_port);
  if (dst_is_node)
    require(topo_.nodes[l.dst].rx_ports.count(l.dst_port), ErrorCode::InvalidRange,
            "dst_port is not an Rx port of " + l.dst + ": " + l.dst_port);
  for (const auto& [id, other] : topo_.links) {
    require(!(other.src == l.src && other.src_port == l.src_port), ErrorCode::AlreadyExist,
            "source port already wired: " + l.src + "/" + l.src_port);
    require(!(other.dst == l.dst && other.dst_port == l.dst_port), ErrorCode::AlreadyExist,
            "destination port already wired: " + l.dst + "/" + l.dst_port);
  }
  topo_.links[l.id] = l;
}

void ResourceStore::add_switch(const OcsNode& node) {
  std::unique_lock lk(mu_);
  add_switch_locked(node);
}

void ResourceStore::add_terminal(const Terminal& t) {
  std::unique_lock lk(mu_);
  add_terminal_locked(t);
}

void ResourceStore::add_link(const FiberLink& l) {
  std::unique_lock lk(mu_);
  add_link_locked(l);
}

void ResourceStore::add_network(const Topology& t) {
  std::unique_lock lk(mu_);
  Topology backup = topo_;
  try {
    for (const auto& [id, n] : t.nodes) add_switch_locked(n);
    for (const auto& [id, tm] : t.terminals) add_terminal_locked(tm);
    for (const auto& [id, l] : t.links) add_link_locked(l);
  } catch (...) {
    topo_ = std::move(backup);
    throw;
  }
}

void ResourceStore::update_resource_status(const std::string& object_id, ObjectType type,
                                           ResourceStatus status) {
  std::unique_lock lk(mu_);
  switch (type) {
    case ObjectType::Switch: {
      auto it = topo_.nodes.find(object_id);
      require(it != topo_.nodes.end(), ErrorCode::NotFound, "switch not found: " + object_id);
      it->second.status = status;
      return;
    }
    case ObjectType::Terminal: {
      auto it = topo_.terminals.find(object_id);
      require(it != topo_.terminals.end(), ErrorCode::NotFound,
              "terminal not found: " + object_id);
      it->second.status = status;
      return;
    }
    case ObjectType::Link: {
      auto it = topo_.links.find(object_id);
      require(it != topo_.links.end(), ErrorCode::NotFound, "link not found: " + object_id);
      it->second.status = status;
      return;
    }
    case ObjectType::Port: {
      // ports are addressed as "<device>/<label>"
      auto slash = object_id.find('/');
      require(slash != std::string::npos, ErrorCode::InvalidRange,
              "port object_id must be <device>/<port>: " + object_id);
      std::string dev = object_id.substr(0, slash);
      std::string port = object_id.substr(slash + 1);
      auto node = topo_.nodes.find(dev);
      if (node != topo_.nodes.end()) {
        require(node->second.tx_ports.count(port) || node->second.rx_ports.count(port),
                ErrorCode::NotFound, "no such port on " + dev + ": " + port);
      } else {
        require(topo_.terminals.count(dev) > 0, ErrorCode::NotFound,
                "device not found: " + dev);
      }
      if (status == ResourceStatus::UNAVAILABLE)
        unavailable_ports_.insert({dev, port});
      else
        unavailable_ports_.erase({dev, port});
      return;
    }
  }
}

std::vector<std::pair<std::string, std::string>> ResourceStore::path_ports(
    const FiberPath& p) const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [ocs, conns] : p.per_ocs_configs) {
    for (const auto& c : conns) {
      out.push_back({ocs, c.rx_port});
      out.push_back({ocs, c.tx_port});
    }
  }
  return out;
}

void ResourceStore::occupy_ports_locked(const FiberPath& path, bool check_only) {
  std::vector<std::pair<std::string, std::string>> rx, tx;
  for (const auto& [ocs, conns] : path.per_ocs_configs) {
    auto node = topo_.nodes.find(ocs);
    require(node != topo_.nodes.end(), ErrorCode::NotFound, "unknown OCS in path: " + ocs);
    require(node->second.status == ResourceStatus::AVAILABLE, ErrorCode::BlockingOccured,
            "OCS unavailable: " + ocs);
    for (const auto& c : conns) {
      require(!occupied_rx_.count({ocs, c.rx_port}), ErrorCode::BlockingOccured,
              "rx port occupied: " + ocs + "/" + c.rx_port);
      require(!occupied_tx_.count({ocs, c.tx_port}), ErrorCode::BlockingOccured,
              "tx port occupied: " + ocs + "/" + c.tx_port);
      require(!unavailable_ports_.count({ocs, c.rx_port}) &&
                  !unavailable_ports_.count({ocs, c.tx_port}),
              ErrorCode::BlockingOccured, "port unavailable on " + ocs);
      rx.push_back({ocs, c.rx_port});
      tx.push_back({ocs, c.tx_port});
    }
  }
  for (const auto& lid : path.links) {
    auto it = topo_.links.find(lid);
    require(it != topo_.links.end(), ErrorCode::NotFound, "unknown link in path: " + lid);
    require(it->second.status == ResourceStatus::AVAILABLE, ErrorCode::BlockingOccured,
            "link unavailable: " + lid);
  }
  // duplicate ports inside one path would double-book an OCS against itself
  auto rx_sorted = rx, tx_sorted = tx;
  std::sort(rx_sorted.begin(), rx_sorted.end());
  std::sort(tx_sorted.begin(), tx_sorted.end());
  require(std::adjacent_find(rx_sorted.begin(), rx_sorted.end()) == rx_sorted.end() &&
              std::adjacent_find(tx_sorted.begin(), tx_sorted.end()) == tx_sorted.end(),
          ErrorCode::BlockingOccured, "path reuses a port");
  if (check_only) return;
  for (const auto& p : rx) occupied_rx_.insert(p);
  for (const auto& p : tx) occupied_tx_.insert(p);
  alloc_rx_[path.svc_id] = rx;
  alloc_tx_[path.svc_id] = tx;
}

void ResourceStore::allocate_path_resources(const FiberPath& path) {
  std::unique_lock lk(mu_);
  require(!alloc_rx_.count(path.svc_id), ErrorCode::AlreadyExist,
          "path already allocated: " + path.svc_id);
  occupy_ports_locked(path, /*check_only=*/true);
  occupy_ports_locked(path, /*check_only=*/false);
}

void ResourceStore::release_path_resources(const std::string& svc_id) {
  std::unique_lock lk(mu_);
  if (auto it = alloc_rx_.find(svc_id); it != alloc_rx_.end()) {
    for (const auto& p : it->second) occupied_rx_.erase(p);
    alloc_rx_.erase(it);
  }
  if (auto it = alloc_tx_.find(svc_id); it != alloc_tx_.end()) {
    for (const auto& p : it->second) occupied_tx_.erase(p);
    alloc_tx_.erase(it);
  }
}

void ResourceStore::put_path(const FiberPath& path) {
  std::unique_lock lk(mu_);
  paths_[path.svc_id] = path;
}

void ResourceStore::erase_path(const std::string& svc_id) {
  std::unique_lock lk(mu_);
  paths_.erase(svc_id);
}

std::optional<FiberPath> ResourceStore::find_path(const std::string& svc_id) const {
  std::shared_lock lk(mu_);
  auto it = paths_.find(svc_id);
  if (it == paths_.end()) return std::nullopt;
  return it->second;
}

std::vector<FiberPath> ResourceStore::all_paths() const {
  std::shared_lock lk(mu_);
  std::vector<FiberPath> out;
  for (const auto& [id, p] : paths_) out.push_back(p);
  return out;
}

void ResourceStore::update_path_availability(const std::string& svc_id,
                                             ResourceStatus status) {
  std::unique_lock lk(mu_);
  auto it = paths_.find(svc_id);
  require(it != paths_.end(), ErrorCode::NotFound, "path not found: " + svc_id);
  it->second.status = status;
  for (const auto& hop : it->second.hops) {
    if (auto n = topo_.nodes.find(hop); n != topo_.nodes.end()) n->second.status = status;
  }
  for (const auto& [dev, port] : path_ports(it->second)) {
    if (status == ResourceStatus::UNAVAILABLE)
      unavailable_ports_.insert({dev, port});
    else
      unavailable_ports_.erase({dev, port});
  }
  for (const auto& lid : it->second.links) {
    if (auto l = topo_.links.find(lid); l != topo_.links.end()) l->second.status = status;
  }
}

bool ResourceStore::has_id(const std::string& id) const {
  std::shared_lock lk(mu_);
  return topo_.nodes.count(id) || topo_.terminals.count(id) || topo_.links.count(id);
}

std::optional<OcsNode> ResourceStore::find_switch(const std::string& id) const {
  std::shared_lock lk(mu_);
  auto it = topo_.nodes.find(id);
  if (it == topo_.nodes.end()) return std::nullopt;
  return it->second;
}

std::optional<Terminal> ResourceStore::find_terminal(const std::string& id) const {
  std::shared_lock lk(mu_);
  auto it = topo_.terminals.find(id);
  if (it == topo_.terminals.end()) return std::nullopt;
  return it->second;
}

std::optional<FiberLink> ResourceStore::find_link(const std::string& id) const {
  std::shared_lock lk(mu_);
  auto it = topo_.links.find(id);
  if (it == topo_.links.end()) return std::nullopt;
  return it->second;
}

Topology ResourceStore::topology() const {
  std::shared_lock lk(mu_);
  return topo_;
}

TopologyView ResourceStore::view() const {
  std::shared_lock lk(mu_);
  return TopologyView{topo_, unavailable_ports_, occupied_rx_, occupied_tx_};
}

std::vector<std::string> ResourceStore::paths_touching(const std::string& device_id) const {
  std::shared_lock lk(mu_);
  std::vector<std::string> out;
  for (const auto& [svc, p] : paths_) {
    if (p.a == device_id || p.z == device_id ||
        std::find(p.hops.begin(), p.hops.end(), device_id) != p.hops.end())
      out.push_back(svc);
  }
  return out;
}

json ResourceStore::dump() const {
  std::shared_lock lk(mu_);
  json nodes = json::object(), terminals = json::object(), links = json::object(),
       paths = json::object();
  for (const auto& [id, n] : topo_.nodes) nodes[id] = to_json(n);
  for (const auto& [id, t] : topo_.terminals) terminals[id] = to_json(t);
  for (const auto& [id, l] : topo_.links) links[id] = to_json(l);
  for (const auto& [id, p] : paths_) paths[id] = to_json(p);
  json up = json::array();
  for (const auto& [dev, port] : unavailable_ports_) up.push_back(dev + "/" + port);
  return json{{"nodes", nodes},
              {"terminals", terminals},
              {"links", links},
              {"paths", paths},
              {"unavailable_ports", up}};
}

std::vector<std::string> ResourceStore::audit() const {
  std::shared_lock lk(mu_);
  std::vector<std::string> bad;
  for (const auto& [id, l] : topo_.links) {
    if (!topo_.nodes.count(l.src) && !topo_.terminals.count(l.src))
      bad.push_back("link " + id + " src dangling: " + l.src);
    if (!topo_.nodes.count(l.dst) && !topo_.terminals.count(l.dst))
      bad.push_back("link " + id + " dst dangling: " + l.dst);
  }
  std::map<std::pair<std::string, std::string>, int> rx_uses, tx_uses;
  for (const auto& [svc, p] : paths_) {
    for (const auto& [ocs, conns] : p.per_ocs_configs) {
      for (const auto& c : conns) {
        rx_uses[{ocs, c.rx_port}]++;
        tx_uses[{ocs, c.tx_port}]++;
      }
    }
  }
  for (const auto& [key, n] : rx_uses)
    if (n > 1) bad.push_back("rx port double-booked: " + key.first + "/" + key.second);
  for (const auto& [key, n] : tx_uses)
    if (n > 1) bad.push_back("tx port double-booked: " + key.first + "/" + key.second);
  return bad;
}

void ResourceStore::mark_switch_status(const std::string& id, ResourceStatus st) {
  std::unique_lock lk(mu_);
  if (auto it = topo_.nodes.find(id); it != topo_.nodes.end()) it->second.status = st;
}

}  // namespace ocs::model
