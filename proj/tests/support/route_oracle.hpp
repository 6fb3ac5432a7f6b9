// SPDX-License-Identifier: Apache-2.0
// Test-only brute-force oracle: exhaustively enumerates simple duplex routes
// between two terminals over AVAILABLE, unoccupied strands. Kept independent
// of the production path-computation code on purpose.
#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ocs/model/store.hpp"
#include "ocs/model/types.hpp"

namespace ocs::test {

using model::FiberLink;
using model::ResourceStatus;
using model::Topology;
using model::TopologyView;

struct OracleGraph {
  // duplex adjacency among OCSes and terminal attachments
  std::set<std::pair<std::string, std::string>> ocs_adj;     // unordered OCS pairs, stored both ways
  std::set<std::pair<std::string, std::string>> attachment;  // (terminal, ocs)
};

inline bool oracle_link_usable(const TopologyView& v, const FiberLink& l) {
  if (l.status != ResourceStatus::AVAILABLE) return false;
  auto usable_node = [&](const std::string& id) {
    if (auto it = v.topo.nodes.find(id); it != v.topo.nodes.end())
      return it->second.status == ResourceStatus::AVAILABLE;
    if (auto it = v.topo.terminals.find(id); it != v.topo.terminals.end())
      return it->second.status == ResourceStatus::AVAILABLE;
    return false;
  };
  if (!usable_node(l.src) || !usable_node(l.dst)) return false;
  if (v.unavailable_ports.count({l.src, l.src_port})) return false;
  if (v.unavailable_ports.count({l.dst, l.dst_port})) return false;
  if (v.topo.nodes.count(l.src) && v.occupied_tx.count({l.src, l.src_port})) return false;
  if (v.topo.nodes.count(l.dst) && v.occupied_rx.count({l.dst, l.dst_port})) return false;
  return true;
}

inline OracleGraph build_oracle_graph(const TopologyView& v) {
  OracleGraph g;
  std::set<std::pair<std::string, std::string>> strands;  // (src, dst) with a usable strand
  for (const auto& [id, l] : v.topo.links) {
    if (oracle_link_usable(v, l)) strands.insert({l.src, l.dst});
  }
  for (const auto& [src, dst] : strands) {
    if (!strands.count({dst, src})) continue;  // duplex needs both directions
    const bool src_ocs = v.topo.nodes.count(src) > 0;
    const bool dst_ocs = v.topo.nodes.count(dst) > 0;
    if (src_ocs && dst_ocs) {
      g.ocs_adj.insert({src, dst});
      g.ocs_adj.insert({dst, src});
    } else if (!src_ocs && dst_ocs) {
      g.attachment.insert({src, dst});
    }
  }
  return g;
}

/// Every simple route (sequence of OCS ids) from terminal a to terminal z.
inline std::vector<std::vector<std::string>> enumerate_routes(const TopologyView& v,
                                                              const std::string& a,
                                                              const std::string& z,
                                                              size_t max_len = 16) {
  OracleGraph g = build_oracle_graph(v);
  std::vector<std::vector<std::string>> found;
  std::vector<std::string> current;
  std::set<std::string> visited;

  std::function<void(const std::string&)> dfs = [&](const std::string& u) {
    if (g.attachment.count({z, u})) found.push_back(current);
    if (current.size() >= max_len) return;
    for (const auto& [x, y] : g.ocs_adj) {
      if (x != u || visited.count(y)) continue;
      visited.insert(y);
      current.push_back(y);
      dfs(y);
      current.pop_back();
      visited.erase(y);
    }
  };
  for (const auto& [term, u] : g.attachment) {
    if (term != a) continue;
    visited = {u};
    current = {u};
    dfs(u);
  }
  return found;
}

inline std::optional<size_t> oracle_min_hops(const TopologyView& v, const std::string& a,
                                             const std::string& z) {
  auto routes = enumerate_routes(v, a, z);
  if (routes.empty()) return std::nullopt;
  size_t best = routes.front().size();
  for (const auto& r : routes) best = std::min(best, r.size());
  return best;
}

/// Random topology for the oracle-equivalence property: up to `max_nodes`
/// OCSes, two terminals, random duplex/simplex strands and availability.
inline Topology random_topology(std::mt19937_64& rng, int max_nodes, int max_strands) {
  Topology t;
  std::uniform_int_distribution<int> node_count(2, max_nodes);
  const int n = node_count(rng);
  for (int i = 0; i < n; ++i) {
    model::OcsNode node;
    node.id = "N" + std::to_string(i);
    node.conn = {"127.0.0.1", 1};
    for (int p = 0; p < 8; ++p) {
      node.tx_ports.insert("t" + std::to_string(p));
      node.rx_ports.insert("r" + std::to_string(p));
    }
    t.nodes[node.id] = node;
  }
  t.terminals["A"] = {"A", {"127.0.0.1", 1}};
  t.terminals["Z"] = {"Z", {"127.0.0.1", 1}};

  std::map<std::pair<std::string, std::string>, int> used_port;
  int link_no = 0;
  auto add_strand = [&](const std::string& src, const std::string& dst) {
    int sp = used_port[{src, "t"}]++;
    int dp = used_port[{dst, "r"}]++;
    if (sp >= 8 || dp >= 8) return;
    model::FiberLink l;
    l.id = "L" + std::to_string(link_no++);
    l.src = src;
    l.dst = dst;
    l.src_port = t.nodes.count(src) ? "t" + std::to_string(sp) : "tx" + std::to_string(sp);
    l.dst_port = t.nodes.count(dst) ? "r" + std::to_string(dp) : "rx" + std::to_string(dp);
    t.links[l.id] = l;
  };

  // terminal attachments (one or two per terminal)
  std::uniform_int_distribution<int> pick_node(0, n - 1);
  std::uniform_int_distribution<int> coin(0, 1);
  for (const std::string term : {"A", "Z"}) {
    int attachments = 1 + coin(rng);
    for (int k = 0; k < attachments; ++k) {
      std::string u = "N" + std::to_string(pick_node(rng));
      add_strand(term, u);
      add_strand(u, term);
    }
  }
  std::uniform_int_distribution<int> strand_count(0, max_strands);
  const int strands = strand_count(rng);
  for (int k = 0; k < strands; ++k) {
    std::string u = "N" + std::to_string(pick_node(rng));
    std::string v = "N" + std::to_string(pick_node(rng));
    if (u == v) continue;
    add_strand(u, v);
    if (coin(rng)) add_strand(v, u);  // sometimes simplex-only, never usable
  }
  return t;
}

/// Random availability mask applied in place; returns the unavailable ids.
inline std::vector<std::string> random_mask(std::mt19937_64& rng, model::ResourceStore& store) {
  std::vector<std::string> masked;
  std::uniform_int_distribution<int> pct(0, 99);
  auto topo = store.topology();
  for (const auto& [id, node] : topo.nodes) {
    if (pct(rng) < 15) {
      store.update_resource_status(id, model::ObjectType::Switch,
                                   ResourceStatus::UNAVAILABLE);
      masked.push_back(id);
    }
  }
  for (const auto& [id, l] : topo.links) {
    if (pct(rng) < 10) {
      store.update_resource_status(id, model::ObjectType::Link, ResourceStatus::UNAVAILABLE);
      masked.push_back(id);
    }
  }
  return masked;
}

}  // namespace ocs::test
