// SPDX-License-Identifier: Apache-2.0
#include "ocs/fpce/fpce.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <set>

namespace ocs::fpce {

namespace {

// deterministic ordering of candidate strand pairs
void sort_pairs(std::vector<StrandPair>& pairs, const TopologyView& view) {
  auto key = [&](const StrandPair& p) {
    const auto& f = view.topo.links.at(p.fwd_link);
    const auto& r = view.topo.links.at(p.rev_link);
    return std::tuple(f.src_port, f.dst_port, r.src_port, r.dst_port);
  };
  std::sort(pairs.begin(), pairs.end(),
            [&](const StrandPair& x, const StrandPair& y) { return key(x) < key(y); });
}

}  // namespace

DuplexGraph DuplexGraph::build(const TopologyView& view) {
  DuplexGraph g;
  g.view = &view;
  // usable strands grouped by (src element, dst element)
  std::map<std::pair<std::string, std::string>, std::vector<std::string>> strands;
  for (const auto& [id, l] : view.topo.links) {
    if (view.link_usable(l)) strands[{l.src, l.dst}].push_back(id);
  }
  for (auto& [key, ids] : strands) std::sort(ids.begin(), ids.end());

  auto pair_up = [&](const std::string& from, const std::string& to) {
    std::vector<StrandPair> pairs;
    auto fwd = strands.find({from, to});
    auto rev = strands.find({to, from});
    if (fwd == strands.end() || rev == strands.end()) return pairs;
    for (const auto& f : fwd->second)
      for (const auto& r : rev->second) pairs.push_back({f, r});
    sort_pairs(pairs, view);
    return pairs;
  };

  for (const auto& [key, ids] : strands) {
    const auto& [src, dst] = key;
    const bool src_ocs = view.topo.nodes.count(src) > 0;
    const bool dst_ocs = view.topo.nodes.count(dst) > 0;
    if (src_ocs && dst_ocs) {
      auto pairs = pair_up(src, dst);
      if (!pairs.empty()) {
        g.adj[{src, dst}] = pairs;
        g.neighbors[src].push_back(dst);
      }
    } else if (!src_ocs && dst_ocs) {
      // terminal -> OCS attachment; require the return strand as well
      auto pairs = pair_up(src, dst);
      if (!pairs.empty()) g.attach[{src, dst}] = pairs;
    }
  }
  for (auto& [id, nbrs] : g.neighbors) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
  }
  return g;
}

std::vector<std::string> DuplexGraph::attached_ocses(const std::string& terminal) const {
  std::vector<std::string> out;
  for (const auto& [key, pairs] : attach) {
    if (key.first == terminal && !pairs.empty()) out.push_back(key.second);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> Engine::shortest_hops(const DuplexGraph& g, const std::string& a,
                                               const std::string& z) {
  // hop-count distance from each OCS to terminal z (counting the OCS itself)
  std::map<std::string, int> dist;
  std::queue<std::string> q;
  for (const auto& u : g.attached_ocses(z)) {
    dist[u] = 1;
    q.push(u);
  }
  while (!q.empty()) {
    auto u = q.front();
    q.pop();
    auto nit = g.neighbors.find(u);  // duplex adjacency is symmetric
    if (nit == g.neighbors.end()) continue;
    for (const auto& v : nit->second) {
      if (!dist.count(v)) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
    }
  }
  int best = std::numeric_limits<int>::max();
  std::string first;
  for (const auto& u : g.attached_ocses(a)) {
    auto it = dist.find(u);
    if (it == dist.end()) continue;
    if (it->second < best || (it->second == best && u < first)) {
      best = it->second;
      first = u;
    }
  }
  if (first.empty())
    throw NbiError(ErrorCode::BlockingOccured, "no feasible path between " + a + " and " + z);
  std::vector<std::string> hops{first};
  std::string cur = first;
  while (dist.at(cur) > 1) {
    std::string next;
    auto nit = g.neighbors.find(cur);
    if (nit == g.neighbors.end()) break;
    for (const auto& v : nit->second) {
      auto dv = dist.find(v);
      if (dv != dist.end() && dv->second == dist.at(cur) - 1) {
        next = v;  // neighbors are sorted, first match is the smallest id
        break;
      }
    }
    if (next.empty())
      throw NbiError(ErrorCode::BlockingOccured, "route construction failed");
    hops.push_back(next);
    cur = next;
  }
  return hops;
}

Engine::Engine() {
  algorithms_["dijkstra"] = [](const DuplexGraph& g, const PathRequest& req) {
    return shortest_hops(g, req.a, req.z);
  };
}

void Engine::register_algorithm(const std::string& name, Algorithm alg) {
  std::lock_guard lk(mu_);
  if (algorithms_.count(name))
    throw NbiError(ErrorCode::AlreadyExist, "algorithm already registered: " + name);
  algorithms_[name] = std::move(alg);
}

ComputedRoute Engine::realize_ports(const DuplexGraph& g, const std::vector<std::string>& hops,
                                    const PathRequest& req) const {
  const TopologyView& view = *g.view;
  auto pick = [&](const std::map<std::pair<std::string, std::string>,
                                 std::vector<StrandPair>>& table,
                  const std::string& x, const std::string& y) -> const StrandPair& {
    auto it = table.find({x, y});
    if (it == table.end() || it->second.empty())
      throw NbiError(ErrorCode::BlockingOccured,
                     "no usable duplex strand between " + x + " and " + y);
    return it->second.front();
  };

  ComputedRoute route;
  route.hops.resize(hops.size());
  for (size_t i = 0; i < hops.size(); ++i) route.hops[i].ocs_id = hops[i];

  const auto& in_pair = pick(g.attach, req.a, hops.front());
  {
    const auto& f = view.topo.links.at(in_pair.fwd_link);  // a -> first
    const auto& r = view.topo.links.at(in_pair.rev_link);  // first -> a
    route.hops.front().fwd_rx = f.dst_port;
    route.hops.front().rev_tx = r.src_port;
    route.links.push_back(in_pair.fwd_link);
    route.links.push_back(in_pair.rev_link);
  }
  for (size_t i = 0; i + 1 < hops.size(); ++i) {
    const auto& pair = pick(g.adj, hops[i], hops[i + 1]);
    const auto& f = view.topo.links.at(pair.fwd_link);  // hops[i] -> hops[i+1]
    const auto& r = view.topo.links.at(pair.rev_link);
    route.hops[i].fwd_tx = f.src_port;
    route.hops[i + 1].fwd_rx = f.dst_port;
    route.hops[i + 1].rev_tx = r.src_port;
    route.hops[i].rev_rx = r.dst_port;
    route.links.push_back(pair.fwd_link);
    route.links.push_back(pair.rev_link);
  }
  const auto& out_pair = pick(g.attach, req.z, hops.back());
  {
    const auto& f = view.topo.links.at(out_pair.fwd_link);  // z -> last (carries z->a)
    const auto& r = view.topo.links.at(out_pair.rev_link);  // last -> z
    route.hops.back().rev_rx = f.dst_port;
    route.hops.back().fwd_tx = r.src_port;
    route.links.push_back(out_pair.fwd_link);
    route.links.push_back(out_pair.rev_link);
  }
  return route;
}

ComputedRoute Engine::compute_path(const PathRequest& req, const TopologyView& view) const {
  if (!view.topo.terminals.count(req.a))
    throw NbiError(ErrorCode::NotFound, "terminal not found: " + req.a);
  if (!view.topo.terminals.count(req.z))
    throw NbiError(ErrorCode::NotFound, "terminal not found: " + req.z);

  DuplexGraph g = DuplexGraph::build(view);

  std::vector<std::string> hops;
  if (req.forced_hops) {
    const auto& forced = *req.forced_hops;
    if (forced.empty())
      throw NbiError(ErrorCode::InvalidRange, "ocs_list must be non-empty when given");
    std::set<std::string> seen;
    for (const auto& h : forced) {
      if (!view.topo.nodes.count(h))
        throw NbiError(ErrorCode::NotFound, "OCS in ocs_list not found: " + h);
      if (!seen.insert(h).second)
        throw NbiError(ErrorCode::BlockingOccured, "ocs_list repeats OCS " + h);
    }
    hops = forced;
  } else {
    Algorithm alg;
    {
      std::lock_guard lk(mu_);
      auto it = algorithms_.find(req.algorithm);
      if (it == algorithms_.end())
        throw NbiError(ErrorCode::InvalidRange, "unknown pce_alg: " + req.algorithm);
      alg = it->second;
    }
    hops = alg(g, req);
    if (hops.empty())
      throw NbiError(ErrorCode::BlockingOccured, "algorithm produced no route");
  }
  return realize_ports(g, hops, req);
}

std::vector<ConfigPayload> Engine::generate_create_configs(const ComputedRoute& route,
                                                           const std::string& svc_id) {
  std::vector<ConfigPayload> payloads;
  for (const auto& hop : route.hops) {
    ConfigPayload p;
    p.ocs_id = hop.ocs_id;
    p.connections_to_create.push_back({svc_id + "-fwd", hop.fwd_rx, hop.fwd_tx});
    p.connections_to_create.push_back({svc_id + "-rev", hop.rev_rx, hop.rev_tx});
    payloads.push_back(std::move(p));
  }
  return payloads;
}

std::vector<ConfigPayload> Engine::generate_delete_configs(const FiberPath& path) {
  std::vector<ConfigPayload> payloads;
  for (const auto& hop : path.hops) {
    ConfigPayload p;
    p.ocs_id = hop;
    auto it = path.per_ocs_configs.find(hop);
    if (it != path.per_ocs_configs.end()) {
      for (const auto& c : it->second) p.connections_to_delete.push_back(c.name);
    }
    payloads.push_back(std::move(p));
  }
  return payloads;
}

FiberPath make_fiber_path(const std::string& svc_id, const std::string& a,
                          const std::string& z, const ComputedRoute& route) {
  FiberPath p;
  p.svc_id = svc_id;
  p.a = a;
  p.z = z;
  for (const auto& hop : route.hops) {
    p.hops.push_back(hop.ocs_id);
    p.per_ocs_configs[hop.ocs_id] = {
        {svc_id + "-fwd", hop.fwd_rx, hop.fwd_tx},
        {svc_id + "-rev", hop.rev_rx, hop.rev_tx},
    };
  }
  p.links = route.links;
  return p;
}

}  // namespace ocs::fpce
