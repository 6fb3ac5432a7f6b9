// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "ocs/errors.hpp"
#include "ocs/model/store.hpp"
#include "ocs/model/types.hpp"

namespace ocs::fpce {

using model::ConfigPayload;
using model::FiberPath;
using model::InternalConnection;
using model::PathHop;
using model::TopologyView;

struct PathRequest {
  std::string a;
  std::string z;
  std::string algorithm = "dijkstra";
  std::optional<std::vector<std::string>> forced_hops;
};

/// A usable duplex pairing of strands between two elements: fwd carries
/// traffic toward the "far" side, rev back.
struct StrandPair {
  std::string fwd_link;
  std::string rev_link;
};

/// The duplex-adjacency view FPCE route algorithms work on: only AVAILABLE,
/// unoccupied strands with both directions present contribute edges.
struct DuplexGraph {
  std::map<std::pair<std::string, std::string>, std::vector<StrandPair>> adj;     // (ocs,ocs)
  std::map<std::pair<std::string, std::string>, std::vector<StrandPair>> attach;  // (term,ocs)
  std::map<std::string, std::vector<std::string>> neighbors;  // sorted, deduped
  const TopologyView* view = nullptr;

  static DuplexGraph build(const TopologyView& view);
  std::vector<std::string> attached_ocses(const std::string& terminal) const;
};

struct ComputedRoute {
  std::vector<PathHop> hops;
  std::vector<std::string> links;
};

/// A route algorithm yields the OCS hop sequence; the engine realizes ports.
using Algorithm =
    std::function<std::vector<std::string>(const DuplexGraph&, const PathRequest&)>;

class Engine {
 public:
  Engine();

  /// Computes a duplex route over available, unoccupied resources.
  /// Throws NbiError(BlockingOccured) when no feasible route exists,
  /// NotFound for unknown endpoints/forced hops, InvalidRange for an
  /// unregistered algorithm name.
  ComputedRoute compute_path(const PathRequest& req, const TopologyView& view) const;

  /// One grouped payload per hop: the two unidirectional connections
  /// <svc>-fwd and <svc>-rev.
  static std::vector<ConfigPayload> generate_create_configs(const ComputedRoute& route,
                                                            const std::string& svc_id);
  static std::vector<ConfigPayload> generate_delete_configs(const FiberPath& path);

  void register_algorithm(const std::string& name, Algorithm alg);

  /// Minimum-hop sequence with lexicographically-smallest tie break; the
  /// default "dijkstra" algorithm. Exposed for alternative algorithms to
  /// build on.
  static std::vector<std::string> shortest_hops(const DuplexGraph& g, const std::string& a,
                                                const std::string& z);

 private:
  ComputedRoute realize_ports(const DuplexGraph& g, const std::vector<std::string>& hops,
                              const PathRequest& req) const;

  mutable std::mutex mu_;
  std::map<std::string, Algorithm> algorithms_;
};

/// Builds a FiberPath record from a computed route.
FiberPath make_fiber_path(const std::string& svc_id, const std::string& a,
                          const std::string& z, const ComputedRoute& route);

}  // namespace ocs::fpce
