// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

#include "ocs/model/types.hpp"

namespace ocs::emu {

/// A ready-made evaluation topology: terminals A and Z joined by named
/// multi-hop routes, each route segment on its own duplex fiber pair.
struct Testbed {
  model::Topology topo;
  std::string a = "A";
  std::string z = "Z";
  std::map<std::string, std::vector<std::string>> routes;

  /// Link id of the strand `from` -> `to` belonging to `route`.
  static std::string segment_link(const std::string& route, const std::string& from,
                                  const std::string& to);
  /// The rx port of `ocs` facing its upstream neighbor on `route`.
  std::string upstream_rx_port(const std::string& route, const std::string& ocs) const;
  /// The strand feeding `ocs` on `route` (what a fiber pull darkens).
  std::string upstream_link(const std::string& route, const std::string& ocs) const;
};

/// The five-OCS lab testbed: routes R1 (1 intermediate), R2 (2) and R3 (3)
/// between terminals A and Z, with OCS3 on every route. Route device sets
/// are nested: R1 ⊂ R2 ⊂ R3.
Testbed make_fig7_testbed();

/// The large-scale emulation topology: three disjoint routes of
/// `n_per_route` OCSes sharing the two edge switches, 3n-4 devices total.
Testbed make_fig12_testbed(int n_per_route);

}  // namespace ocs::emu
