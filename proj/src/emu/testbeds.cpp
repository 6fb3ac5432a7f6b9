// SPDX-License-Identifier: Apache-2.0
#include "ocs/emu/testbeds.hpp"

#include <cstdio>
#include <stdexcept>

namespace ocs::emu {

namespace {

model::OcsNode& node(model::Topology& t, const std::string& id) {
  auto it = t.nodes.find(id);
  if (it == t.nodes.end()) {
    model::OcsNode n;
    n.id = id;
    n.conn = {"127.0.0.1", 1};  // placeholder; the fleet rewrites endpoints
    it = t.nodes.emplace(id, n).first;
  }
  return it->second;
}

void add_terminal(model::Topology& t, const std::string& id) {
  model::Terminal term;
  term.id = id;
  term.conn = {"127.0.0.1", 1};
  t.terminals[id] = term;
}

// duplex fiber pair between two OCSes, owned by one route
void add_duplex(model::Topology& t, const std::string& route, const std::string& u,
                const std::string& v) {
  auto& nu = node(t, u);
  auto& nv = node(t, v);
  const std::string u_tx = "T-" + route + "-" + v;
  const std::string u_rx = "R-" + route + "-" + v;
  const std::string v_tx = "T-" + route + "-" + u;
  const std::string v_rx = "R-" + route + "-" + u;
  nu.tx_ports.insert(u_tx);
  nu.rx_ports.insert(u_rx);
  nv.tx_ports.insert(v_tx);
  nv.rx_ports.insert(v_rx);
  model::FiberLink fwd{Testbed::segment_link(route, u, v), u, v, u_tx, v_rx};
  model::FiberLink rev{Testbed::segment_link(route, v, u), v, u, v_tx, u_rx};
  t.links[fwd.id] = fwd;
  t.links[rev.id] = rev;
}

// terminal attachment: term.tx -> ocs, ocs -> term.rx
void add_attachment(model::Topology& t, const std::string& term, const std::string& ocs) {
  auto& n = node(t, ocs);
  n.rx_ports.insert("R-" + term);
  n.tx_ports.insert("T-" + term);
  model::FiberLink in{"at:" + term + ">" + ocs, term, ocs, "tx", "R-" + term};
  model::FiberLink out{"at:" + ocs + ">" + term, ocs, term, "T-" + term, "rx"};
  t.links[in.id] = in;
  t.links[out.id] = out;
}

void wire_route(Testbed& tb, const std::string& route, const std::vector<std::string>& hops) {
  for (size_t i = 0; i + 1 < hops.size(); ++i) add_duplex(tb.topo, route, hops[i], hops[i + 1]);
  tb.routes[route] = hops;
}

}  // namespace

std::string Testbed::segment_link(const std::string& route, const std::string& from,
                                  const std::string& to) {
  return route + ":" + from + ">" + to;
}

std::string Testbed::upstream_rx_port(const std::string& route, const std::string& ocs) const {
  const auto& hops = routes.at(route);
  for (size_t i = 0; i < hops.size(); ++i) {
    if (hops[i] != ocs) continue;
    if (i == 0) return "R-" + a;
    return "R-" + route + "-" + hops[i - 1];
  }
  throw std::out_of_range(ocs + " is not on route " + route);
}

std::string Testbed::upstream_link(const std::string& route, const std::string& ocs) const {
  const auto& hops = routes.at(route);
  for (size_t i = 0; i < hops.size(); ++i) {
    if (hops[i] != ocs) continue;
    if (i == 0) return "at:" + a + ">" + ocs;
    return segment_link(route, hops[i - 1], ocs);
  }
  throw std::out_of_range(ocs + " is not on route " + route);
}

Testbed make_fig7_testbed() {
  Testbed tb;
  add_terminal(tb.topo, tb.a);
  add_terminal(tb.topo, tb.z);
  wire_route(tb, "R1", {"OCS1", "OCS3", "OCS5"});
  wire_route(tb, "R2", {"OCS1", "OCS3", "OCS4", "OCS5"});
  wire_route(tb, "R3", {"OCS1", "OCS2", "OCS3", "OCS4", "OCS5"});
  add_attachment(tb.topo, tb.a, "OCS1");
  add_attachment(tb.topo, tb.z, "OCS5");
  return tb;
}

Testbed make_fig12_testbed(int n_per_route) {
  if (n_per_route < 3) throw std::invalid_argument("route needs at least 3 OCSes");
  Testbed tb;
  add_terminal(tb.topo, tb.a);
  add_terminal(tb.topo, tb.z);
  for (const std::string route : {"R1", "R2", "R3"}) {
    std::vector<std::string> hops{"EA"};
    for (int i = 1; i <= n_per_route - 2; ++i) {
      char buf[16];
      std::snprintf(buf, sizeof(buf), "%s-%03d", route.c_str(), i);
      hops.push_back(buf);
    }
    hops.push_back("EZ");
    wire_route(tb, route, hops);
  }
  add_attachment(tb.topo, tb.a, "EA");
  add_attachment(tb.topo, tb.z, "EZ");
  return tb;
}

}  // namespace ocs::emu
