// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ocs/model/store.hpp"
#include "ocs/model/topology_file.hpp"

using namespace ocs;
using namespace ocs::model;

namespace {

OcsNode switch_node(const std::string& id, int ports = 4) {
  OcsNode n;
  n.id = id;
  n.conn = {"127.0.0.1", 9000};
  for (int i = 1; i <= ports; ++i) {
    n.tx_ports.insert("T" + std::to_string(i));
    n.rx_ports.insert("R" + std::to_string(i));
  }
  return n;
}

Terminal terminal(const std::string& id) { return Terminal{id, {"127.0.0.1", 9000}}; }

FiberLink link(const std::string& id, const std::string& src, const std::string& sp,
               const std::string& dst, const std::string& dp) {
  return FiberLink{id, src, dst, sp, dp};
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const NbiError& e) {
    return e.code();
  }
  FAIL("expected an NbiError");
  return ErrorCode::PathOperFailed;
}

}  // namespace

TEST_CASE("switch registration enforces invariants") {
  ResourceStore store;
  store.add_switch(switch_node("OCS1"));
  CHECK(store.find_switch("OCS1").has_value());
  CHECK(store.find_switch("OCS1")->status == ResourceStatus::AVAILABLE);

  CHECK(code_of([&] { store.add_switch(switch_node("OCS1")); }) == ErrorCode::AlreadyExist);

  OcsNode overlapping = switch_node("OCS2");
  overlapping.rx_ports.insert("T1");  // label on both sides
  CHECK(code_of([&] { store.add_switch(overlapping); }) == ErrorCode::InvalidRange);

  OcsNode empty_ports = switch_node("OCS3");
  empty_ports.tx_ports.clear();
  CHECK(code_of([&] { store.add_switch(empty_ports); }) == ErrorCode::InvalidRange);

  store.add_terminal(terminal("A"));
  CHECK(code_of([&] { store.add_switch(switch_node("A")); }) == ErrorCode::AlreadyExist);
}

TEST_CASE("link registration follows the Tx->Rx strand rule") {
  ResourceStore store;
  store.add_switch(switch_node("OCS1"));
  store.add_switch(switch_node("OCS2"));
  store.add_terminal(terminal("A"));

  store.add_link(link("L1", "OCS1", "T1", "OCS2", "R1"));
  CHECK(store.find_link("L1").has_value());

  CHECK(code_of([&] { store.add_link(link("L2", "OCS9", "T1", "OCS2", "R2")); }) ==
        ErrorCode::NotFound);
  // an Rx label used as the source port violates the strand direction
  CHECK(code_of([&] { store.add_link(link("L3", "OCS1", "R1", "OCS2", "R2")); }) ==
        ErrorCode::InvalidRange);
  CHECK(code_of([&] { store.add_link(link("L4", "OCS1", "T2", "OCS2", "T1")); }) ==
        ErrorCode::InvalidRange);
  // source port already wired
  CHECK(code_of([&] { store.add_link(link("L5", "OCS1", "T1", "OCS2", "R2")); }) ==
        ErrorCode::AlreadyExist);
  CHECK(code_of([&] { store.add_link(link("L6", "OCS1", "T2", "OCS2", "R1")); }) ==
        ErrorCode::AlreadyExist);
  CHECK(code_of([&] { store.add_link(link("L7", "OCS1", "T2", "OCS1", "R2")); }) ==
        ErrorCode::InvalidRange);

  // terminal-side port labels are free-form
  store.add_link(link("L8", "A", "tx", "OCS1", "R1"));
  CHECK(store.audit().empty());
}

TEST_CASE("bulk load equals element-by-element registration") {
  const std::string doc = R"({
    "switches": [
      {"id":"OCS1","host":"127.0.0.1","port":9001,"tx_ports":["T1","T2"],"rx_ports":["R1","R2"]},
      {"id":"OCS2","host":"127.0.0.1","port":9002,"tx_ports":["T1","T2"],"rx_ports":["R1","R2"]}
    ],
    "terminals": [{"id":"A","host":"127.0.0.1","port":9003}],
    "links": [
      {"id":"L1","src":"OCS1","dst":"OCS2","src_port":"T1","dst_port":"R1"},
      {"id":"L2","src":"A","dst":"OCS1","src_port":"tx","dst_port":"R1"}
    ]
  })";

  ResourceStore bulk;
  bulk.add_network(parse_topology_text(doc));

  ResourceStore seq;
  auto topo = parse_topology_text(doc);
  for (const auto& [id, n] : topo.nodes) seq.add_switch(n);
  for (const auto& [id, t] : topo.terminals) seq.add_terminal(t);
  for (const auto& [id, l] : topo.links) seq.add_link(l);

  CHECK(bulk.dump() == seq.dump());
}

TEST_CASE("bulk load is all-or-nothing") {
  ResourceStore store;
  store.add_switch(switch_node("OCS1"));
  auto before = store.dump();

  Topology topo;
  topo.nodes["OCS2"] = switch_node("OCS2");
  topo.nodes["OCS1"] = switch_node("OCS1");  // duplicate
  CHECK(code_of([&] { store.add_network(topo); }) == ErrorCode::AlreadyExist);
  CHECK(store.dump() == before);

  // empty document is a valid no-op
  store.add_network(Topology{});
  CHECK(store.dump() == before);
}

TEST_CASE("YAML rendering of the topology schema is accepted") {
  const std::string yaml = R"(
switches:
  - id: OCS1
    host: 127.0.0.1
    port: 9001
    tx_ports: [T1, T2]
    rx_ports: [R1, R2]
terminals:
  - id: A
    host: 127.0.0.1
    port: 9003
links:
  - id: L1
    src: A
    dst: OCS1
    src_port: tx
    dst_port: R1
)";
  auto topo = parse_topology_text(yaml);
  CHECK(topo.nodes.count("OCS1") == 1);
  CHECK(topo.terminals.count("A") == 1);
  CHECK(topo.links.at("L1").dst_port == "R1");

  CHECK(code_of([] { parse_topology_text("{{{not a doc"); }) == ErrorCode::InvalidRange);
}

TEST_CASE("status updates and port addressing") {
  ResourceStore store;
  store.add_switch(switch_node("OCS1"));
  store.update_resource_status("OCS1", ObjectType::Switch, ResourceStatus::UNAVAILABLE);
  CHECK(store.find_switch("OCS1")->status == ResourceStatus::UNAVAILABLE);
  store.update_resource_status("OCS1", ObjectType::Switch, ResourceStatus::AVAILABLE);
  CHECK(store.find_switch("OCS1")->status == ResourceStatus::AVAILABLE);

  CHECK(code_of([&] {
          store.update_resource_status("nope", ObjectType::Switch,
                                       ResourceStatus::UNAVAILABLE);
        }) == ErrorCode::NotFound);

  store.update_resource_status("OCS1/R1", ObjectType::Port, ResourceStatus::UNAVAILABLE);
  CHECK(store.view().unavailable_ports.count({"OCS1", "R1"}) == 1);
  CHECK(code_of([&] {
          store.update_resource_status("OCS1/XX", ObjectType::Port,
                                       ResourceStatus::UNAVAILABLE);
        }) == ErrorCode::NotFound);
  CHECK(code_of([&] {
          store.update_resource_status("no-slash", ObjectType::Port,
                                       ResourceStatus::UNAVAILABLE);
        }) == ErrorCode::InvalidRange);
}

TEST_CASE("path allocation is exclusive and transactional") {
  ResourceStore store;
  store.add_switch(switch_node("OCS1"));

  FiberPath p1;
  p1.svc_id = "S1";
  p1.a = "A";
  p1.z = "Z";
  p1.hops = {"OCS1"};
  p1.per_ocs_configs["OCS1"] = {{"S1-fwd", "R1", "T1"}, {"S1-rev", "R2", "T2"}};

  FiberPath p2 = p1;
  p2.svc_id = "S2";
  p2.per_ocs_configs["OCS1"] = {{"S2-fwd", "R3", "T3"}, {"S2-rev", "R4", "T4"}};

  store.allocate_path_resources(p1);
  store.allocate_path_resources(p2);  // disjoint ports: both fit
  store.put_path(p1);
  store.put_path(p2);
  CHECK(store.audit().empty());

  FiberPath clash = p1;
  clash.svc_id = "S3";
  clash.per_ocs_configs["OCS1"] = {{"S3-fwd", "R1", "T4"}};  // R1 taken by S1
  CHECK(code_of([&] { store.allocate_path_resources(clash); }) ==
        ErrorCode::BlockingOccured);

  store.release_path_resources("S1");
  store.erase_path("S1");
  clash.per_ocs_configs["OCS1"] = {{"S3-fwd", "R1", "T1"}};
  store.allocate_path_resources(clash);  // freed by the release
}

TEST_CASE("update_path_availability cascades to every path resource") {
  ResourceStore store;
  store.add_switch(switch_node("OCS1"));
  store.add_switch(switch_node("OCS2"));
  store.add_terminal(terminal("A"));
  store.add_terminal(terminal("Z"));
  store.add_link(link("L1", "OCS1", "T1", "OCS2", "R1"));
  store.add_link(link("L2", "OCS2", "T1", "OCS1", "R1"));

  FiberPath p;
  p.svc_id = "S1";
  p.a = "A";
  p.z = "Z";
  p.hops = {"OCS1", "OCS2"};
  p.per_ocs_configs["OCS1"] = {{"S1-fwd", "R2", "T1"}, {"S1-rev", "R1", "T2"}};
  p.per_ocs_configs["OCS2"] = {{"S1-fwd", "R1", "T2"}, {"S1-rev", "R2", "T1"}};
  p.links = {"L1", "L2"};
  store.allocate_path_resources(p);
  store.put_path(p);

  store.update_path_availability("S1", ResourceStatus::UNAVAILABLE);
  CHECK(store.find_switch("OCS1")->status == ResourceStatus::UNAVAILABLE);
  CHECK(store.find_switch("OCS2")->status == ResourceStatus::UNAVAILABLE);
  CHECK(store.find_link("L1")->status == ResourceStatus::UNAVAILABLE);
  CHECK(store.find_path("S1")->status == ResourceStatus::UNAVAILABLE);
  CHECK(store.view().unavailable_ports.count({"OCS1", "T1"}) == 1);

  store.update_path_availability("S1", ResourceStatus::AVAILABLE);
  CHECK(store.find_switch("OCS1")->status == ResourceStatus::AVAILABLE);
  CHECK(store.view().unavailable_ports.empty());

  CHECK(code_of([&] {
          store.update_path_availability("nope", ResourceStatus::AVAILABLE);
        }) == ErrorCode::NotFound);
}

TEST_CASE("referential integrity holds after arbitrary operation sequences") {
  ResourceStore store;
  store.add_switch(switch_node("OCS1"));
  store.add_switch(switch_node("OCS2"));
  store.add_terminal(terminal("A"));
  store.add_link(link("L1", "OCS1", "T1", "OCS2", "R1"));
  for (int i = 0; i < 20; ++i) {
    try {
      store.add_link(link("L1", "OCS1", "T2", "OCS2", "R2"));
    } catch (const NbiError&) {
    }
    store.update_resource_status("OCS1", ObjectType::Switch,
                                 i % 2 ? ResourceStatus::AVAILABLE
                                       : ResourceStatus::UNAVAILABLE);
    CHECK(store.audit().empty());
  }
}
