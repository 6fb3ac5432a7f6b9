// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <memory>

#include "ocs/emu/testbeds.hpp"
#include "ocs/fpce/fpce.hpp"
#include "support/route_oracle.hpp"

using namespace ocs;
using namespace ocs::model;
using namespace ocs::fpce;

namespace {

// A --- N1 --- N2 --- Z with a detour N1 --- N3 --- N2
std::unique_ptr<ResourceStore> triangle_store() {
  auto store_ptr = std::make_unique<ResourceStore>();
  ResourceStore& store = *store_ptr;
  for (const std::string id : {"N1", "N2", "N3"}) {
    OcsNode n;
    n.id = id;
    n.conn = {"127.0.0.1", 1};
    for (int p = 1; p <= 6; ++p) {
      n.tx_ports.insert("t" + std::to_string(p));
      n.rx_ports.insert("r" + std::to_string(p));
    }
    store.add_switch(n);
  }
  store.add_terminal({"A", {"127.0.0.1", 1}});
  store.add_terminal({"Z", {"127.0.0.1", 1}});
  auto duplex = [&](const std::string& u, const std::string& su, const std::string& ru,
                    const std::string& v, const std::string& sv, const std::string& rv) {
    store.add_link({u + ">" + v, u, v, su, rv});
    store.add_link({v + ">" + u, v, u, sv, ru});
  };
  duplex("N1", "t1", "r1", "N2", "t1", "r1");
  duplex("N1", "t2", "r2", "N3", "t1", "r1");
  duplex("N3", "t2", "r2", "N2", "t2", "r2");
  store.add_link({"A>N1", "A", "N1", "tx", "r3"});
  store.add_link({"N1>A", "N1", "A", "t3", "rx"});
  store.add_link({"Z>N2", "Z", "N2", "tx", "r3"});
  store.add_link({"N2>Z", "N2", "Z", "t3", "rx"});
  return store_ptr;
}

}  // namespace

TEST_CASE("dijkstra picks the two-hop route over the detour") {
  auto store_ptr = triangle_store();
  ResourceStore& store = *store_ptr;
  Engine engine;
  PathRequest req;
  req.a = "A";
  req.z = "Z";
  auto route = engine.compute_path(req, store.view());
  REQUIRE(route.hops.size() == 2);
  CHECK(route.hops[0].ocs_id == "N1");
  CHECK(route.hops[1].ocs_id == "N2");
  // duplex realization: four strands of fiber plus four attachment strands
  CHECK(route.links.size() == 6);

  // determinism: identical input, identical output
  auto again = engine.compute_path(req, store.view());
  CHECK(again.links == route.links);
  for (size_t i = 0; i < route.hops.size(); ++i) {
    CHECK(again.hops[i].fwd_rx == route.hops[i].fwd_rx);
    CHECK(again.hops[i].fwd_tx == route.hops[i].fwd_tx);
  }
}

TEST_CASE("forced hop list is honored even when longer") {
  auto store_ptr = triangle_store();
  ResourceStore& store = *store_ptr;
  Engine engine;
  PathRequest req;
  req.a = "A";
  req.z = "Z";
  req.forced_hops = std::vector<std::string>{"N1", "N3", "N2"};
  auto route = engine.compute_path(req, store.view());
  REQUIRE(route.hops.size() == 3);
  CHECK(route.hops[1].ocs_id == "N3");

  // a forced route with no usable strand between consecutive hops blocks
  store.update_resource_status("N3>N2", ObjectType::Link, ResourceStatus::UNAVAILABLE);
  CHECK_THROWS_AS(engine.compute_path(req, store.view()), NbiError);
  try {
    engine.compute_path(req, store.view());
  } catch (const NbiError& e) {
    CHECK(e.code() == ErrorCode::BlockingOccured);
  }

  req.forced_hops = std::vector<std::string>{"N1", "NX"};
  try {
    engine.compute_path(req, store.view());
  } catch (const NbiError& e) {
    CHECK(e.code() == ErrorCode::NotFound);
  }
}

TEST_CASE("availability masking diverts or blocks computation") {
  auto store_ptr = triangle_store();
  ResourceStore& store = *store_ptr;
  Engine engine;
  PathRequest req;
  req.a = "A";
  req.z = "Z";

  store.update_resource_status("N1>N2", ObjectType::Link, ResourceStatus::UNAVAILABLE);
  auto route = engine.compute_path(req, store.view());
  REQUIRE(route.hops.size() == 3);  // detour through N3
  CHECK(route.hops[1].ocs_id == "N3");

  // marking then unmarking restores the original choice
  store.update_resource_status("N1>N2", ObjectType::Link, ResourceStatus::AVAILABLE);
  CHECK(engine.compute_path(req, store.view()).hops.size() == 2);

  store.update_resource_status("N3", ObjectType::Switch, ResourceStatus::UNAVAILABLE);
  store.update_resource_status("N1>N2", ObjectType::Link, ResourceStatus::UNAVAILABLE);
  try {
    engine.compute_path(req, store.view());
    FAIL("expected blocking");
  } catch (const NbiError& e) {
    CHECK(e.code() == ErrorCode::BlockingOccured);
  }
}

TEST_CASE("unknown terminals and algorithms are rejected") {
  auto store_ptr = triangle_store();
  ResourceStore& store = *store_ptr;
  Engine engine;
  PathRequest req;
  req.a = "A";
  req.z = "nope";
  try {
    engine.compute_path(req, store.view());
    FAIL("expected NotFound");
  } catch (const NbiError& e) {
    CHECK(e.code() == ErrorCode::NotFound);
  }
  req.z = "Z";
  req.algorithm = "simulated-annealing";
  try {
    engine.compute_path(req, store.view());
    FAIL("expected InvalidRange");
  } catch (const NbiError& e) {
    CHECK(e.code() == ErrorCode::InvalidRange);
  }
}

TEST_CASE("algorithms are pluggable and name collisions rejected") {
  auto store_ptr = triangle_store();
  ResourceStore& store = *store_ptr;
  Engine engine;
  // always routes over the detour, regardless of length
  engine.register_algorithm("detour", [](const DuplexGraph& g, const PathRequest&) {
    (void)g;
    return std::vector<std::string>{"N1", "N3", "N2"};
  });
  PathRequest req;
  req.a = "A";
  req.z = "Z";
  req.algorithm = "detour";
  CHECK(engine.compute_path(req, store.view()).hops.size() == 3);
  CHECK_THROWS_AS(engine.register_algorithm("dijkstra", nullptr), NbiError);
}

TEST_CASE("payload grouping: one payload per hop, two connections each") {
  auto store_ptr = triangle_store();
  ResourceStore& store = *store_ptr;
  Engine engine;
  PathRequest req;
  req.a = "A";
  req.z = "Z";
  auto route = engine.compute_path(req, store.view());
  auto payloads = Engine::generate_create_configs(route, "S1");
  REQUIRE(payloads.size() == route.hops.size());
  for (const auto& p : payloads) {
    CHECK(p.connections_to_create.size() == 2);
    CHECK(p.connections_to_create[0].name == "S1-fwd");
    CHECK(p.connections_to_create[1].name == "S1-rev");
    CHECK(p.connections_to_delete.empty());
  }
  auto path = make_fiber_path("S1", "A", "Z", route);
  auto deletes = Engine::generate_delete_configs(path);
  REQUIRE(deletes.size() == route.hops.size());
  for (const auto& p : deletes) {
    CHECK(p.connections_to_delete ==
          std::vector<std::string>{"S1-fwd", "S1-rev"});
  }
}

TEST_CASE("terminal with multiple attachments uses the best one") {
  auto store_ptr = triangle_store();
  ResourceStore& store = *store_ptr;
  // a second attachment for A, directly on N2: makes a 1-hop route possible
  store.add_link({"A>N2", "A", "N2", "tx2", "r4"});
  store.add_link({"N2>A", "N2", "A", "t4", "rx2"});
  Engine engine;
  PathRequest req;
  req.a = "A";
  req.z = "Z";
  auto route = engine.compute_path(req, store.view());
  REQUIRE(route.hops.size() == 1);
  CHECK(route.hops[0].ocs_id == "N2");
}

TEST_CASE("oracle equivalence on the five-OCS testbed") {
  auto tb = emu::make_fig7_testbed();
  ResourceStore store;
  store.add_network(tb.topo);
  Engine engine;
  PathRequest req;
  req.a = "A";
  req.z = "Z";
  auto route = engine.compute_path(req, store.view());
  auto oracle = ocs::test::oracle_min_hops(store.view(), "A", "Z");
  REQUIRE(oracle.has_value());
  CHECK(route.hops.size() == *oracle);
  CHECK(*oracle == 3);  // R1 through OCS3
}

TEST_CASE("property: dijkstra matches brute force on random topologies") {
  std::mt19937_64 rng(20240811);
  Engine engine;
  int infeasible = 0;
  for (int trial = 0; trial < 80; ++trial) {
    ResourceStore store;
    store.add_network(ocs::test::random_topology(rng, 8, 18));
    ocs::test::random_mask(rng, store);
    auto view = store.view();
    auto oracle = ocs::test::oracle_min_hops(view, "A", "Z");
    PathRequest req;
    req.a = "A";
    req.z = "Z";
    try {
      auto route = engine.compute_path(req, view);
      REQUIRE_MESSAGE(oracle.has_value(), "engine found a route the oracle missed");
      CHECK(route.hops.size() == *oracle);
      // feasibility: every strand usable and in both directions
      for (const auto& lid : route.links) {
        auto l = view.topo.links.at(lid);
        CHECK(view.link_usable(l));
      }
    } catch (const NbiError& e) {
      CHECK(e.code() == ErrorCode::BlockingOccured);
      CHECK_MESSAGE(!oracle.has_value(), "oracle found a route the engine missed");
      infeasible++;
    }
  }
  // the generator should produce a healthy mix of both outcomes
  CHECK(infeasible > 0);
  CHECK(infeasible < 80);
}
