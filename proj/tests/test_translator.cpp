// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ocs/emu/emulator.hpp"
#include "ocs/sbi/session.hpp"
#include "ocs/xlat/translator.hpp"
#include "ocs/xlat/vendor_client.hpp"

using namespace ocs;
using namespace ocs::emu;
using namespace ocs::xlat;

namespace {

std::set<std::string> ports(const char* prefix, int n) {
  std::set<std::string> out;
  for (int i = 1; i <= n; ++i) out.insert(prefix + std::to_string(i));
  return out;
}

struct Rig {
  Emulator device;
  Translator translator;
  sbi::SbiSession session;

  explicit Rig(Vendor vendor, FaultMode fault = FaultMode::NONE)
      : device("DUT", ports("T", 8), ports("R", 8),
               EmulatorProfile{vendor, LatencyModel::fixed(0.0), fault, 1}),
        translator("DUT", vendor, {"127.0.0.1", (device.start(0), device.port())}),
        session("DUT", {"127.0.0.1", (translator.start(0), translator.north_port())}) {
    session.open();
  }
  ~Rig() {
    session.close();
    translator.stop();
    device.stop();
  }
};

}  // namespace

TEST_CASE("converter line mappings are exactly as specified") {
  auto a = Converter::make(Vendor::A);
  auto lines = a->edit_lines({{"S1-fwd", "R1", "T2"}}, {});
  CHECK(lines == std::vector<std::string>{"XC ADD S1-fwd R1 T2"});
  CHECK(a->edit_lines({}, {"S1-fwd"}) == std::vector<std::string>{"XC DEL S1-fwd"});
  CHECK(a->list_query() == "XC LIST");

  auto b = Converter::make(Vendor::B);
  auto bline = model::json::parse(b->edit_lines({{"S1-fwd", "R1", "T2"}}, {})[0]);
  CHECK(bline == model::json::parse(
                     R"({"op":"connect","label":"S1-fwd","in":"R1","out":"T2"})"));

  auto c = Converter::make(Vendor::C);
  CHECK(c->edit_lines({{"S1-fwd", "R1", "T2"}}, {}) ==
        std::vector<std::string>{"SET /xc/S1-fwd rx=R1 tx=T2"});
  CHECK(c->edit_lines({}, {"S1-fwd"}) == std::vector<std::string>{"DEL /xc/S1-fwd"});
}

TEST_CASE("unified edits reach the vendor device and read back") {
  for (auto vendor : {Vendor::A, Vendor::B, Vendor::C}) {
    CAPTURE(to_string(vendor));
    Rig rig(vendor);
    sbi::EditPayload p;
    p.creates = {{"S1-fwd", "R1", "T2"}, {"S1-rev", "R2", "T1"}};
    rig.session.edit_config(p);

    auto state = rig.session.get_state();
    REQUIRE(state.connections.size() == 2);
    CHECK(state.connections[0].name == "S1-fwd");

    // the vendor port shows the same reality
    auto snap = rig.device.core().snapshot();
    CHECK(snap["connections"].size() == 2);

    sbi::EditPayload del;
    del.deletes = {"S1-fwd", "S1-rev"};
    rig.session.edit_config(del);
    CHECK(rig.session.get_state().connections.empty());
  }
}

TEST_CASE("vendor rejection surfaces as a unified rpc-error") {
  Rig rig(Vendor::A);
  sbi::EditPayload p;
  p.creates = {{"S1", "R1", "T1"}};
  rig.session.edit_config(p);
  sbi::EditPayload clash;
  clash.creates = {{"S2", "R1", "T3"}};  // rx busy
  CHECK_THROWS_AS(rig.session.edit_config(clash), sbi::RpcError);
  sbi::EditPayload bad_del;
  bad_del.deletes = {"nope"};
  CHECK_THROWS_AS(rig.session.edit_config(bad_del), sbi::RpcError);
}

TEST_CASE("partial vendor failure leaves the device payload-atomic") {
  Rig rig(Vendor::B);
  sbi::EditPayload setup;
  setup.creates = {{"S0", "R8", "T8"}};
  rig.session.edit_config(setup);

  // second op collides on T8: the whole payload must be undone
  sbi::EditPayload p;
  p.creates = {{"S1", "R1", "T1"}, {"S2", "R2", "T8"}};
  CHECK_THROWS_AS(rig.session.edit_config(p), sbi::RpcError);
  auto state = rig.session.get_state();
  REQUIRE(state.connections.size() == 1);
  CHECK(state.connections[0].name == "S0");
}

TEST_CASE("monitor and alarm configuration translate per vendor") {
  for (auto vendor : {Vendor::A, Vendor::B, Vendor::C}) {
    CAPTURE(to_string(vendor));
    Rig rig(vendor);
    sbi::EditPayload p;
    p.monitors = {{"R1", true, 1550.0}};
    p.alarms = {{"R1", -1.0, -10.0}};
    rig.session.edit_config(p);
    auto snap = rig.device.core().snapshot();
    CHECK(snap["monitors"].contains("R1"));
    CHECK(snap["alarms"]["R1"]["high"] == -1.0);
    CHECK(snap["alarms"]["R1"]["low"] == -10.0);

    // power readings appear for monitored ports only
    auto state = rig.session.get_state();
    REQUIRE(state.power.size() == 1);
    CHECK(state.power[0].port == "R1");
    CHECK(state.power[0].dbm == -99.0);
  }
}

TEST_CASE("vendor events map to unified notifications in order") {
  for (auto vendor : {Vendor::A, Vendor::B, Vendor::C}) {
    CAPTURE(to_string(vendor));
    Rig rig(vendor);
    sbi::EditPayload p;
    p.monitors = {{"R1", true, std::nullopt}};
    p.alarms = {{"R1", -1.0, -10.0}};
    rig.session.edit_config(p);

    std::mutex mu;
    std::vector<sbi::Notification> seen;
    rig.session.set_notification_sink([&](const sbi::Notification& n) {
      std::lock_guard lk(mu);
      seen.push_back(n);
    });
    rig.session.subscribe();

    rig.device.core().set_port_power("R1", 5.9);
    rig.device.core().set_port_power("R1", -40.0);
    rig.device.core().set_port_power("R1", 5.9);

    auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(2);
    while (std::chrono::steady_clock::now() < deadline) {
      std::lock_guard lk(mu);
      if (seen.size() >= 3) break;
      std::this_thread::yield();
    }
    std::lock_guard lk(mu);
    REQUIRE(seen.size() == 3);
    CHECK(seen[0].kind == sbi::NotifKind::SIGNAL_DETECTED);
    CHECK(seen[0].device_id == "DUT");
    CHECK(seen[0].measured_dbm == 5.9);
    CHECK(seen[1].kind == sbi::NotifKind::SIGNAL_DEGRADED);
    CHECK(seen[2].kind == sbi::NotifKind::SIGNAL_DETECTED);
  }
}

TEST_CASE("property: random unified edit sequences round-trip on all vendors") {
  std::mt19937_64 rng(99);
  for (auto vendor : {Vendor::A, Vendor::B, Vendor::C}) {
    CAPTURE(to_string(vendor));
    Rig rig(vendor);
    std::map<std::string, model::InternalConnection> expect;
    std::set<std::string> rx_used, tx_used;
    int name_no = 0;
    for (int step = 0; step < 40; ++step) {
      std::uniform_int_distribution<int> coin(0, 1);
      if (coin(rng) == 0 || expect.empty()) {
        std::uniform_int_distribution<int> pick(1, 8);
        std::string rx = "R" + std::to_string(pick(rng));
        std::string tx = "T" + std::to_string(pick(rng));
        std::string name = "c" + std::to_string(name_no++);
        sbi::EditPayload p;
        p.creates = {{name, rx, tx}};
        if (rx_used.count(rx) || tx_used.count(tx)) {
          CHECK_THROWS_AS(rig.session.edit_config(p), sbi::RpcError);
        } else {
          rig.session.edit_config(p);
          expect[name] = p.creates[0];
          rx_used.insert(rx);
          tx_used.insert(tx);
        }
      } else {
        auto it = expect.begin();
        std::advance(it, std::uniform_int_distribution<size_t>(0, expect.size() - 1)(rng));
        sbi::EditPayload p;
        p.deletes = {it->first};
        rig.session.edit_config(p);
        rx_used.erase(it->second.rx_port);
        tx_used.erase(it->second.tx_port);
        expect.erase(it);
      }
      auto state = rig.session.get_state();
      REQUIRE(state.connections.size() == expect.size());
      for (const auto& c : state.connections) {
        REQUIRE(expect.count(c.name) == 1);
        CHECK(expect.at(c.name) == c);
      }
    }
  }
}

TEST_CASE("translator hello tracks vendor liveness") {
  Rig rig(Vendor::A);
  CHECK(rig.session.hello());
  rig.device.set_fault(FaultMode::SERVER_DOWN);
  CHECK_FALSE(rig.session.hello());
  rig.device.set_fault(FaultMode::NONE);
  CHECK(rig.session.hello());
}

TEST_CASE("lying device: config accepted, state stays honest") {
  Rig rig(Vendor::A, FaultMode::LIE_ON_APPLY);
  sbi::EditPayload p;
  p.creates = {{"S1", "R1", "T1"}};
  rig.session.edit_config(p);  // the device acks the lie
  CHECK(rig.session.get_state().connections.empty());
}
