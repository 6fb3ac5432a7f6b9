// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "ocs/emu/emulator.hpp"
#include "ocs/emu/fleet.hpp"
#include "ocs/emu/testbeds.hpp"
#include "ocs/net/line_socket.hpp"

using namespace ocs;
using namespace ocs::emu;

namespace {

std::set<std::string> ports(const char* prefix, int n) {
  std::set<std::string> out;
  for (int i = 1; i <= n; ++i) out.insert(prefix + std::to_string(i));
  return out;
}

struct RawClient {
  std::unique_ptr<net::LineSocket> sock;
  explicit RawClient(int port) : sock(net::LineSocket::connect("127.0.0.1", port)) {}
  std::string ask(const std::string& line) {
    REQUIRE(sock->write_line(line));
    auto reply = sock->read_line(std::chrono::milliseconds(2000));
    REQUIRE(reply.has_value());
    return *reply;
  }
};

}  // namespace

TEST_CASE("vendor A grammar: cross-connects, exclusivity, list") {
  Emulator emu("X", ports("T", 4), ports("R", 4), {});
  emu.start(0);
  RawClient c(emu.port());

  CHECK(c.ask("XC ADD s1 R1 T1") == "OK");
  CHECK(c.ask("XC ADD s1 R2 T2").rfind("ERR", 0) == 0);  // duplicate name
  CHECK(c.ask("XC ADD s2 R1 T2").rfind("ERR", 0) == 0);  // rx busy
  CHECK(c.ask("XC ADD s2 R2 T1").rfind("ERR", 0) == 0);  // tx busy
  CHECK(c.ask("XC ADD s3 R9 T2").rfind("ERR", 0) == 0);  // unknown port
  CHECK(c.ask("XC ADD s3 R2 T2") == "OK");

  CHECK(c.ask("XC LIST") == "s1 R1 T1");
  CHECK(c.sock->read_line(std::chrono::milliseconds(500)) == "s3 R2 T2");
  CHECK(c.sock->read_line(std::chrono::milliseconds(500)) == "OK");

  CHECK(c.ask("XC DEL s1") == "OK");
  CHECK(c.ask("XC DEL s1").rfind("ERR", 0) == 0);  // unknown name
  CHECK(c.ask("BOGUS").rfind("ERR", 0) == 0);
  emu.stop();
}

TEST_CASE("vendor A monitor, power and threshold alarms") {
  Emulator emu("X", ports("T", 4), ports("R", 4), {});
  emu.start(0);
  RawClient c(emu.port());

  CHECK(c.ask("PWR R1").rfind("ERR", 0) == 0);  // monitor disabled
  CHECK(c.ask("ALARM R1 HI -1").rfind("ERR", 0) == 0);
  CHECK(c.ask("MON R1 ON") == "OK");
  CHECK(c.ask("PWR R1") == "OK -99");
  CHECK(c.ask("ALARM R1 HI -1") == "OK");
  CHECK(c.ask("ALARM R1 LO -10") == "OK");
  CHECK(c.ask("ALARM R1 HI 99").rfind("ERR", 0) == 0);  // out of range

  // rising edge fires once, not a stream
  emu.core().set_port_power("R1", 5.9);
  auto evt = c.sock->read_line(std::chrono::milliseconds(1000));
  REQUIRE(evt.has_value());
  CHECK(*evt == "EVT R1 HI 5.9");
  emu.core().set_port_power("R1", 6.0);  // still above: no new edge
  emu.core().set_port_power("R1", 5.8);
  bool timed_out = false;
  auto none = c.sock->read_line(std::chrono::milliseconds(120), &timed_out);
  CHECK(!none.has_value());
  CHECK(timed_out);

  // falling through the low threshold
  emu.core().set_port_power("R1", -40.0);
  evt = c.sock->read_line(std::chrono::milliseconds(1000));
  REQUIRE(evt.has_value());
  CHECK(*evt == "EVT R1 LO -40");

  // re-armed after crossing back
  emu.core().set_port_power("R1", 5.9);
  evt = c.sock->read_line(std::chrono::milliseconds(1000));
  REQUIRE(evt.has_value());
  CHECK(*evt == "EVT R1 HI 5.9");
  emu.stop();
}

TEST_CASE("vendor B JSON grammar") {
  EmulatorProfile profile;
  profile.vendor = Vendor::B;
  Emulator emu("X", ports("T", 4), ports("R", 4), profile);
  emu.start(0);
  RawClient c(emu.port());

  auto r = model::json::parse(c.ask(R"({"op":"connect","label":"s1","in":"R1","out":"T1"})"));
  CHECK(r["ok"] == true);
  r = model::json::parse(c.ask(R"({"op":"connect","label":"s2","in":"R1","out":"T2"})"));
  CHECK(r["ok"] == false);
  r = model::json::parse(c.ask(R"({"op":"list"})"));
  CHECK(r["connections"] == model::json::parse(R"([{"label":"s1","in":"R1","out":"T1"}])"));
  r = model::json::parse(c.ask(R"({"op":"monitor","port":"R1","enabled":true})"));
  CHECK(r["ok"] == true);
  r = model::json::parse(c.ask(R"({"op":"alarm","port":"R1","hi":-1.0})"));
  CHECK(r["ok"] == true);
  r = model::json::parse(c.ask(R"({"op":"power","port":"R1"})"));
  CHECK(r["dbm"] == -99.0);
  emu.core().set_port_power("R1", 3.0);
  auto evt = c.sock->read_line(std::chrono::milliseconds(1000));
  REQUIRE(evt.has_value());
  auto e = model::json::parse(*evt);
  CHECK(e["event"]["port"] == "R1");
  CHECK(e["event"]["edge"] == "hi");
  r = model::json::parse(c.ask(R"({"op":"disconnect","label":"s1"})"));
  CHECK(r["ok"] == true);
  emu.stop();
}

TEST_CASE("vendor C path-string grammar") {
  EmulatorProfile profile;
  profile.vendor = Vendor::C;
  Emulator emu("X", ports("T", 4), ports("R", 4), profile);
  emu.start(0);
  RawClient c(emu.port());

  CHECK(c.ask("SET /xc/s1 rx=R1 tx=T1") == "OK");
  CHECK(c.ask("SET /xc/s2 rx=R1 tx=T2").rfind("ERR", 0) == 0);
  CHECK(c.ask("GET /xc") == "/xc/s1 rx=R1 tx=T1");
  CHECK(c.sock->read_line(std::chrono::milliseconds(500)) == "OK");
  CHECK(c.ask("SET /mon/R1 on") == "OK");
  CHECK(c.ask("GET /pwr/R1") == "OK -99");
  CHECK(c.ask("SET /alarm/R1 hi=-1 lo=-10") == "OK");
  emu.core().set_port_power("R1", 2.5);
  auto evt = c.sock->read_line(std::chrono::milliseconds(1000));
  REQUIRE(evt.has_value());
  CHECK(*evt == "EVT /alarm/R1 hi 2.5");
  CHECK(c.ask("DEL /xc/s1") == "OK");
  CHECK(c.ask("DEL /xc/s1").rfind("ERR", 0) == 0);
  emu.stop();
}

TEST_CASE("pipelined edit burst is charged one configuration latency") {
  EmulatorProfile profile;
  profile.latency = LatencyModel::fixed(0.3);
  Emulator emu("X", ports("T", 4), ports("R", 4), profile);
  emu.start(0);
  RawClient c(emu.port());

  auto t0 = std::chrono::steady_clock::now();
  REQUIRE(c.sock->write_lines({"XC ADD s1 R1 T1", "XC ADD s2 R2 T2"}));
  CHECK(c.sock->read_line(std::chrono::milliseconds(2000)) == "OK");
  CHECK(c.sock->read_line(std::chrono::milliseconds(2000)) == "OK");
  double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(elapsed >= 0.3);
  CHECK(elapsed < 0.55);  // one latency, not two
  emu.stop();
}

TEST_CASE("latency sampler matches the configured distribution") {
  DeviceCore core("X", {"T1"}, {"R1"}, LatencyModel::normal(0.7, 0.07), 42);
  std::vector<double> samples;
  for (int i = 0; i < 1000; ++i) samples.push_back(core.sample_latency());
  double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / samples.size();
  double var = 0;
  for (double s : samples) var += (s - mean) * (s - mean);
  double std = std::sqrt(var / samples.size());
  CHECK(std::abs(mean - 0.7) < 0.02);
  CHECK(std::abs(std - 0.07) < 0.02);
  for (double s : samples) CHECK(s >= 0.0);

  // reseeding restarts the stream deterministically
  core.reseed(42);
  for (int i = 0; i < 10; ++i) CHECK(core.sample_latency() == samples[i]);
}

TEST_CASE("fault modes have three distinct observable signatures") {
  EmulatorProfile profile;
  Emulator emu("X", ports("T", 4), ports("R", 4), profile);
  emu.start(0);
  const int port = emu.port();

  SUBCASE("SERVER_DOWN refuses TCP") {
    emu.set_fault(FaultMode::SERVER_DOWN);
    CHECK_THROWS(net::LineSocket::connect("127.0.0.1", port,
                                          std::chrono::milliseconds(300)));
    emu.set_fault(FaultMode::NONE);
    RawClient c(port);  // back up on the same port
    CHECK(c.ask("XC LIST") == "OK");
  }

  SUBCASE("TIMEOUT_ALL accepts but never replies") {
    emu.set_fault(FaultMode::TIMEOUT_ALL);
    RawClient c(port);
    REQUIRE(c.sock->write_line("XC ADD s1 R1 T1"));
    bool timed_out = false;
    auto reply = c.sock->read_line(std::chrono::milliseconds(300), &timed_out);
    CHECK(!reply.has_value());
    CHECK(timed_out);
    CHECK(emu.core().snapshot()["connections"].empty());
  }

  SUBCASE("LIE_ON_APPLY acks without changing state") {
    emu.set_fault(FaultMode::LIE_ON_APPLY);
    RawClient c(port);
    CHECK(c.ask("XC ADD s1 R1 T1") == "OK");
    CHECK(c.ask("XC LIST") == "OK");  // empty list: nothing applied
    CHECK(emu.core().snapshot()["connections"].empty());
  }
  emu.stop();
}

TEST_CASE("fleet propagates light along established paths") {
  auto tb = make_fig7_testbed();
  Fleet fleet(FleetConfig{tb.topo, LatencyModel::fixed(0.0), 7, {}, {}});
  fleet.start();

  // nothing established: every mid-network port is dark
  CHECK(fleet.port_power("OCS3", tb.upstream_rx_port("R1", "OCS3")) == -99.0);

  fleet.set_laser("A", 5.9);
  // the attachment strand lights OCS1's input even with no path
  CHECK(fleet.port_power("OCS1", "R-A") == 5.9);
  CHECK(fleet.port_power("Z", "rx") == -99.0);

  // hand-build route R1 on the devices through the vendor ports
  for (const auto& hop : tb.routes.at("R1")) {
    auto next = [&](const std::string& ocs) {
      const auto& hops = tb.routes.at("R1");
      for (size_t i = 0; i + 1 < hops.size(); ++i)
        if (hops[i] == ocs) return hops[i + 1];
      return std::string();
    };
    std::string rx = tb.upstream_rx_port("R1", hop);
    std::string tx = next(hop).empty() ? "T-Z" : "T-R1-" + next(hop);
    auto ep = fleet.unified_endpoint(hop);
    auto sock = net::LineSocket::connect(ep.host, ep.port);
    model::json frame{{"rpc-id", 1},
                      {"rpc", "edit-config"},
                      {"payload", {{"create", {{{"name", "m"}, {"rx", rx}, {"tx", tx}}}}}}};
    sock->write_line(frame.dump());
    auto reply = sock->read_line(std::chrono::milliseconds(2000));
    REQUIRE(reply.has_value());
    REQUIRE(model::json::parse(*reply).contains("reply"));
  }
  CHECK(fleet.port_power("Z", "rx") == 5.9);

  // pulling a strand darkens everything downstream
  fleet.pull_link(tb.upstream_link("R1", "OCS3"));
  CHECK(fleet.port_power("OCS3", tb.upstream_rx_port("R1", "OCS3")) == -99.0);
  CHECK(fleet.port_power("Z", "rx") == -99.0);
  fleet.restore_link(tb.upstream_link("R1", "OCS3"));
  CHECK(fleet.port_power("Z", "rx") == 5.9);

  fleet.set_laser("A", std::nullopt);
  CHECK(fleet.port_power("OCS1", "R-A") == -99.0);
  fleet.stop();
}

TEST_CASE("terminal emulator speaks the unified SBI directly") {
  TerminalEmulator term("A", {});
  term.start(0);
  auto sock = net::LineSocket::connect("127.0.0.1", term.port());
  auto ask = [&](const model::json& frame) {
    REQUIRE(sock->write_line(frame.dump()));
    auto reply = sock->read_line(std::chrono::milliseconds(2000));
    REQUIRE(reply.has_value());
    return model::json::parse(*reply);
  };
  CHECK(ask({{"rpc-id", 1}, {"rpc", "hello"}})["reply"] == "ok");
  CHECK(ask({{"rpc-id", 2}, {"rpc", "subscribe"}})["reply"] == "ok");
  // terminals reject cross-connects
  auto err = ask({{"rpc-id", 3},
                  {"rpc", "edit-config"},
                  {"payload", {{"create", {{{"name", "x"}, {"rx", "rx"}, {"tx", "tx"}}}}}}});
  CHECK(err.contains("error"));
  // monitor + low alarm, then a degradation event
  auto ok = ask({{"rpc-id", 4},
                 {"rpc", "edit-config"},
                 {"payload",
                  {{"monitor", {{{"port", "rx"}, {"enabled", true}}}},
                   {"alarm", {{{"port", "rx"}, {"low", -10.0}}}}}}});
  CHECK(ok.contains("reply"));
  term.core().set_port_power("rx", 5.9);
  term.core().set_port_power("rx", -99.0);
  auto note = sock->read_line(std::chrono::milliseconds(1000));
  REQUIRE(note.has_value());
  auto n = model::json::parse(*note);
  CHECK(n["notification"]["kind"] == "signal-degraded");
  term.stop();
}
