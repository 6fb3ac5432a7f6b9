// SPDX-License-Identifier: Apache-2.0
#include "ocs/scen/harness.hpp"

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <thread>

namespace ocs::scen {

TempDir::TempDir() {
  char tmpl[] = "/tmp/ocsnet-XXXXXX";
  const char* dir = ::mkdtemp(tmpl);
  if (!dir) throw std::runtime_error("mkdtemp failed");
  path_ = dir;
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string TempDir::file(const std::string& name) const { return path_ + "/" + name; }

double timed(const std::function<void()>& fn) {
  auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Harness::Harness(emu::Testbed tb, emu::LatencyModel latency, uint64_t seed,
                 ControllerConfig cfg)
    : testbed(std::move(tb)),
      fleet(emu::FleetConfig{testbed.topo, latency, seed, {}, {}}) {
  fleet.start();
  if (cfg.wal_path == ControllerConfig{}.wal_path) cfg.wal_path = tmp.file("wal.jsonl");
  if (cfg.journal_path == ControllerConfig{}.journal_path)
    cfg.journal_path = tmp.file("actions.jsonl");
  ctrl = std::make_unique<Controller>(cfg);
  ctrl->recover();
  server = std::make_unique<nbi::NbiServer>(*ctrl);
  server->start(0);
  client = std::make_unique<nbi::NbiClient>("127.0.0.1", server->port());
  auto doc = model::topology_to_doc(fleet.registration_topology());
  client->call("CreateNetwork", {{"topology_file", doc.dump()}});
}

Harness::~Harness() {
  client.reset();
  if (server) server->stop();
  if (ctrl) ctrl->shutdown();
  fleet.stop();
}

model::json Harness::call(const std::string& method, const model::json& params) {
  return client->call(method, params);
}

model::json Harness::create_on_route(const std::string& svc, const std::string& route) {
  return call("CreateFiberPath", {{"svc_id", svc},
                                  {"a", testbed.a},
                                  {"z", testbed.z},
                                  {"ocs_list", testbed.routes.at(route)}});
}

void Harness::delete_path(const std::string& svc) {
  call("DeleteFiberPath", {{"svc_id", svc}});
}

bool Harness::wait_until(const std::function<bool()>& fn, std::chrono::milliseconds timeout) {
  auto deadline = std::chrono::steady_clock::now() + timeout;
  while (std::chrono::steady_clock::now() < deadline) {
    if (fn()) return true;
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }
  return fn();
}

}  // namespace ocs::scen
