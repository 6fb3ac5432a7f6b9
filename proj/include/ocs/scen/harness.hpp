// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <string>

#include "ocs/controller.hpp"
#include "ocs/emu/fleet.hpp"
#include "ocs/emu/testbeds.hpp"
#include "ocs/model/topology_file.hpp"
#include "ocs/nbi/client.hpp"
#include "ocs/nbi/server.hpp"

namespace ocs::scen {

/// Self-deleting scratch directory for WAL/journal files.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  std::string file(const std::string& name) const;
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Wall-clock seconds spent in `fn`.
double timed(const std::function<void()>& fn);

/// A full in-process stack: emulated fleet (with translators), controller,
/// NBI server and a connected client. The topology is registered through the
/// NBI bulk-load service so scenarios exercise the real wire path.
struct Harness {
  Harness(emu::Testbed testbed, emu::LatencyModel latency, uint64_t seed,
          ControllerConfig cfg_overrides = {});
  ~Harness();

  model::json call(const std::string& method, const model::json& params);
  /// CreateFiberPath pinned to a named testbed route.
  model::json create_on_route(const std::string& svc, const std::string& route);
  void delete_path(const std::string& svc);

  /// Blocks until `fn` is true or the timeout elapses; polls every 2 ms.
  static bool wait_until(const std::function<bool()>& fn, std::chrono::milliseconds timeout);

  emu::Testbed testbed;
  TempDir tmp;
  emu::Fleet fleet;
  std::unique_ptr<Controller> ctrl;
  std::unique_ptr<nbi::NbiServer> server;
  std::unique_ptr<nbi::NbiClient> client;
};

}  // namespace ocs::scen
