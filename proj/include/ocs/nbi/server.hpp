// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "ocs/controller.hpp"
#include "ocs/net/server.hpp"

namespace ocs::nbi {

/// The service handler: serves every Table-1 interface as newline-delimited
/// JSON frames over TCP and maps all failures onto the six-code exception
/// vocabulary. Connections are handled concurrently; requests on one
/// connection are answered in order with matching ids.
class NbiServer {
 public:
  explicit NbiServer(Controller& ctrl);

  void start(int port = 0);
  void stop();
  int port() const { return server_.port(); }

  /// The Table-1 service surface (exactly 14 methods).
  static const std::vector<std::string>& table1_methods();

  model::json dispatch(const std::string& method, const model::json& params);

 private:
  void handle(net::LineSocket& s);

  Controller& ctrl_;
  net::Server server_;
};

}  // namespace ocs::nbi
