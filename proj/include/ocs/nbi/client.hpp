// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <memory>
#include <string>

#include "ocs/errors.hpp"
#include "ocs/model/types.hpp"
#include "ocs/net/line_socket.hpp"

namespace ocs::nbi {

/// Client side of the NBI wire protocol. One connection, serial calls.
/// NBI error frames surface as NbiError; transport problems as
/// std::runtime_error.
class NbiClient {
 public:
  NbiClient(const std::string& host, int port,
            std::chrono::milliseconds timeout = std::chrono::milliseconds(30000));

  model::json call(const std::string& method, const model::json& params = {});

 private:
  std::unique_ptr<net::LineSocket> sock_;
  std::chrono::milliseconds timeout_;
  int64_t next_id_ = 1;
};

}  // namespace ocs::nbi
