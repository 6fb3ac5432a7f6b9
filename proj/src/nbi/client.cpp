// SPDX-License-Identifier: Apache-2.0
#include "ocs/nbi/client.hpp"

#include <stdexcept>

namespace ocs::nbi {

using model::json;

NbiClient::NbiClient(const std::string& host, int port, std::chrono::milliseconds timeout)
    : sock_(net::LineSocket::connect(host, port)), timeout_(timeout) {}

json NbiClient::call(const std::string& method, const json& params) {
  const int64_t id = next_id_++;
  json frame{{"id", id}, {"method", method}, {"params", params.is_null() ? json::object() : params}};
  if (!sock_->write_line(frame.dump()))
    throw std::runtime_error("controller connection lost");
  for (;;) {
    auto line = sock_->read_line(timeout_);
    if (!line) throw std::runtime_error("controller reply timeout");
    json resp = json::parse(*line, nullptr, false);
    if (resp.is_discarded()) continue;
    if (resp.value("id", int64_t{-1}) != id) continue;
    if (resp.contains("error")) {
      const auto& e = resp.at("error");
      throw NbiError(error_code_from_string(e.value("code", "PathOperFailed")),
                     e.value("message", "unknown error"));
    }
    return resp.value("result", json::object());
  }
}

}  // namespace ocs::nbi
