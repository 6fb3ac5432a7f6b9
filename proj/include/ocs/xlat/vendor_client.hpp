// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <condition_variable>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <thread>

#include "ocs/model/types.hpp"
#include "ocs/net/line_socket.hpp"
#include "ocs/xlat/converter.hpp"

namespace ocs::xlat {

/// Controller-of-one-vendor-device client: pipelines edit bursts in a single
/// send, demultiplexes asynchronous event lines away from replies, and
/// reconnects on demand. One request/response cycle at a time.
class VendorClient {
 public:
  using EventCb = std::function<void(const sbi::Notification&)>;

  VendorClient(std::unique_ptr<Converter> conv, model::ConnInfo target,
               std::chrono::milliseconds timeout = std::chrono::milliseconds(3000));
  ~VendorClient();

  const Converter& converter() const { return *conv_; }

  /// Connects (or reconnects) to the device; false if unreachable.
  bool ensure_open();
  /// Liveness verdict: probes the current connection without generating
  /// vendor traffic, reconnecting once if the peer is gone.
  bool alive();
  void close();

  void set_event_callback(EventCb cb);

  /// Pipelined cross-connect batch; per-op (ok, err) results in op order.
  /// Throws VendorError on transport failure or truncated replies.
  std::vector<std::pair<bool, std::string>> apply_edits(
      const std::vector<InternalConnection>& creates,
      const std::vector<std::string>& deletes);

  std::vector<InternalConnection> list();
  double power(const std::string& port);
  void set_monitor(const sbi::MonitorConfig& m);
  void set_alarm(const sbi::AlarmConfig& a);

 private:
  void reader_loop(std::shared_ptr<net::LineSocket> sock);
  std::optional<std::string> next_reply();
  void send_or_throw(const std::vector<std::string>& lines);
  void expect_ok(const std::string& line_sent);

  std::unique_ptr<Converter> conv_;
  model::ConnInfo target_;
  std::chrono::milliseconds timeout_;

  std::mutex mu_;  // serializes request/response cycles and socket swaps
  std::shared_ptr<net::LineSocket> sock_;
  std::thread reader_;

  std::mutex q_mu_;
  std::condition_variable q_cv_;
  std::deque<std::string> replies_;
  bool reader_dead_ = true;

  std::mutex cb_mu_;
  EventCb on_event_;
};

}  // namespace ocs::xlat
