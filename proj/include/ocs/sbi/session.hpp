// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "ocs/model/types.hpp"
#include "ocs/net/line_socket.hpp"
#include "ocs/sbi/protocol.hpp"

namespace ocs::sbi {

/// Device rejected the operation (the wire "rpc-error").
struct RpcError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// No reply within the deadline.
struct TimeoutError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// Session could not be established or died mid-call.
struct ConnError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One controller-side session to one device's unified-SBI endpoint.
/// RPCs may be issued from any thread; replies are matched by rpc-id on a
/// dedicated reader thread which also dispatches asynchronous notifications.
class SbiSession {
 public:
  using NotificationSink = std::function<void(const Notification&)>;
  using DropHandler = std::function<void(const std::string& device_id)>;

  SbiSession(std::string device_id, model::ConnInfo conn,
             std::chrono::milliseconds rpc_timeout = std::chrono::milliseconds(3000));
  ~SbiSession();

  /// Establishes the connection; throws ConnError if unreachable.
  void open();
  void close();
  bool connected() const;

  const std::string& device_id() const { return device_id_; }

  void set_notification_sink(NotificationSink sink);
  void set_drop_handler(DropHandler h);

  void edit_config(const EditPayload& payload,
                   std::optional<std::chrono::milliseconds> timeout = std::nullopt);
  DeviceState get_state();
  bool hello();
  /// Arms notification delivery on this session (sticky across reconnects).
  void subscribe();

  /// Raw RPC; payload is attached under "payload" when present. A per-call
  /// timeout overrides the session default.
  json rpc(const std::string& method, std::optional<json> payload = std::nullopt,
           std::optional<std::chrono::milliseconds> timeout = std::nullopt);

 private:
  void reader_loop(std::shared_ptr<net::LineSocket> sock);
  void fail_all_pending(const std::string& why);

  struct Pending {
    json reply;
    bool done = false;
    bool is_error = false;
    std::string error;
  };

  std::string device_id_;
  model::ConnInfo conn_;
  std::chrono::milliseconds timeout_;

  mutable std::mutex mu_;
  std::mutex open_mu_;
  std::condition_variable cv_;
  std::shared_ptr<net::LineSocket> sock_;
  std::thread reader_;
  std::map<int64_t, std::shared_ptr<Pending>> pending_;
  int64_t next_id_ = 1;
  bool subscribed_ = false;
  std::atomic<bool> closing_{false};

  NotificationSink sink_;
  DropHandler on_drop_;
};

}  // namespace ocs::sbi
