// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "ocs/net/line_socket.hpp"

namespace ocs::net {

/// TCP acceptor that runs one handler thread per connection. stop() closes
/// the listener and every live connection, then joins all threads, so a
/// fleet of servers can be torn down cleanly inside one test process.
class Server {
 public:
  using Handler = std::function<void(LineSocket&)>;

  Server() = default;
  ~Server();

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds 127.0.0.1:port (port 0 picks a free one) and starts accepting.
  /// Throws std::runtime_error if the address is in use.
  void start(int port, Handler handler);

  void stop();

  /// Stops accepting new connections and drops current ones; start() state
  /// is kept so the port stays reserved. Used for SERVER_DOWN injection.
  void pause();
  void resume();

  int port() const { return port_; }
  bool running() const { return listening_.load(); }

 private:
  struct Conn {
    std::unique_ptr<LineSocket> sock;
    std::thread thread;
    std::atomic<bool> done{false};
  };

  void accept_loop();
  void reap_finished();  // requires mu_

  int listen_fd_ = -1;
  int port_ = 0;
  Handler handler_;
  std::thread accept_thread_;
  std::atomic<bool> listening_{false};
  std::atomic<bool> paused_{false};
  std::atomic<bool> stopping_{false};

  std::mutex mu_;
  std::vector<std::shared_ptr<Conn>> conns_;
};

}  // namespace ocs::net
