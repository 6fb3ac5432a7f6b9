// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace ocs::net {

/// Thin RAII wrapper over a connected stream socket with newline framing.
/// Reads are buffered; writes are mutex-guarded so concurrent senders emit
/// whole lines. All protocols in this project are newline-delimited.
class LineSocket {
 public:
  explicit LineSocket(int fd);
  ~LineSocket();

  LineSocket(const LineSocket&) = delete;
  LineSocket& operator=(const LineSocket&) = delete;

  /// Connects to host:port. Throws std::runtime_error on failure.
  static std::unique_ptr<LineSocket> connect(const std::string& host, int port,
                                             std::chrono::milliseconds timeout =
                                                 std::chrono::milliseconds(2000));

  /// Next line without its trailing '\n'. nullopt on EOF/closed socket.
  /// With a timeout, returns nullopt and sets timed_out when nothing
  /// arrived in time (connection still usable).
  std::optional<std::string> read_line();
  std::optional<std::string> read_line(std::chrono::milliseconds timeout,
                                       bool* timed_out = nullptr);

  /// True if at least one complete line is already buffered (no I/O).
  bool has_buffered_line() const;

  /// Waits up to `timeout` for readable data without consuming it.
  bool poll_readable(std::chrono::milliseconds timeout);

  /// True while the peer has not closed its end (non-consuming probe).
  bool peer_alive() const;

  /// Appends '\n' and writes atomically w.r.t. other writers.
  /// Returns false if the peer is gone.
  bool write_line(const std::string& line);

  /// Writes several lines in one send() so they arrive back to back.
  bool write_lines(const std::vector<std::string>& lines);

  /// Shuts the socket down, unblocking any reader.
  void shutdown();

  bool closed() const { return fd_ < 0; }
  int fd() const { return fd_; }

 private:
  bool fill_buffer(std::chrono::milliseconds timeout, bool* timed_out);
  std::optional<std::string> pop_line();

  int fd_;
  std::string rbuf_;
  std::mutex wmu_;
};

}  // namespace ocs::net
