// SPDX-License-Identifier: Apache-2.0
#include "ocs/net/line_socket.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <stdexcept>
#include <vector>

namespace ocs::net {

namespace {

void set_nodelay(int fd) {
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

}  // namespace

LineSocket::LineSocket(int fd) : fd_(fd) { set_nodelay(fd_); }

LineSocket::~LineSocket() {
  if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<LineSocket> LineSocket::connect(const std::string& host, int port,
                                                std::chrono::milliseconds timeout) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const std::string service = std::to_string(port);
  if (::getaddrinfo(host.c_str(), service.c_str(), &hints, &res) != 0 || !res) {
    throw std::runtime_error("resolve failed: " + host);
  }
  int fd = ::socket(res->ai_family, SOCK_STREAM | SOCK_NONBLOCK, 0);
  if (fd < 0) {
    ::freeaddrinfo(res);
    throw std::runtime_error("socket() failed");
  }
  int rc = ::connect(fd, res->ai_addr, res->ai_addrlen);
  ::freeaddrinfo(res);
  if (rc != 0 && errno != EINPROGRESS) {
    ::close(fd);
    throw std::runtime_error("connect refused: " + host + ":" + service);
  }
  if (rc != 0) {
    pollfd pfd{fd, POLLOUT, 0};
    int pr = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
    int err = 0;
    socklen_t len = sizeof(err);
    if (pr <= 0 || ::getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len) != 0 || err != 0) {
      ::close(fd);
      throw std::runtime_error("connect failed: " + host + ":" + service);
    }
  }
  int flags = ::fcntl(fd, F_GETFL, 0);
  ::fcntl(fd, F_SETFL, flags & ~O_NONBLOCK);
  return std::make_unique<LineSocket>(fd);
}

std::optional<std::string> LineSocket::pop_line() {
  auto pos = rbuf_.find('\n');
  if (pos == std::string::npos) return std::nullopt;
  std::string line = rbuf_.substr(0, pos);
  rbuf_.erase(0, pos + 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

bool LineSocket::has_buffered_line() const { return rbuf_.find('\n') != std::string::npos; }

bool LineSocket::peer_alive() const {
  if (fd_ < 0) return false;
  char b;
  ssize_t n = ::recv(fd_, &b, 1, MSG_PEEK | MSG_DONTWAIT);
  if (n > 0) return true;
  if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK)) return true;
  return false;
}

bool LineSocket::poll_readable(std::chrono::milliseconds timeout) {
  if (fd_ < 0) return false;
  pollfd pfd{fd_, POLLIN, 0};
  return ::poll(&pfd, 1, static_cast<int>(timeout.count())) > 0;
}

bool LineSocket::fill_buffer(std::chrono::milliseconds timeout, bool* timed_out) {
  if (fd_ < 0) return false;
  if (timeout.count() >= 0) {
    pollfd pfd{fd_, POLLIN, 0};
    int pr = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
    if (pr == 0) {
      if (timed_out) *timed_out = true;
      return false;
    }
    if (pr < 0) return false;
  }
  char buf[8192];
  ssize_t n = ::recv(fd_, buf, sizeof(buf), 0);
  if (n <= 0) return false;
  rbuf_.append(buf, static_cast<size_t>(n));
  return true;
}

std::optional<std::string> LineSocket::read_line() {
  return read_line(std::chrono::milliseconds(-1), nullptr);
}

std::optional<std::string> LineSocket::read_line(std::chrono::milliseconds timeout,
                                                 bool* timed_out) {
  if (timed_out) *timed_out = false;
  auto deadline = std::chrono::steady_clock::now() + timeout;
  for (;;) {
    if (auto line = pop_line()) return line;
    std::chrono::milliseconds wait(-1);
    if (timeout.count() >= 0) {
      auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
          deadline - std::chrono::steady_clock::now());
      if (left.count() <= 0) {
        if (timed_out) *timed_out = true;
        return std::nullopt;
      }
      wait = left;
    }
    if (!fill_buffer(wait, timed_out)) return std::nullopt;
  }
}

bool LineSocket::write_line(const std::string& line) {
  return write_lines({line});
}

bool LineSocket::write_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) {
    out += l;
    out += '\n';
  }
  std::lock_guard<std::mutex> lk(wmu_);
  if (fd_ < 0) return false;
  size_t off = 0;
  while (off < out.size()) {
    ssize_t n = ::send(fd_, out.data() + off, out.size() - off, MSG_NOSIGNAL);
    if (n <= 0) return false;
    off += static_cast<size_t>(n);
  }
  return true;
}

void LineSocket::shutdown() {
  if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

}  // namespace ocs::net
