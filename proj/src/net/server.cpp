// SPDX-License-Identifier: Apache-2.0
#include "ocs/net/server.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <cstring>
#include <stdexcept>
#include <thread>

namespace ocs::net {

namespace {

int bind_and_listen(int port) {
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw std::runtime_error("socket() failed");
  int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(static_cast<uint16_t>(port));
  if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    ::close(fd);
    throw std::runtime_error("bind failed on port " + std::to_string(port));
  }
  if (::listen(fd, 128) != 0) {
    ::close(fd);
    throw std::runtime_error("listen failed");
  }
  return fd;
}

}  // namespace

Server::~Server() { stop(); }

void Server::start(int port, Handler handler) {
  handler_ = std::move(handler);
  listen_fd_ = bind_and_listen(port);
  sockaddr_in addr{};
  socklen_t len = sizeof(addr);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
  stopping_ = false;
  paused_ = false;
  listening_ = true;
  accept_thread_ = std::thread([this] { accept_loop(); });
}

void Server::accept_loop() {
  while (!stopping_.load()) {
    int fd;
    {
      std::lock_guard<std::mutex> lk(mu_);
      fd = listen_fd_;
    }
    if (fd < 0) {  // paused: the port is closed, connections are refused
      std::this_thread::sleep_for(std::chrono::milliseconds(20));
      continue;
    }
    pollfd pfd{fd, POLLIN, 0};
    int pr = ::poll(&pfd, 1, 100);
    if (stopping_.load()) break;
    if (pr <= 0) continue;
    int cfd = ::accept(fd, nullptr, nullptr);
    if (cfd < 0) continue;
    auto conn = std::make_shared<Conn>();
    conn->sock = std::make_unique<LineSocket>(cfd);
    {
      std::lock_guard<std::mutex> lk(mu_);
      if (paused_.load() || stopping_.load()) {
        conn->sock->shutdown();
        continue;
      }
      reap_finished();
      conns_.push_back(conn);
    }
    conn->thread = std::thread([this, conn] {
      try {
        handler_(*conn->sock);
      } catch (...) {
        // connection handlers must not take the server down
      }
      conn->sock->shutdown();
      conn->done = true;
    });
  }
}

void Server::reap_finished() {
  // joins threads for connections whose handlers returned; called under mu_
  for (auto it = conns_.begin(); it != conns_.end();) {
    if ((*it)->done.load()) {
      if ((*it)->thread.joinable()) (*it)->thread.join();
      it = conns_.erase(it);
    } else {
      ++it;
    }
  }
}

void Server::pause() {
  std::lock_guard<std::mutex> lk(mu_);
  paused_ = true;
  if (listen_fd_ >= 0) {
    ::close(listen_fd_);
    listen_fd_ = -1;
  }
  for (auto& c : conns_) c->sock->shutdown();
}

void Server::resume() {
  std::lock_guard<std::mutex> lk(mu_);
  if (!paused_.load()) return;
  listen_fd_ = bind_and_listen(port_);
  paused_ = false;
}

void Server::stop() {
  if (!accept_thread_.joinable() && listen_fd_ < 0) return;
  stopping_ = true;
  listening_ = false;
  if (accept_thread_.joinable()) accept_thread_.join();
  {
    std::lock_guard<std::mutex> lk(mu_);
    if (listen_fd_ >= 0) {
      ::close(listen_fd_);
      listen_fd_ = -1;
    }
  }
  std::vector<std::shared_ptr<Conn>> conns;
  {
    std::lock_guard<std::mutex> lk(mu_);
    conns.swap(conns_);
  }
  for (auto& c : conns) c->sock->shutdown();
  for (auto& c : conns) {
    if (c->thread.joinable()) c->thread.join();
  }
}

}  // namespace ocs::net
