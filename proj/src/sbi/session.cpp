// SPDX-License-Identifier: Apache-2.0
#include "ocs/sbi/session.hpp"

namespace ocs::sbi {

SbiSession::SbiSession(std::string device_id, model::ConnInfo conn,
                       std::chrono::milliseconds rpc_timeout)
    : device_id_(std::move(device_id)), conn_(std::move(conn)), timeout_(rpc_timeout) {}

SbiSession::~SbiSession() { close(); }

void SbiSession::set_notification_sink(NotificationSink sink) {
  std::lock_guard lk(mu_);
  sink_ = std::move(sink);
}

void SbiSession::set_drop_handler(DropHandler h) {
  std::lock_guard lk(mu_);
  on_drop_ = std::move(h);
}

bool SbiSession::connected() const {
  std::lock_guard lk(mu_);
  return sock_ != nullptr;
}

void SbiSession::open() {
  std::lock_guard open_lk(open_mu_);  // one reconnect attempt at a time
  {
    std::lock_guard lk(mu_);
    if (sock_) return;
  }
  if (reader_.joinable()) reader_.join();
  std::shared_ptr<net::LineSocket> s;
  try {
    s = net::LineSocket::connect(conn_.host, conn_.port);
  } catch (const std::exception& e) {
    throw ConnError(device_id_ + ": " + e.what());
  }
  bool resub;
  {
    std::lock_guard lk(mu_);
    sock_ = s;
    resub = subscribed_;
  }
  reader_ = std::thread([this, s] { reader_loop(s); });
  if (resub) rpc("subscribe");
}

void SbiSession::close() {
  closing_ = true;
  std::shared_ptr<net::LineSocket> s;
  {
    std::lock_guard lk(mu_);
    s = sock_;
    sock_ = nullptr;
  }
  if (s) s->shutdown();
  if (reader_.joinable()) reader_.join();
  fail_all_pending("session closed");
  closing_ = false;
}

void SbiSession::fail_all_pending(const std::string& why) {
  std::lock_guard lk(mu_);
  for (auto& [id, p] : pending_) {
    p->done = true;
    p->is_error = true;
    p->error = why;
  }
  cv_.notify_all();
}

void SbiSession::reader_loop(std::shared_ptr<net::LineSocket> sock) {
  for (;;) {
    auto line = sock->read_line();
    if (!line) break;
    json msg = json::parse(*line, nullptr, false);
    if (msg.is_discarded()) continue;
    if (msg.contains("notification")) {
      NotificationSink sink;
      {
        std::lock_guard lk(mu_);
        sink = sink_;
      }
      if (sink) {
        Notification n = notification_from_json(msg);
        n.device_id = device_id_;
        sink(n);
      }
      continue;
    }
    if (!msg.contains("rpc-id")) continue;
    std::lock_guard lk(mu_);
    auto it = pending_.find(msg["rpc-id"].get<int64_t>());
    if (it == pending_.end()) continue;  // caller already timed out
    auto& p = *it->second;
    if (msg.contains("error")) {
      p.is_error = true;
      p.error = msg["error"].value("message", "rpc-error");
    } else {
      p.reply = msg.value("reply", json());
    }
    p.done = true;
    cv_.notify_all();
  }
  // session dropped (or close() shut us down)
  bool was_current = false;
  DropHandler drop;
  {
    std::lock_guard lk(mu_);
    if (sock_ == sock) {
      sock_ = nullptr;
      was_current = true;
    }
    drop = on_drop_;
    for (auto& [id, p] : pending_) {
      if (!p->done) {
        p->done = true;
        p->is_error = true;
        p->error = "connection lost";
      }
    }
    cv_.notify_all();
  }
  if (was_current && !closing_.load() && drop) drop(device_id_);
}

json SbiSession::rpc(const std::string& method, std::optional<json> payload,
                     std::optional<std::chrono::milliseconds> timeout) {
  const auto deadline = timeout.value_or(timeout_);
  std::shared_ptr<net::LineSocket> sock;
  {
    std::lock_guard lk(mu_);
    sock = sock_;
  }
  if (!sock) {
    open();  // throws ConnError when the device is unreachable
    std::lock_guard lk(mu_);
    sock = sock_;
    if (!sock) throw ConnError(device_id_ + ": not connected");
  }

  int64_t id;
  auto pending = std::make_shared<Pending>();
  {
    std::lock_guard lk(mu_);
    id = next_id_++;
    pending_[id] = pending;
  }
  json frame{{"rpc-id", id}, {"rpc", method}};
  if (payload) frame["payload"] = *payload;
  if (!sock->write_line(frame.dump())) {
    std::lock_guard lk(mu_);
    pending_.erase(id);
    throw ConnError(device_id_ + ": send failed");
  }
  std::unique_lock lk(mu_);
  bool ok = cv_.wait_for(lk, deadline, [&] { return pending->done; });
  pending_.erase(id);
  if (!ok) throw TimeoutError(device_id_ + ": rpc '" + method + "' timed out");
  if (pending->is_error) {
    if (pending->error == "connection lost" || pending->error == "session closed")
      throw ConnError(device_id_ + ": " + pending->error);
    throw RpcError(device_id_ + ": " + pending->error);
  }
  return pending->reply;
}

void SbiSession::edit_config(const EditPayload& payload,
                             std::optional<std::chrono::milliseconds> timeout) {
  rpc("edit-config", edit_payload_to_json(payload), timeout);
}

DeviceState SbiSession::get_state() { return device_state_from_json(rpc("get")); }

bool SbiSession::hello() {
  try {
    rpc("hello");
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

void SbiSession::subscribe() {
  rpc("subscribe");
  std::lock_guard lk(mu_);
  subscribed_ = true;
}

}  // namespace ocs::sbi
